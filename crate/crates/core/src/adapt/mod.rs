//! Overlap-driven adaptive ansatz growth.
//!
//! Each iteration screens the pool by the first-order change of the
//! fidelity `F = |⟨ψ|T⟩|²`, appends the best operator at angle zero and
//! re-optimizes every angle with BFGS.

mod ansatz;
pub mod bfgs;
mod run;
mod screen;

pub use ansatz::{evaluate, fidelity_and_gradient, gradient, objective, Ansatz};
pub use run::{
    resume, run, AdaptConfig, AdaptOutcome, AdaptStatus, AdaptTrace, TraceRecord, RESTART_AMPLITUDE, SCORE_FLOOR,
    TRACE_HEADER,
};
pub use screen::{screen, Candidate, ZERO_OVERLAP_TOL};
