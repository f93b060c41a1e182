//! Exact sparse-state loading with one ancilla.
//!
//! Patterns are loaded one at a time. Before step `k` the register holds
//! the already-loaded patterns on ancilla `|0⟩` and the remaining weight
//! `√γ_k` on `|0…0⟩|1⟩`. Each step copies the next pattern into the `|1⟩`
//! branch, splits off its amplitude with a multi-controlled rotation of the
//! ancilla, and uncomputes the copy.

mod compile;
mod plan;

pub use compile::{
    ancilla_weight, check_invariant, compile, compile_segments, emitted_cnot_accounting, expected_state,
    register_state, run_instrumented, CountsReport, Instrumented, Segments,
};
pub use plan::{
    cnot_count, preprocess, u_matrix, ClassicalCost, LoadPlan, LoadStep, PreprocessOptions, INPUT_NORM_TOL,
};
