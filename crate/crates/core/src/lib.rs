//! Sparse quantum state preparation on a state-vector simulator.
//!
//! Two routes prepare a sparse target `Σ c_p |p⟩`: exact loading with
//! [`cvoqram`], and adaptive variational growth with [`adapt`] over the
//! operator [`pools`]. [`targets`] builds and truncates target states.
//!
//! Everything numeric is generic over [`scalar::Real`] (`f32` or `f64`);
//! the aliases below fix the scalar to `f64` or `f32`.

pub mod adapt;
pub mod cvoqram;
pub mod error;
pub mod linalg;
pub mod pools;
pub mod scalar;
pub mod simcore;
pub mod targets;

pub use error::{Error, Result};
pub use simcore::{BitPattern, GateCounts};

pub type Complex64 = num_complex::Complex<f64>;
pub type StateVector64 = simcore::StateVector<f64>;
pub type StateVector32 = simcore::StateVector<f32>;
pub type Circuit64 = simcore::Circuit<f64>;
pub type Circuit32 = simcore::Circuit<f32>;
pub type Gate64 = simcore::Gate<f64>;
pub type SparseState64 = targets::SparseState<f64>;
pub type SparseState32 = targets::SparseState<f32>;
pub type LoadPlan64 = cvoqram::LoadPlan<f64>;
pub type Pool64 = pools::Pool<f64>;
pub type Ansatz64 = adapt::Ansatz<f64>;
