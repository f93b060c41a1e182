//! Dense state-vector simulation: basis labels, gates, circuits and gate counting.
//!
//! Basis indices are big-endian: qubit 0 is the most significant bit, so
//! `|1100⟩` has index 12. Global phase is never significant.

mod bits;
mod circuit;
mod gate;
pub mod kernel;
mod state;

pub use bits::{BitPattern, MAX_PATTERN_LEN};
pub use circuit::{count_gates, simulate, Circuit, GateCounts};
pub use gate::{hadamard, pauli_x, rx, ry, rz, Gate, GateKind, Matrix2, UNITARY_TOL};
pub use state::{apply_gate, basis_state, overlap, StateVector, MAX_DENSE_QUBITS};

pub(crate) use state::inner;
