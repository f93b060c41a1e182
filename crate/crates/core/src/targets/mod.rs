//! Target wave functions: sparse states, occupation encoding, truncation,
//! spectra, exact ground states of Pauli sums and synthetic CI-like states.

mod encoding;
mod hamiltonian;
mod sparse;
mod synth;
mod truncate;

pub use encoding::{
    binomial, decode_determinant, encode_determinant, esp_cnot_bound, hartree_fock, reference_determinant,
    symmetry, twice_sz, Symmetry,
};
pub use hamiltonian::{
    ground_state, transverse_field_ising, GroundState, GroundStateOptions, PauliSumHamiltonian, PauliTerm, Solver,
    DENSE_LIMIT, MAX_GROUND_STATE_QUBITS, RESIDUAL_TOL,
};
pub use sparse::{Metadata, Ordering, SparseState, NORM_TOL};
pub use synth::{synthetic_target, SynthConfig};
pub use truncate::{ranked, spectrum, spectrum_csv, truncate, Keep, SpectrumRow, SPECTRUM_CSV_VERSION};
