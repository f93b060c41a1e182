use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::scalar::{c, Real};
use crate::simcore::BitPattern;

use super::encoding::{binomial, encode_determinant, reference_determinant};
use super::sparse::{Metadata, Ordering, SparseState};

/// Parameters of a synthetic CI-like target.
#[derive(Clone, Debug, PartialEq)]
pub struct SynthConfig {
    /// Spin orbitals; must be even.
    pub n_qubits: usize,
    /// Sparsity `M`.
    pub sparsity: usize,
    pub n_alpha: usize,
    pub n_beta: usize,
    /// Ratio between consecutive amplitude magnitudes.
    pub decay: f64,
    /// Random complex phases instead of random signs.
    pub complex_phases: bool,
    pub seed: u64,
}

impl SynthConfig {
    pub fn sector_size(&self) -> u128 {
        let l = (self.n_qubits / 2) as u64;
        binomial(l, self.n_alpha as u64) * binomial(l, self.n_beta as u64)
    }
}

fn random_subset(rng: &mut ChaCha8Rng, l: usize, k: usize) -> Vec<usize> {
    sample(rng, l, k).into_vec()
}

/// Seeded synthetic target in a fixed `(N, S_z)` sector.
///
/// The reference determinant (lowest orbitals filled) is always present. The
/// other `M−1` patterns are drawn uniformly from the sector, then all
/// patterns are ranked by excitation level relative to the reference (ties
/// by draw order) and the `k`-th gets magnitude `decay^k` with a random sign
/// or phase.
pub fn synthetic_target<T: Real>(cfg: &SynthConfig) -> Result<SparseState<T>> {
    if cfg.n_qubits == 0 || !cfg.n_qubits.is_multiple_of(2) {
        return Err(Error::input(format!("{} spin orbitals is not a positive even count", cfg.n_qubits)));
    }
    let l = cfg.n_qubits / 2;
    if cfg.n_alpha > l || cfg.n_beta > l {
        return Err(Error::input(format!(
            "sector ({}, {}) does not fit in {l} spatial orbitals",
            cfg.n_alpha, cfg.n_beta
        )));
    }
    if cfg.sparsity == 0 || cfg.sparsity as u128 > cfg.sector_size() {
        return Err(Error::input(format!(
            "sparsity {} outside 1..={} for this sector",
            cfg.sparsity,
            cfg.sector_size()
        )));
    }
    if !(cfg.decay > 0.0 && cfg.decay <= 1.0) {
        return Err(Error::input(format!("decay {} outside (0, 1]", cfg.decay)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let hf = reference_determinant(l, cfg.n_alpha, cfg.n_beta)?;
    let mut seen: HashSet<BitPattern> = HashSet::from([hf]);
    let mut patterns = vec![hf];
    while patterns.len() < cfg.sparsity {
        let a = random_subset(&mut rng, l, cfg.n_alpha);
        let b = random_subset(&mut rng, l, cfg.n_beta);
        let p = encode_determinant(&a, &b, l)?;
        if seen.insert(p) {
            patterns.push(p);
        }
    }
    let excitation = |p: &BitPattern| {
        let diff = BitPattern::from_index(p.len(), p.index() ^ hf.index()).expect("same length");
        diff.weight() / 2
    };
    // Stable sort keeps draw order within an excitation level.
    patterns.sort_by_key(excitation);
    let mut entries = Vec::with_capacity(patterns.len());
    for (k, p) in patterns.into_iter().enumerate() {
        let mag = cfg.decay.powi(k as i32);
        let phase = if k == 0 {
            c(1.0, 0.0)
        } else if cfg.complex_phases {
            let t: f64 = rng.random::<f64>() * std::f64::consts::TAU;
            c(t.cos(), t.sin())
        } else if rng.random::<bool>() {
            c(1.0, 0.0)
        } else {
            c(-1.0, 0.0)
        };
        entries.push((p, c(T::lit(mag * phase.re), T::lit(mag * phase.im))));
    }
    let state = SparseState::new(cfg.n_qubits, entries)?.normalized()?;
    Ok(state.with_metadata(Metadata {
        electrons: Some(cfg.n_alpha + cfg.n_beta),
        spatial_orbitals: Some(l),
        ordering: Ordering::Interleaved,
    }))
}
