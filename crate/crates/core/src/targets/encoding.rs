//! Jordan-Wigner occupation encoding with interleaved spin orbitals.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::simcore::BitPattern;

use super::sparse::SparseState;

/// `|1⟩^m ⊗ |0⟩^(n−m)`.
pub fn hartree_fock(n: usize, m: usize) -> Result<BitPattern> {
    if m > n {
        return Err(Error::input(format!("{m} electrons do not fit in {n} spin orbitals")));
    }
    BitPattern::from_ones(n, &(0..m).collect::<Vec<_>>())
}

/// Lowest-orbital determinant with `n_alpha` α and `n_beta` β electrons.
pub fn reference_determinant(spatial_orbitals: usize, n_alpha: usize, n_beta: usize) -> Result<BitPattern> {
    encode_determinant(
        &(0..n_alpha).collect::<Vec<_>>(),
        &(0..n_beta).collect::<Vec<_>>(),
        spatial_orbitals,
    )
}

/// Qubit `2i` is α orbital `i`, qubit `2i+1` is β orbital `i`.
pub fn encode_determinant(occ_alpha: &[usize], occ_beta: &[usize], spatial_orbitals: usize) -> Result<BitPattern> {
    let n = 2 * spatial_orbitals;
    let mut p = BitPattern::zeros(n)?;
    for (spin, occ) in [(0, occ_alpha), (1, occ_beta)] {
        for &i in occ {
            if i >= spatial_orbitals {
                return Err(Error::input(format!(
                    "orbital {i} out of range for {spatial_orbitals} spatial orbitals"
                )));
            }
            let q = 2 * i + spin;
            if p.get(q) {
                return Err(Error::input(format!("orbital {i} listed twice")));
            }
            p = p.with(q, true);
        }
    }
    Ok(p)
}

/// Inverse of [`encode_determinant`]: occupied α and β spatial orbitals.
pub fn decode_determinant(p: &BitPattern) -> Result<(Vec<usize>, Vec<usize>)> {
    if !p.len().is_multiple_of(2) {
        return Err(Error::input(format!("pattern '{p}' has odd length; spin orbitals come in pairs")));
    }
    let ones = p.ones();
    Ok((
        ones.iter().filter(|q| *q % 2 == 0).map(|q| q / 2).collect(),
        ones.iter().filter(|q| *q % 2 == 1).map(|q| q / 2).collect(),
    ))
}

/// `2·S_z = n_α − n_β` of an interleaved pattern.
pub fn twice_sz(p: &BitPattern) -> i64 {
    p.ones().iter().map(|q| if q % 2 == 0 { 1 } else { -1 }).sum()
}

/// Particle number and spin projection shared by every entry, if any.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Symmetry {
    pub particles: Option<usize>,
    /// Twice the spin projection, kept integral.
    pub twice_sz: Option<i64>,
}

impl Symmetry {
    pub fn sz(&self) -> Option<f64> {
        self.twice_sz.map(|s| s as f64 / 2.0)
    }
}

impl fmt::Display for Symmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.particles {
            Some(n) => write!(f, "N={n}")?,
            None => f.write_str("N=mixed")?,
        }
        match self.sz() {
            Some(s) => write!(f, " Sz={s}"),
            None => f.write_str(" Sz=mixed"),
        }
    }
}

fn uniform<V: PartialEq + Copy>(mut it: impl Iterator<Item = V>) -> Option<V> {
    let first = it.next()?;
    it.all(|v| v == first).then_some(first)
}

/// Symmetry sectors of a state. `S_z` is reported only for even widths.
pub fn symmetry<T: Real>(state: &SparseState<T>) -> Symmetry {
    let pats = || state.entries().iter().map(|(p, _)| p);
    Symmetry {
        particles: uniform(pats().map(BitPattern::weight)),
        twice_sz: if state.n_qubits().is_multiple_of(2) { uniform(pats().map(twice_sz)) } else { None },
    }
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// `3·C(L, m_α)·C(L, m_β)`: CNOT bound of a symmetry-preserving ansatz
/// spanning the full particle/spin sector.
pub fn esp_cnot_bound(spatial_orbitals: u64, m_alpha: u64, m_beta: u64) -> Result<u128> {
    if m_alpha > spatial_orbitals || m_beta > spatial_orbitals {
        return Err(Error::input(format!(
            "occupations ({m_alpha}, {m_beta}) exceed {spatial_orbitals} spatial orbitals"
        )));
    }
    Ok(3 * binomial(spatial_orbitals, m_alpha) * binomial(spatial_orbitals, m_beta))
}
