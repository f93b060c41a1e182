//! Pauli-sum Hamiltonians and their exact ground states.

use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::{cast_complex, Real};
use crate::simcore::{BitPattern, StateVector};

use super::sparse::SparseState;

/// Largest register handled by [`ground_state`].
pub const MAX_GROUND_STATE_QUBITS: usize = 14;
/// Registers up to this size use dense diagonalization.
pub const DENSE_LIMIT: usize = 10;
pub const RESIDUAL_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct PauliTerm {
    pub coeff: f64,
    /// Letters from `IXYZ`; letter `i` acts on qubit `i`.
    pub word: String,
}

/// `H = Σ_k c_k P_k` with real coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliSumHamiltonian {
    n_qubits: usize,
    terms: Vec<PauliTerm>,
}

/// Bit-mask form of a Pauli word: `P|b⟩ = i^ny · (−1)^popcount(b & zy) |b ⊕ x⟩`.
#[derive(Clone, Copy, Debug)]
struct MaskedTerm {
    coeff: f64,
    x: usize,
    zy: usize,
    ny: u32,
}

impl MaskedTerm {
    #[inline]
    fn phase(&self, b: usize) -> Complex64 {
        let sign = if (b & self.zy).count_ones().is_multiple_of(2) { 1.0 } else { -1.0 };
        let ipow = match self.ny % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
        ipow * (sign * self.coeff)
    }
}

impl PauliSumHamiltonian {
    pub fn new(n_qubits: usize, terms: Vec<PauliTerm>) -> Result<Self> {
        if n_qubits == 0 || n_qubits > 62 {
            return Err(Error::input(format!("unsupported register width {n_qubits}")));
        }
        for t in &terms {
            check_word(&t.word, n_qubits)?;
            if !t.coeff.is_finite() {
                return Err(Error::input(format!("non-finite coefficient on '{}'", t.word)));
            }
        }
        Ok(Self { n_qubits, terms })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[PauliTerm] {
        &self.terms
    }

    /// Parses lines `coeff word`; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut terms = Vec::new();
        let mut width = None;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let l = raw.split('#').next().unwrap_or("").trim();
            if l.is_empty() {
                continue;
            }
            let err = |msg: String| Error::Parse { line, msg };
            let fields: Vec<&str> = l.split_whitespace().collect();
            if fields.len() != 2 {
                return Err(err(format!("expected 'coeff word', found '{l}'")));
            }
            let coeff: f64 = fields[0]
                .replace('\u{2212}', "-")
                .parse()
                .map_err(|_| err(format!("bad coefficient '{}'", fields[0])))?;
            let word = fields[1].to_ascii_uppercase();
            let n = *width.get_or_insert(word.len());
            check_word(&word, n).map_err(|e| err(e.to_string()))?;
            terms.push(PauliTerm { coeff, word });
        }
        let n = width.ok_or_else(|| Error::input("Hamiltonian has no terms"))?;
        Self::new(n, terms)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for t in &self.terms {
            writeln!(out, "{:e} {}", t.coeff, t.word).expect("string write");
        }
        out
    }

    fn masked(&self) -> Vec<MaskedTerm> {
        let n = self.n_qubits;
        self.terms
            .iter()
            .map(|t| {
                let mut m = MaskedTerm { coeff: t.coeff, x: 0, zy: 0, ny: 0 };
                for (q, ch) in t.word.chars().enumerate() {
                    let bit = 1usize << (n - 1 - q);
                    match ch {
                        'X' => m.x |= bit,
                        'Y' => {
                            m.x |= bit;
                            m.zy |= bit;
                            m.ny += 1;
                        }
                        'Z' => m.zy |= bit,
                        _ => {}
                    }
                }
                m
            })
            .collect()
    }

    /// `H v` on a dense vector.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let terms = self.masked();
        (0..v.len())
            .into_par_iter()
            .map(|i| {
                terms.iter().fold(Complex64::new(0.0, 0.0), |acc, t| {
                    let j = i ^ t.x;
                    acc + t.phase(j) * v[j]
                })
            })
            .collect()
    }

    /// `⟨b|H|b⟩`.
    pub fn diagonal(&self, b: usize) -> f64 {
        self.masked()
            .iter()
            .filter(|t| t.x == 0)
            .map(|t| t.phase(b).re)
            .sum()
    }

    /// Dense matrix; intended for small registers.
    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let dim = 1usize << self.n_qubits;
        let terms = self.masked();
        let mut m = DMatrix::zeros(dim, dim);
        for t in &terms {
            for b in 0..dim {
                m[(b ^ t.x, b)] += t.phase(b);
            }
        }
        m
    }

    pub fn expectation(&self, v: &[Complex64]) -> f64 {
        let hv = self.apply(v);
        v.iter().zip(&hv).map(|(a, b)| (a.conj() * b).re).sum()
    }
}

fn check_word(word: &str, n: usize) -> Result<()> {
    if word.len() != n {
        return Err(Error::input(format!("word '{word}' has length {} but expected {n}", word.len())));
    }
    if let Some(ch) = word.chars().find(|c| !"IXYZ".contains(*c)) {
        return Err(Error::input(format!("invalid Pauli letter '{ch}' in '{word}'")));
    }
    Ok(())
}

/// Open-chain transverse-field Ising model `−J Σ X_i X_{i+1} − h Σ Z_i`.
pub fn transverse_field_ising(n: usize, coupling: f64, field: f64) -> Result<PauliSumHamiltonian> {
    if n < 2 {
        return Err(Error::input("the Ising chain needs at least two sites"));
    }
    let word = |pairs: &[(usize, char)]| {
        let mut w = vec!['I'; n];
        for &(q, ch) in pairs {
            w[q] = ch;
        }
        w.into_iter().collect::<String>()
    };
    let mut terms = Vec::with_capacity(2 * n - 1);
    for i in 0..n - 1 {
        terms.push(PauliTerm { coeff: -coupling, word: word(&[(i, 'X'), (i + 1, 'X')]) });
    }
    for i in 0..n {
        terms.push(PauliTerm { coeff: -field, word: word(&[(i, 'Z')]) });
    }
    PauliSumHamiltonian::new(n, terms)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Solver {
    Dense,
    Lanczos,
}

#[derive(Clone, Debug)]
pub struct GroundStateOptions {
    /// Amplitudes with `|c|` at or below this are dropped.
    pub amp_cutoff: f64,
    /// Basis state used to pick a vector inside a degenerate ground space.
    /// Defaults to the lowest-diagonal-energy basis state.
    pub reference: Option<BitPattern>,
    pub max_restarts: usize,
    pub krylov_dim: usize,
}

impl Default for GroundStateOptions {
    fn default() -> Self {
        Self { amp_cutoff: 1e-12, reference: None, max_restarts: 60, krylov_dim: 120 }
    }
}

#[derive(Clone, Debug)]
pub struct GroundState<T> {
    pub state: SparseState<T>,
    pub energy: f64,
    /// `‖Hψ − Eψ‖` before the amplitude cutoff.
    pub residual: f64,
    pub solver: Solver,
}

/// Lowest eigenvector of `h`. Degenerate ground spaces are resolved by
/// projecting the reference basis state onto them, and the global phase is
/// fixed so that the largest amplitude is real and positive.
pub fn ground_state<T: Real>(h: &PauliSumHamiltonian, opts: &GroundStateOptions) -> Result<GroundState<T>> {
    let n = h.n_qubits();
    if n > MAX_GROUND_STATE_QUBITS {
        return Err(Error::input(format!(
            "ground states are limited to {MAX_GROUND_STATE_QUBITS} qubits, got {n}"
        )));
    }
    let dim = 1usize << n;
    let reference = match &opts.reference {
        Some(p) if p.len() != n => {
            return Err(Error::input(format!("reference '{p}' does not match {n} qubits")));
        }
        Some(p) => p.index() as usize,
        None => (0..dim)
            .map(|b| (h.diagonal(b), b))
            .fold((f64::INFINITY, 0), |best, cur| if cur.0 < best.0 { cur } else { best })
            .1,
    };
    let (mut vec, solver) = if n <= DENSE_LIMIT {
        (dense_ground(h, reference), Solver::Dense)
    } else {
        (lanczos_ground(h, reference, opts)?, Solver::Lanczos)
    };
    fix_phase(&mut vec);
    let energy = h.expectation(&vec);
    let hv = h.apply(&vec);
    let residual = hv
        .iter()
        .zip(&vec)
        .map(|(a, b)| (a - b * energy).norm_sqr())
        .sum::<f64>()
        .sqrt();
    if residual > RESIDUAL_TOL {
        return Err(Error::NoConvergence { residual, iterations: opts.max_restarts });
    }
    let amps = vec.iter().map(|&a| cast_complex(a)).collect();
    let dense = StateVector::<T>::from_amplitudes(n, amps)?;
    let state = SparseState::from_dense(&dense, T::lit(opts.amp_cutoff))?.normalized()?;
    Ok(GroundState { state, energy, residual, solver })
}

fn normalize(v: &mut [Complex64]) -> f64 {
    let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|a| *a /= norm);
    }
    norm
}

fn fix_phase(v: &mut [Complex64]) {
    let mut best = 0;
    for (i, a) in v.iter().enumerate() {
        if a.norm() > v[best].norm() + 1e-12 {
            best = i;
        }
    }
    let phase = v[best].conj() / v[best].norm();
    v.iter_mut().for_each(|a| *a *= phase);
}

fn dense_ground(h: &PauliSumHamiltonian, reference: usize) -> Vec<Complex64> {
    let eig = h.to_dense().symmetric_eigen();
    let e0 = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    let degenerate: Vec<usize> = (0..eig.eigenvalues.len())
        .filter(|&k| eig.eigenvalues[k] - e0 <= 1e-8 * (1.0 + e0.abs()))
        .collect();
    let dim = eig.eigenvalues.len();
    let project = |r: usize| {
        let mut v = vec![Complex64::new(0.0, 0.0); dim];
        for &k in &degenerate {
            let col = eig.eigenvectors.column(k);
            let w = col[r].conj();
            for (vi, ci) in v.iter_mut().zip(col.iter()) {
                *vi += ci * w;
            }
        }
        v
    };
    let mut v = project(reference);
    if normalize(&mut v) < 1e-6 {
        // Reference orthogonal to the ground space: take the basis state with
        // the largest weight in it.
        let best = (0..dim)
            .map(|r| (degenerate.iter().map(|&k| eig.eigenvectors[(r, k)].norm_sqr()).sum::<f64>(), r))
            .fold((0.0, 0), |b, c| if c.0 > b.0 + 1e-12 { c } else { b })
            .1;
        v = project(best);
        normalize(&mut v);
    }
    v
}

/// Restarted Lanczos with full reorthogonalization, started from the
/// reference basis state.
fn lanczos_ground(h: &PauliSumHamiltonian, reference: usize, opts: &GroundStateOptions) -> Result<Vec<Complex64>> {
    let dim = 1usize << h.n_qubits();
    let mut start = vec![Complex64::new(0.0, 0.0); dim];
    start[reference] = Complex64::new(1.0, 0.0);
    let mut residual = f64::INFINITY;
    for _ in 0..opts.max_restarts.max(1) {
        let mut basis: Vec<Vec<Complex64>> = vec![start.clone()];
        let mut alpha = Vec::new();
        let mut beta: Vec<f64> = Vec::new();
        for j in 0..opts.krylov_dim.min(dim) {
            let mut w = h.apply(&basis[j]);
            let a: f64 = basis[j].iter().zip(&w).map(|(x, y)| (x.conj() * y).re).sum();
            alpha.push(a);
            for _ in 0..2 {
                for b in &basis {
                    let proj: Complex64 = b.iter().zip(&w).map(|(x, y)| x.conj() * y).sum();
                    w.iter_mut().zip(b).for_each(|(wi, bi)| *wi -= bi * proj);
                }
            }
            let nb = normalize(&mut w);
            if nb < 1e-12 || j + 1 == opts.krylov_dim.min(dim) {
                break;
            }
            beta.push(nb);
            basis.push(w);
        }
        let k = alpha.len();
        let mut t = DMatrix::<f64>::zeros(k, k);
        for i in 0..k {
            t[(i, i)] = alpha[i];
            if i + 1 < k {
                t[(i, i + 1)] = beta[i];
                t[(i + 1, i)] = beta[i];
            }
        }
        let eig = t.symmetric_eigen();
        let imin = eig.eigenvalues.imin();
        let y: DVector<f64> = eig.eigenvectors.column(imin).into_owned();
        let mut ritz = vec![Complex64::new(0.0, 0.0); dim];
        for (coef, b) in y.iter().zip(&basis) {
            ritz.iter_mut().zip(b).for_each(|(r, bi)| *r += bi * *coef);
        }
        normalize(&mut ritz);
        let e = eig.eigenvalues[imin];
        residual = h
            .apply(&ritz)
            .iter()
            .zip(&ritz)
            .map(|(a, b)| (a - b * e).norm_sqr())
            .sum::<f64>()
            .sqrt();
        if residual <= RESIDUAL_TOL * 1e-2 {
            return Ok(ritz);
        }
        start = ritz;
    }
    if residual <= RESIDUAL_TOL {
        // Converged loosely; the caller re-checks the residual.
        return Ok(start);
    }
    Err(Error::NoConvergence { residual, iterations: opts.max_restarts })
}
