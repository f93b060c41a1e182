use std::cell::Cell;

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{c, Real};
use crate::simcore::{BitPattern, Matrix2};
use crate::targets::SparseState;

/// Default tolerance on the input norm.
pub const INPUT_NORM_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PreprocessOptions {
    /// Sort patterns by Hamming weight. Disabling this breaks the loader and
    /// exists only to demonstrate that.
    pub sort: bool,
    /// Accept any nonzero norm and rescale.
    pub renormalize: bool,
    pub norm_tol: f64,
}

impl Default for PreprocessOptions {
    fn default() -> Self {
        Self { sort: true, renormalize: false, norm_tol: INPUT_NORM_TOL }
    }
}

/// One pattern of the load order.
#[derive(Clone, Debug, PartialEq)]
pub struct LoadStep<T> {
    pub pattern: BitPattern,
    pub x: Complex<T>,
    /// Weight still to be loaded before this step.
    pub gamma: T,
    /// Positions of the ones in `pattern`.
    pub ones: Vec<usize>,
}

impl<T> LoadStep<T> {
    /// Hamming weight `t`.
    pub fn weight(&self) -> usize {
        self.ones.len()
    }
}

/// Operation tallies of preprocessing.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ClassicalCost {
    pub comparisons: u64,
    pub bit_ops: u64,
    pub unitaries: u64,
}

impl ClassicalCost {
    pub fn total(&self) -> u64 {
        self.comparisons + self.bit_ops + self.unitaries
    }
}

/// Ordered patterns with their remaining weights.
#[derive(Clone, Debug, PartialEq)]
pub struct LoadPlan<T> {
    n_qubits: usize,
    steps: Vec<LoadStep<T>>,
    gammas: Vec<T>,
    cost: ClassicalCost,
}

impl<T: Real> LoadPlan<T> {
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn steps(&self) -> &[LoadStep<T>] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// `γ_0 … γ_M`, with `γ_0 = 1` and `γ_M = 0`.
    pub fn gammas(&self) -> &[T] {
        &self.gammas
    }

    /// `μ_t` for `t = 0..=n`.
    pub fn mu_histogram(&self) -> Vec<u64> {
        let mut mu = vec![0u64; self.n_qubits + 1];
        for s in &self.steps {
            mu[s.weight()] += 1;
        }
        mu
    }

    pub fn t_max(&self) -> usize {
        self.steps.iter().map(LoadStep::weight).max().unwrap_or(0)
    }

    pub fn classical_cost(&self) -> ClassicalCost {
        self.cost
    }

    /// The loaded state as a sparse state.
    pub fn target(&self) -> Result<SparseState<T>> {
        SparseState::new(self.n_qubits, self.steps.iter().map(|s| (s.pattern, s.x)).collect())
    }
}

/// Orders the patterns and computes the remaining-weight sequence.
///
/// Entries with zero amplitude are dropped. Patterns are sorted by
/// non-decreasing Hamming weight, ties in pattern order.
pub fn preprocess<T: Real>(state: &SparseState<T>, opts: &PreprocessOptions) -> Result<LoadPlan<T>> {
    let n = state.n_qubits();
    let mut items: Vec<(BitPattern, Complex<T>)> = state
        .entries()
        .iter()
        .filter(|(_, x)| x.norm_sqr() > T::zero())
        .copied()
        .collect();
    if items.is_empty() {
        return Err(Error::input("nothing to load: the state has no nonzero amplitudes"));
    }
    let norm_sqr = items.iter().fold(T::zero(), |a, (_, x)| a + x.norm_sqr());
    if !opts.renormalize && (norm_sqr - T::one()).abs().to_f64_lossy() > opts.norm_tol {
        return Err(Error::input(format!(
            "input norm² is {} (tolerance {}); pass renormalize to rescale",
            norm_sqr, opts.norm_tol
        )));
    }
    let scale = norm_sqr.sqrt();
    for (_, x) in &mut items {
        *x /= scale;
    }

    let m = items.len() as u64;
    let comparisons = Cell::new(0u64);
    if opts.sort {
        items.sort_by(|a, b| {
            comparisons.set(comparisons.get() + 1);
            a.0.weight().cmp(&b.0.weight()).then(a.0.cmp(&b.0))
        });
    }

    let mut gammas = vec![T::zero(); items.len() + 1];
    for k in (0..items.len()).rev() {
        gammas[k] = gammas[k + 1] + items[k].1.norm_sqr();
    }
    let steps: Vec<LoadStep<T>> = items
        .iter()
        .zip(&gammas)
        .map(|(&(pattern, x), &gamma)| LoadStep { pattern, x, gamma, ones: pattern.ones() })
        .collect();
    let cost = ClassicalCost {
        comparisons: comparisons.get(),
        // Weight during sorting plus the one-position scan, n bits each.
        bit_ops: 2 * n as u64 * m,
        unitaries: m,
    };
    Ok(LoadPlan { n_qubits: n, steps, gammas, cost })
}

/// `(1/√γ)·[[a, x], [−x̄, a]]` with `a = √(γ − |x|²)`, so that
/// `U|1⟩ = (x|0⟩ + a|1⟩)/√γ`.
///
/// Degenerate weights are reported as step 0; [`super::compile`] reports the
/// actual step.
pub fn u_matrix<T: Real>(x: Complex<T>, gamma: T) -> Result<Matrix2<T>> {
    u_matrix_at(0, x, gamma)
}

pub(crate) fn u_matrix_at<T: Real>(step: usize, x: Complex<T>, gamma: T) -> Result<Matrix2<T>> {
    if gamma.is_nan() || gamma <= T::zero() {
        return Err(Error::DegenerateStep { step, gamma: gamma.to_f64_lossy() });
    }
    let rest = gamma - x.norm_sqr();
    if rest < -T::lit(1e-12) {
        return Err(Error::input(format!(
            "amplitude weight {} exceeds remaining weight {}",
            x.norm_sqr(),
            gamma
        )));
    }
    let a = c(rest.max(T::zero()).sqrt(), T::zero());
    let s = gamma.sqrt();
    Ok([[a / s, x / s], [-x.conj() / s, a / s]])
}

/// `Σ_{t≥1} μ_t(8t − 4) − t_max`.
pub fn cnot_count<T: Real>(plan: &LoadPlan<T>) -> u64 {
    let mu = plan.mu_histogram();
    let sum: u64 = mu.iter().enumerate().skip(1).map(|(t, &m)| m * (8 * t as u64 - 4)).sum();
    sum - plan.t_max() as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;

    fn state(entries: &[(&str, Complex<f64>)]) -> SparseState<f64> {
        let n = entries[0].0.len();
        SparseState::new(n, entries.iter().map(|(p, x)| (p.parse().unwrap(), *x)).collect()).unwrap()
    }

    #[test]
    fn sorts_by_weight() {
        let (a, b) = (c(0.6, 0.0), c(0.0, 0.8));
        let plan = preprocess(&state(&[("11", a), ("01", b)]), &PreprocessOptions::default()).unwrap();
        let order: Vec<String> = plan.steps().iter().map(|s| s.pattern.to_string()).collect();
        assert_eq!(order, ["01", "11"]);
        assert_eq!(plan.steps()[0].x, b);
    }

    #[test]
    fn gamma_sequences() {
        let h = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let plan = preprocess(&state(&[("10", h), ("01", h)]), &PreprocessOptions::default()).unwrap();
        let g = plan.gammas();
        assert!((g[0] - 1.0).abs() < 1e-15 && (g[1] - 0.5).abs() < 1e-15 && g[2] == 0.0);

        let plan = preprocess(&state(&[("101", c(1.0, 0.0))]), &PreprocessOptions::default()).unwrap();
        assert_eq!(plan.gammas(), &[1.0, 0.0]);
        assert_eq!(plan.t_max(), 2);
        assert_eq!(plan.steps()[0].ones, vec![0, 2]);
    }

    #[test]
    fn norm_checks() {
        let s = state(&[("0", c(0.5, 0.0)), ("1", c(0.5, 0.0))]);
        assert!(preprocess(&s, &PreprocessOptions::default()).unwrap_err().is_input());
        let opts = PreprocessOptions { renormalize: true, ..Default::default() };
        let plan = preprocess(&s, &opts).unwrap();
        assert!((plan.gammas()[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn u_matrix_examples() {
        let u = u_matrix(c(1.0, 0.0), 1.0).unwrap();
        assert_eq!(u[0][1], c(1.0, 0.0));
        assert_eq!(u[1][1], c(0.0, 0.0));
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let u = u_matrix(c(r, 0.0), 1.0).unwrap();
        for (got, want) in [(u[0][0], r), (u[0][1], r), (u[1][0], -r), (u[1][1], r)] {
            assert!((got.re - want).abs() < 1e-15 && got.im == 0.0);
        }
        let u = u_matrix(c(0.0, 0.5), 0.25).unwrap();
        assert!((u[0][1] - c(0.0, 1.0)).norm() < 1e-15 && u[1][1].norm() < 1e-15);
        assert!(Matrix::from_rows(u_matrix(c(0.3, -0.4), 0.5).unwrap()).is_unitary(1e-14));
        assert!(matches!(u_matrix(c(0.1, 0.0), 0.0), Err(Error::DegenerateStep { .. })));
        assert!(u_matrix(c(0.8, 0.0), 0.5).unwrap_err().is_input());
    }

    #[test]
    fn formula_spot_values() {
        let one = |p: &str| preprocess(&state(&[(p, c(1.0, 0.0))]), &PreprocessOptions::default()).unwrap();
        assert_eq!(cnot_count(&one("11100")), 17);
        assert_eq!(cnot_count(&one("0000")), 0);
        let h = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let plan = preprocess(&state(&[("110", h), ("010", h)]), &PreprocessOptions::default()).unwrap();
        assert_eq!(cnot_count(&plan), 14);
    }

    #[test]
    fn classical_cost_scales_linearly_in_n() {
        let cost = |n: usize, m: usize| {
            let amp = c(1.0 / (m as f64).sqrt(), 0.0);
            let entries = (0..m as u64).map(|i| (BitPattern::from_index(n, i * 2654435761 % (1u64 << 31)).unwrap(), amp));
            let s = SparseState::new(n, entries.collect()).unwrap();
            preprocess(&s, &PreprocessOptions::default()).unwrap().classical_cost().total() as f64
        };
        assert!(cost(64, 1) > 0.0);
        let r = cost(64, 1024) / cost(32, 1024);
        assert!((r - 2.0).abs() < 0.4, "ratio {r}");
    }
}
