use std::fmt;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{pauli_word_matrix, Matrix};
use crate::scalar::{c, Real};
use crate::simcore::kernel::{self, LocalLayout, SparseRows};
use crate::simcore::{Circuit, Gate, GateCounts};

use super::templates;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorKind {
    QebSingle,
    QebDouble,
    QubitString,
}

impl fmt::Display for OperatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OperatorKind::QebSingle => "qeb_single",
            OperatorKind::QebDouble => "qeb_double",
            OperatorKind::QubitString => "qubit_string",
        })
    }
}

/// Hermitian generator `G` on a small support; the pool unitary is `exp(iθG)`.
#[derive(Clone, Debug)]
pub struct PoolOperator<T> {
    id: String,
    kind: OperatorKind,
    support: Vec<usize>,
    generator: Matrix<T>,
    generator_sq: Matrix<T>,
    /// Pauli letters on `support`, for string operators.
    word: Option<String>,
    rows: SparseRows<T>,
}

/// Signed Pauli words, in support order `(p, q, r, s)`, of the double
/// excitation generator (before the overall factor 1/8).
const QEB_DOUBLE_TERMS: [(f64, &str); 8] = [
    (1.0, "XXXY"),
    (1.0, "XXYX"),
    (1.0, "YXYY"),
    (1.0, "XYYY"),
    (-1.0, "YXXX"),
    (-1.0, "XYXX"),
    (-1.0, "YYYX"),
    (-1.0, "YYXY"),
];

fn weighted_sum<T: Real>(terms: &[(f64, &str)], scale: f64) -> Matrix<T> {
    let dim = 1 << terms[0].1.len();
    terms.iter().fold(Matrix::zeros(dim), |acc, (w, word)| {
        let m = pauli_word_matrix::<T>(word).expect("valid word");
        &acc + &m.scale(c(T::lit(w * scale), T::zero()))
    })
}

fn distinct(support: &[usize]) -> bool {
    support.iter().enumerate().all(|(i, q)| !support[..i].contains(q))
}

impl<T: Real> PoolOperator<T> {
    fn build(id: String, kind: OperatorKind, support: Vec<usize>, generator: Matrix<T>, word: Option<String>) -> Self {
        let generator_sq = &generator * &generator;
        let rows = generator.sparse_rows();
        Self { id, kind, support, generator, generator_sq, word, rows }
    }

    /// `½(X_q Y_p − X_p Y_q)` on `(p, q)`: `|01⟩ → i|10⟩`, `|10⟩ → −i|01⟩`.
    pub fn qeb_single(p: usize, q: usize) -> Result<Self> {
        if p == q {
            return Err(Error::input("single excitation needs two distinct qubits"));
        }
        let g = weighted_sum(&[(1.0, "YX"), (-1.0, "XY")], 0.5);
        Ok(Self::build(format!("qeb_s_{p}_{q}"), OperatorKind::QebSingle, vec![p, q], g, None))
    }

    /// Double excitation between pairs `(p, q)` and `(r, s)`:
    /// `|1100⟩ ↔ |0011⟩` on the support `(p, q, r, s)`.
    pub fn qeb_double(p: usize, q: usize, r: usize, s: usize) -> Result<Self> {
        let support = vec![p, q, r, s];
        if !distinct(&support) {
            return Err(Error::input("double excitation needs four distinct qubits"));
        }
        let g = weighted_sum(&QEB_DOUBLE_TERMS, 0.125);
        Ok(Self::build(format!("qeb_d_{p}_{q}_{r}_{s}"), OperatorKind::QebDouble, support, g, None))
    }

    /// Pauli word `word[i]` on `support[i]`, letters from `XYZ`.
    pub fn pauli_string(word: &str, support: &[usize]) -> Result<Self> {
        if word.len() != support.len() || word.is_empty() {
            return Err(Error::input(format!("word '{word}' does not match support {support:?}")));
        }
        if word.chars().any(|ch| !"XYZ".contains(ch)) {
            return Err(Error::input(format!("word '{word}' must use only X, Y and Z")));
        }
        if !distinct(support) {
            return Err(Error::input(format!("support {support:?} repeats a qubit")));
        }
        let label = label(word, support);
        let g = pauli_word_matrix(word).expect("validated word");
        Ok(Self::build(format!("q_{label}"), OperatorKind::QubitString, support.to_vec(), g, Some(word.to_owned())))
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn generator(&self) -> &Matrix<T> {
        &self.generator
    }

    /// Pauli word with qubit indices, e.g. `X0Y3`.
    pub fn pauli_label(&self) -> Option<String> {
        self.word.as_deref().map(|w| label(w, &self.support))
    }

    /// `exp(iθG)` on the support.
    pub fn exponential(&self, theta: T) -> Matrix<T> {
        let dim = self.generator.dim();
        let (s, co) = theta.sin_cos();
        let id = Matrix::identity(dim);
        match self.kind {
            OperatorKind::QubitString => &id.scale(c(co, T::zero())) + &self.generator.scale(c(T::zero(), s)),
            _ => {
                let lin = self.generator.scale(c(T::zero(), s));
                let quad = self.generator_sq.scale(c(co - T::one(), T::zero()));
                &(&id + &lin) + &quad
            }
        }
    }

    pub fn gate(&self, theta: T) -> Gate<T> {
        Gate::LocalUnitary { qubits: self.support.clone(), matrix: self.exponential(theta) }
    }

    /// Applies `exp(iθG)` in place to an `n`-qubit amplitude array.
    pub fn apply_exponential(&self, amps: &mut [Complex<T>], n: usize, theta: T) {
        let layout = LocalLayout::new(n, &self.support);
        kernel::apply_local(amps, &layout, &self.exponential(theta).sparse_rows());
    }

    /// `⟨bra|G|ket⟩`.
    pub fn generator_element(&self, bra: &[Complex<T>], ket: &[Complex<T>], n: usize) -> Complex<T> {
        let layout = LocalLayout::new(n, &self.support);
        kernel::local_matrix_element(bra, ket, &layout, &self.rows)
    }

    /// Hardware circuit for `exp(iθG)` on an `n`-qubit register.
    pub fn template(&self, n: usize, theta: T) -> Result<Circuit<T>> {
        let s = &self.support;
        match self.kind {
            OperatorKind::QebSingle => templates::qeb_single_template(n, s[0], s[1], theta),
            OperatorKind::QebDouble => templates::qeb_double_template(n, s[0], s[1], s[2], s[3], theta),
            OperatorKind::QubitString => {
                templates::pauli_string_template(n, self.word.as_deref().expect("string operator"), s, theta)
            }
        }
    }

    /// Gate counts of [`PoolOperator::template`], independent of θ.
    pub fn template_counts(&self) -> GateCounts {
        match self.kind {
            OperatorKind::QebSingle => templates::QEB_SINGLE_COUNTS,
            OperatorKind::QebDouble => templates::QEB_DOUBLE_COUNTS,
            OperatorKind::QubitString => templates::pauli_string_counts(self.word.as_deref().expect("string operator")),
        }
    }
}

fn label(word: &str, support: &[usize]) -> String {
    word.chars().zip(support).map(|(ch, q)| format!("{ch}{q}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{cone, czero};

    fn cubed_equals<T: Real>(g: &Matrix<T>) -> T {
        (&(g * g) * g).max_abs_diff(g)
    }

    #[test]
    fn qeb_single_action() {
        let op = PoolOperator::<f64>::qeb_single(0, 1).unwrap();
        let g = op.generator();
        assert!(g.is_hermitian(1e-15));
        assert!(cubed_equals(g) < 1e-15);
        assert_eq!(g.get(0b10, 0b01), c(0.0, 1.0));
        assert_eq!(g.get(0b01, 0b10), c(0.0, -1.0));
        for b in [0b00, 0b11] {
            assert!((0..4).all(|r| g.get(r, b) == czero()));
        }
    }

    #[test]
    fn qeb_double_action() {
        let op = PoolOperator::<f64>::qeb_double(0, 1, 2, 3).unwrap();
        let g = op.generator();
        assert!(g.is_hermitian(1e-15));
        assert!(cubed_equals(g) < 1e-15);
        assert!((g.get(0b0011, 0b1100) - c(0.0, 1.0)).norm() < 1e-15);
        let nonzero = g.data().iter().filter(|z| z.norm() > 1e-15).count();
        assert_eq!(nonzero, 2);
        let u = op.exponential(std::f64::consts::FRAC_PI_2);
        assert!((u.get(0b0011, 0b1100).norm() - 1.0).abs() < 1e-15);
        assert!(u.is_unitary(1e-14));
    }

    #[test]
    fn pauli_string_exponential() {
        let op = PoolOperator::<f64>::pauli_string("XY", &[2, 0]).unwrap();
        assert_eq!(op.pauli_label().unwrap(), "X2Y0");
        assert!((op.generator() * op.generator()).max_abs_diff(&Matrix::identity(4)) < 1e-15);
        let u = op.exponential(std::f64::consts::PI);
        assert!(u.max_abs_diff(&Matrix::identity(4).scale(-cone::<f64>())) < 1e-15);
        assert!(op.exponential(0.0).max_abs_diff(&Matrix::identity(4)) == 0.0);
        assert!(PoolOperator::<f64>::pauli_string("XI", &[0, 1]).is_err());
        assert!(PoolOperator::<f64>::pauli_string("XX", &[1, 1]).is_err());
    }
}
