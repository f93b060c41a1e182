//! Small dense complex square matrices used for gate and generator algebra.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex;

use crate::scalar::{c, cone, czero, Real};

/// Dense square complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    dim: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> Matrix<T> {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![czero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = cone();
        }
        m
    }

    /// Builds a matrix from row-major data; `data.len()` must be a perfect square.
    pub fn from_row_major(data: Vec<Complex<T>>) -> Option<Self> {
        let dim = (data.len() as f64).sqrt().round() as usize;
        (dim * dim == data.len()).then_some(Self { dim, data })
    }

    pub fn from_rows(rows: [[Complex<T>; 2]; 2]) -> Self {
        Self {
            dim: 2,
            data: vec![rows[0][0], rows[0][1], rows[1][0], rows[1][1]],
        }
    }

    /// Single-qubit Pauli matrix for `'I'`, `'X'`, `'Y'` or `'Z'`.
    pub fn pauli(letter: char) -> Option<Self> {
        let (o, z) = (T::one(), T::zero());
        let m = match letter {
            'I' => [[c(o, z), c(z, z)], [c(z, z), c(o, z)]],
            'X' => [[c(z, z), c(o, z)], [c(o, z), c(z, z)]],
            'Y' => [[c(z, z), c(z, -o)], [c(z, o), c(z, z)]],
            'Z' => [[c(o, z), c(z, z)], [c(z, z), c(-o, z)]],
            _ => return None,
        };
        Some(Self::from_rows(m))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn data(&self) -> &[Complex<T>] {
        &self.data
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex<T> {
        self.data[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: Complex<T>) {
        self.data[row * self.dim + col] = value;
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        for r in 0..self.dim {
            for col in 0..self.dim {
                out.set(col, r, self.get(r, col).conj());
            }
        }
        out
    }

    /// Kronecker product `self ⊗ other` (`self` acts on the more significant bits).
    pub fn kron(&self, other: &Self) -> Self {
        let dim = self.dim * other.dim;
        let mut out = Self::zeros(dim);
        for ar in 0..self.dim {
            for ac in 0..self.dim {
                let a = self.get(ar, ac);
                if a == czero() {
                    continue;
                }
                for br in 0..other.dim {
                    for bc in 0..other.dim {
                        out.set(ar * other.dim + br, ac * other.dim + bc, a * other.get(br, bc));
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        (0..self.dim)
            .map(|r| {
                self.data[r * self.dim..(r + 1) * self.dim]
                    .iter()
                    .zip(v)
                    .fold(czero(), |acc, (&a, &b)| acc + a * b)
            })
            .collect()
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(T::zero(), T::max)
    }

    /// Largest entry-wise distance between `self` and `e^{iφ}·other`, minimized
    /// over the global phase φ.
    pub fn phase_distance(&self, other: &Self) -> T {
        let inner = self
            .data
            .iter()
            .zip(&other.data)
            .fold(czero::<T>(), |acc, (a, b)| acc + b.conj() * a);
        let phase = if inner.norm() > T::zero() {
            inner / inner.norm()
        } else {
            cone()
        };
        self.max_abs_diff(&other.scale(phase))
    }

    pub fn is_unitary(&self, tol: T) -> bool {
        (&self.adjoint() * self).max_abs_diff(&Self::identity(self.dim)) <= tol
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.max_abs_diff(&self.adjoint()) <= tol
    }

    /// Per-row nonzero entries, used by the sparse application kernels.
    pub fn sparse_rows(&self) -> Vec<Vec<(usize, Complex<T>)>> {
        (0..self.dim)
            .map(|r| {
                (0..self.dim)
                    .filter_map(|col| {
                        let v = self.get(r, col);
                        (v != czero()).then_some((col, v))
                    })
                    .collect()
            })
            .collect()
    }
}

impl<T: Real> Mul for &Matrix<T> {
    type Output = Matrix<T>;

    fn mul(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let d = self.dim;
        let mut out = Matrix::zeros(d);
        for r in 0..d {
            for k in 0..d {
                let a = self.get(r, k);
                if a == czero() {
                    continue;
                }
                for col in 0..d {
                    out.data[r * d + col] += a * rhs.get(k, col);
                }
            }
        }
        out
    }
}

impl<T: Real> Add for &Matrix<T> {
    type Output = Matrix<T>;

    fn add(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        Matrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<T: Real> Sub for &Matrix<T> {
    type Output = Matrix<T>;

    fn sub(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        Matrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

/// Tensor product of Pauli letters, first letter most significant.
pub fn pauli_word_matrix<T: Real>(word: &str) -> Option<Matrix<T>> {
    let mut m = Matrix::identity(1);
    for ch in word.chars() {
        m = m.kron(&Matrix::pauli(ch)?);
    }
    Some(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_algebra() {
        let x = Matrix::<f64>::pauli('X').unwrap();
        let y = Matrix::<f64>::pauli('Y').unwrap();
        let z = Matrix::<f64>::pauli('Z').unwrap();
        // XY = iZ
        let xy = &x * &y;
        assert!(xy.max_abs_diff(&z.scale(c(0.0, 1.0))) < 1e-15);
        assert!(y.is_hermitian(0.0) && y.is_unitary(1e-15));
    }

    #[test]
    fn kron_ordering_is_big_endian() {
        // X ⊗ I maps |00> (index 0) to |10> (index 2).
        let m = pauli_word_matrix::<f64>("XI").unwrap();
        assert_eq!(m.get(2, 0), cone());
        assert_eq!(m.get(1, 0), czero());
    }

    #[test]
    fn phase_distance_ignores_global_phase() {
        let h = Matrix::<f64>::pauli('X').unwrap();
        let rotated = h.scale(Complex::from_polar(1.0, 0.7));
        assert!(rotated.phase_distance(&h) < 1e-15);
        assert!(rotated.max_abs_diff(&h) > 0.1);
    }
}
