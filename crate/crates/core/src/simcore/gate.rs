use std::fmt;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::kernel::{self, LocalLayout};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{c, cone, czero, Real};

/// Unitarity tolerance for explicit gate matrices.
pub const UNITARY_TOL: f64 = 1e-12;

pub type Matrix2<T> = [[Complex<T>; 2]; 2];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum GateKind {
    X,
    H,
    Rx,
    Ry,
    Rz,
    Cnot,
    Mcu,
    #[serde(rename = "LOCAL_UNITARY")]
    LocalUnitary,
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GateKind::X => "X",
            GateKind::H => "H",
            GateKind::Rx => "RX",
            GateKind::Ry => "RY",
            GateKind::Rz => "RZ",
            GateKind::Cnot => "CNOT",
            GateKind::Mcu => "MCU",
            GateKind::LocalUnitary => "LOCAL_UNITARY",
        };
        f.write_str(s)
    }
}

/// A gate of the circuit IR. Rotations follow `R_P(θ) = exp(-iθP/2)`.
#[derive(Clone, Debug, PartialEq)]
pub enum Gate<T> {
    X(usize),
    H(usize),
    Rx(usize, T),
    Ry(usize, T),
    Rz(usize, T),
    Cnot { control: usize, target: usize },
    /// `matrix` applied to `target` when every control is 1. An empty control
    /// list makes this a plain single-qubit gate.
    Mcu {
        controls: Vec<usize>,
        target: usize,
        matrix: Matrix2<T>,
    },
    /// Dense unitary on `qubits`; `qubits[0]` is the most significant local bit.
    LocalUnitary { qubits: Vec<usize>, matrix: Matrix<T> },
}

pub fn rx<T: Real>(theta: T) -> Matrix2<T> {
    let (s, co) = (theta / T::lit(2.0)).sin_cos();
    [[c(co, T::zero()), c(T::zero(), -s)], [c(T::zero(), -s), c(co, T::zero())]]
}

pub fn ry<T: Real>(theta: T) -> Matrix2<T> {
    let (s, co) = (theta / T::lit(2.0)).sin_cos();
    [[c(co, T::zero()), c(-s, T::zero())], [c(s, T::zero()), c(co, T::zero())]]
}

pub fn rz<T: Real>(theta: T) -> Matrix2<T> {
    let half = theta / T::lit(2.0);
    [
        [Complex::from_polar(T::one(), -half), czero()],
        [czero(), Complex::from_polar(T::one(), half)],
    ]
}

pub fn pauli_x<T: Real>() -> Matrix2<T> {
    [[czero(), cone()], [cone(), czero()]]
}

pub fn hadamard<T: Real>() -> Matrix2<T> {
    let h = T::FRAC_1_SQRT_2();
    [[c(h, T::zero()), c(h, T::zero())], [c(h, T::zero()), c(-h, T::zero())]]
}

fn matrix2_is_unitary<T: Real>(m: &Matrix2<T>, tol: T) -> bool {
    Matrix::from_rows(*m).is_unitary(tol)
}

impl<T: Real> Gate<T> {
    pub fn kind(&self) -> GateKind {
        match self {
            Gate::X(_) => GateKind::X,
            Gate::H(_) => GateKind::H,
            Gate::Rx(..) => GateKind::Rx,
            Gate::Ry(..) => GateKind::Ry,
            Gate::Rz(..) => GateKind::Rz,
            Gate::Cnot { .. } => GateKind::Cnot,
            Gate::Mcu { .. } => GateKind::Mcu,
            Gate::LocalUnitary { .. } => GateKind::LocalUnitary,
        }
    }

    /// Qubits the gate touches; for controlled gates controls come first.
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::X(q) | Gate::H(q) | Gate::Rx(q, _) | Gate::Ry(q, _) | Gate::Rz(q, _) => vec![*q],
            Gate::Cnot { control, target } => vec![*control, *target],
            Gate::Mcu { controls, target, .. } => {
                let mut v = controls.clone();
                v.push(*target);
                v
            }
            Gate::LocalUnitary { qubits, .. } => qubits.clone(),
        }
    }

    pub fn theta(&self) -> Option<T> {
        match self {
            Gate::Rx(_, t) | Gate::Ry(_, t) | Gate::Rz(_, t) => Some(*t),
            _ => None,
        }
    }

    /// Checks qubit indices against a register of `n_qubits` and explicit
    /// matrices for unitarity.
    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        let qubits = self.qubits();
        for (i, &q) in qubits.iter().enumerate() {
            if q >= n_qubits {
                return Err(Error::input(format!(
                    "{} gate uses qubit {q} but the register has {n_qubits} qubits",
                    self.kind()
                )));
            }
            if qubits[..i].contains(&q) {
                return Err(Error::input(format!("{} gate repeats qubit {q}", self.kind())));
            }
        }
        let tol = T::lit(UNITARY_TOL);
        match self {
            Gate::Mcu { matrix, .. } if !matrix2_is_unitary(matrix, tol) => {
                Err(Error::input("MCU matrix is not unitary"))
            }
            Gate::LocalUnitary { qubits, matrix } => {
                if matrix.dim() != 1 << qubits.len() {
                    return Err(Error::input(format!(
                        "local unitary on {} qubits has dimension {}",
                        qubits.len(),
                        matrix.dim()
                    )));
                }
                if !matrix.is_unitary(tol) {
                    return Err(Error::input("local unitary matrix is not unitary"));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// 2×2 action for single-qubit kinds.
    pub fn single_qubit_matrix(&self) -> Option<Matrix2<T>> {
        Some(match self {
            Gate::X(_) => pauli_x(),
            Gate::H(_) => hadamard(),
            Gate::Rx(_, t) => rx(*t),
            Gate::Ry(_, t) => ry(*t),
            Gate::Rz(_, t) => rz(*t),
            Gate::Mcu { controls, matrix, .. } if controls.is_empty() => *matrix,
            _ => return None,
        })
    }

    /// Dense matrix of the gate on `self.qubits()` (in that order).
    pub fn local_matrix(&self) -> Matrix<T> {
        if let Some(m) = self.single_qubit_matrix() {
            return Matrix::from_rows(m);
        }
        match self {
            Gate::Cnot { .. } => {
                let mut m = Matrix::identity(4);
                let x = pauli_x::<T>();
                for (r, row) in x.iter().enumerate() {
                    for (col, &v) in row.iter().enumerate() {
                        m.set(2 + r, 2 + col, v);
                    }
                }
                m
            }
            Gate::Mcu { controls, matrix, .. } => {
                let dim = 1 << (controls.len() + 1);
                let mut m = Matrix::identity(dim);
                for (r, row) in matrix.iter().enumerate() {
                    for (col, &v) in row.iter().enumerate() {
                        m.set(dim - 2 + r, dim - 2 + col, v);
                    }
                }
                m
            }
            Gate::LocalUnitary { matrix, .. } => matrix.clone(),
            _ => unreachable!("single-qubit kinds handled above"),
        }
    }

    /// Applies the gate in place. Callers validate beforehand.
    pub(crate) fn apply_unchecked(&self, amps: &mut [Complex<T>], n: usize) {
        match self {
            Gate::X(q) => {
                let mask = kernel::qubit_mask(n, *q);
                for i in 0..amps.len() {
                    if i & mask == 0 {
                        amps.swap(i, i | mask);
                    }
                }
            }
            Gate::Cnot { control, target } => kernel::apply_cnot(amps, n, *control, *target),
            Gate::Mcu { controls, target, matrix } => {
                if controls.is_empty() {
                    kernel::apply_single(amps, n, *target, matrix);
                } else {
                    kernel::apply_controlled(amps, n, controls, *target, matrix);
                }
            }
            Gate::LocalUnitary { qubits, matrix } => {
                let layout = LocalLayout::new(n, qubits);
                kernel::apply_local(amps, &layout, &matrix.sparse_rows());
            }
            g => {
                let (q, m) = (g.qubits()[0], g.single_qubit_matrix().expect("single-qubit gate"));
                kernel::apply_single(amps, n, q, &m);
            }
        }
    }
}
