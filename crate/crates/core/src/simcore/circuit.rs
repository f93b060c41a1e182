use std::iter::Sum;
use std::ops::{Add, AddAssign};

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::gate::{pauli_x, Gate, GateKind, UNITARY_TOL};
use super::state::StateVector;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{c, Real};

/// Gate tallies. Additive under concatenation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GateCounts {
    pub cnot: u64,
    pub single_qubit: u64,
    /// Multi-qubit gates left undecomposed (multi-controlled and opaque local unitaries).
    pub mcu_unexpanded: u64,
}

impl GateCounts {
    pub const fn new(cnot: u64, single_qubit: u64, mcu_unexpanded: u64) -> Self {
        Self { cnot, single_qubit, mcu_unexpanded }
    }
}

impl Add for GateCounts {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        Self {
            cnot: self.cnot + rhs.cnot,
            single_qubit: self.single_qubit + rhs.single_qubit,
            mcu_unexpanded: self.mcu_unexpanded + rhs.mcu_unexpanded,
        }
    }
}

impl AddAssign for GateCounts {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl Sum for GateCounts {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::default(), Add::add)
    }
}

/// Ordered gate sequence on a fixed register.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit<T> {
    n_qubits: usize,
    gates: Vec<Gate<T>>,
}

impl<T: Real> Circuit<T> {
    pub fn new(n_qubits: usize) -> Self {
        Self { n_qubits, gates: Vec::new() }
    }

    pub fn from_gates(n_qubits: usize, gates: Vec<Gate<T>>) -> Result<Self> {
        let mut circuit = Self::new(n_qubits);
        for g in gates {
            circuit.push(g)?;
        }
        Ok(circuit)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate<T>] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Appends a gate after validating it against the register.
    pub fn push(&mut self, gate: Gate<T>) -> Result<&mut Self> {
        gate.validate(self.n_qubits)?;
        self.gates.push(gate);
        Ok(self)
    }

    /// Concatenates `other` after `self`.
    pub fn append(&mut self, other: &Circuit<T>) -> Result<&mut Self> {
        if other.n_qubits != self.n_qubits {
            return Err(Error::input(format!(
                "cannot append a {}-qubit circuit to a {}-qubit circuit",
                other.n_qubits, self.n_qubits
            )));
        }
        self.gates.extend(other.gates.iter().cloned());
        Ok(self)
    }

    /// Applies every gate in order to a copy of `init`.
    pub fn simulate(&self, init: &StateVector<T>) -> Result<StateVector<T>> {
        let mut state = init.clone();
        self.simulate_in_place(&mut state)?;
        Ok(state)
    }

    pub fn simulate_in_place(&self, state: &mut StateVector<T>) -> Result<()> {
        if state.n_qubits() != self.n_qubits {
            return Err(Error::input(format!(
                "{}-qubit circuit applied to a {}-qubit state",
                self.n_qubits,
                state.n_qubits()
            )));
        }
        for g in &self.gates {
            g.apply_unchecked(state.amplitudes_mut(), self.n_qubits);
        }
        Ok(())
    }

    /// Counts gates: CNOTs (including single-control MCUs whose matrix is X),
    /// single-qubit gates (including control-free MCUs and one-qubit local
    /// unitaries), and everything else as undecomposed multi-qubit gates.
    pub fn counts(&self) -> GateCounts {
        let x = Matrix::from_rows(pauli_x::<T>());
        let tol = T::lit(UNITARY_TOL);
        self.gates
            .iter()
            .map(|g| match g {
                Gate::Cnot { .. } => GateCounts::new(1, 0, 0),
                Gate::Mcu { controls, matrix, .. } => match controls.len() {
                    0 => GateCounts::new(0, 1, 0),
                    1 if Matrix::from_rows(*matrix).max_abs_diff(&x) <= tol => GateCounts::new(1, 0, 0),
                    _ => GateCounts::new(0, 0, 1),
                },
                Gate::LocalUnitary { qubits, .. } if qubits.len() == 1 => GateCounts::new(0, 1, 0),
                Gate::LocalUnitary { .. } => GateCounts::new(0, 0, 1),
                _ => GateCounts::new(0, 1, 0),
            })
            .sum()
    }

    /// Dense unitary of the whole circuit, built column by column.
    pub fn unitary(&self) -> Result<Matrix<T>> {
        if self.n_qubits > 12 {
            return Err(Error::input("dense unitaries are limited to 12 qubits"));
        }
        let dim = 1usize << self.n_qubits;
        let mut u = Matrix::zeros(dim);
        for col in 0..dim {
            let mut amps = vec![c(T::zero(), T::zero()); dim];
            amps[col] = c(T::one(), T::zero());
            let mut s = StateVector::from_amplitudes(self.n_qubits, amps)?;
            self.simulate_in_place(&mut s)?;
            for (row, a) in s.amplitudes().iter().enumerate() {
                u.set(row, col, *a);
            }
        }
        Ok(u)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&CircuitRecord::from_circuit(self)).expect("circuit serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str::<CircuitRecord>(text)?.into_circuit()
    }
}

/// Free-function form of [`Circuit::simulate`].
pub fn simulate<T: Real>(circuit: &Circuit<T>, init: &StateVector<T>) -> Result<StateVector<T>> {
    circuit.simulate(init)
}

pub fn count_gates<T: Real>(circuit: &Circuit<T>) -> GateCounts {
    circuit.counts()
}

#[derive(Serialize, Deserialize)]
struct CircuitRecord {
    n_qubits: usize,
    gates: Vec<GateRecord>,
}

#[derive(Serialize, Deserialize)]
struct GateRecord {
    kind: GateKind,
    qubits: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    theta: Option<f64>,
    /// Row-major `[re, im]` entries.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    matrix: Option<Vec<[f64; 2]>>,
}

fn flatten<T: Real>(data: &[Complex<T>]) -> Vec<[f64; 2]> {
    data.iter().map(|z| [z.re.to_f64_lossy(), z.im.to_f64_lossy()]).collect()
}

impl CircuitRecord {
    fn from_circuit<T: Real>(circuit: &Circuit<T>) -> Self {
        let gates = circuit
            .gates
            .iter()
            .map(|g| {
                let matrix = match g {
                    Gate::Mcu { matrix, .. } => {
                        Some(flatten(&[matrix[0][0], matrix[0][1], matrix[1][0], matrix[1][1]]))
                    }
                    Gate::LocalUnitary { matrix, .. } => Some(flatten(matrix.data())),
                    _ => None,
                };
                GateRecord {
                    kind: g.kind(),
                    qubits: g.qubits(),
                    theta: g.theta().map(Real::to_f64_lossy),
                    matrix,
                }
            })
            .collect();
        Self { n_qubits: circuit.n_qubits, gates }
    }

    fn into_circuit<T: Real>(self) -> Result<Circuit<T>> {
        let mut circuit = Circuit::new(self.n_qubits);
        for (i, rec) in self.gates.into_iter().enumerate() {
            let bad = |what: &str| Error::input(format!("gate {i} ({}): {what}", rec.kind));
            let arity = |n: usize| {
                if rec.qubits.len() == n {
                    Ok(())
                } else {
                    Err(bad(&format!("expected {n} qubits, found {}", rec.qubits.len())))
                }
            };
            let theta = || rec.theta.map(T::lit).ok_or_else(|| bad("missing theta"));
            let matrix = || -> Result<Matrix<T>> {
                let data = rec.matrix.as_ref().ok_or_else(|| bad("missing matrix"))?;
                Matrix::from_row_major(data.iter().map(|&[re, im]| c(T::lit(re), T::lit(im))).collect())
                    .ok_or_else(|| bad("matrix is not square"))
            };
            let gate = match rec.kind {
                GateKind::X => {
                    arity(1)?;
                    Gate::X(rec.qubits[0])
                }
                GateKind::H => {
                    arity(1)?;
                    Gate::H(rec.qubits[0])
                }
                GateKind::Rx => {
                    arity(1)?;
                    Gate::Rx(rec.qubits[0], theta()?)
                }
                GateKind::Ry => {
                    arity(1)?;
                    Gate::Ry(rec.qubits[0], theta()?)
                }
                GateKind::Rz => {
                    arity(1)?;
                    Gate::Rz(rec.qubits[0], theta()?)
                }
                GateKind::Cnot => {
                    arity(2)?;
                    Gate::Cnot { control: rec.qubits[0], target: rec.qubits[1] }
                }
                GateKind::Mcu => {
                    let m = matrix()?;
                    if m.dim() != 2 || rec.qubits.is_empty() {
                        return Err(bad("MCU needs a 2x2 matrix and a target"));
                    }
                    let (target, controls) = rec.qubits.split_last().expect("non-empty");
                    Gate::Mcu {
                        controls: controls.to_vec(),
                        target: *target,
                        matrix: [[m.get(0, 0), m.get(0, 1)], [m.get(1, 0), m.get(1, 1)]],
                    }
                }
                GateKind::LocalUnitary => Gate::LocalUnitary { qubits: rec.qubits.clone(), matrix: matrix()? },
            };
            circuit.push(gate)?;
        }
        Ok(circuit)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simcore::bits::BitPattern;

    #[test]
    fn empty_circuit_is_identity() {
        let c0 = Circuit::<f64>::new(2);
        let s: StateVector<f64> = StateVector::basis_state(2, &"01".parse::<BitPattern>().unwrap()).unwrap();
        assert_eq!(c0.simulate(&s).unwrap(), s);
        assert_eq!(c0.counts(), GateCounts::default());
    }

    #[test]
    fn double_x_is_identity() {
        let mut circ = Circuit::<f64>::new(1);
        circ.push(Gate::X(0)).unwrap().push(Gate::X(0)).unwrap();
        let s = StateVector::zero_state(1).unwrap();
        assert_eq!(circ.simulate(&s).unwrap(), s);
    }

    #[test]
    fn simulate_rejects_width_mismatch() {
        let circ = Circuit::<f64>::new(2);
        assert!(circ.simulate(&StateVector::zero_state(3).unwrap()).is_err());
    }

    #[test]
    fn counting_rules() {
        let mut circ = Circuit::<f64>::new(3);
        circ.push(Gate::H(0)).unwrap();
        circ.push(Gate::Cnot { control: 0, target: 1 }).unwrap();
        circ.push(Gate::Mcu { controls: vec![2], target: 0, matrix: pauli_x() }).unwrap();
        circ.push(Gate::Mcu { controls: vec![1, 2], target: 0, matrix: pauli_x() }).unwrap();
        circ.push(Gate::Mcu { controls: vec![], target: 0, matrix: pauli_x() }).unwrap();
        assert_eq!(circ.counts(), GateCounts::new(2, 2, 1));
    }

    #[test]
    fn json_round_trip_is_stable() {
        let mut circ = Circuit::<f64>::new(3);
        circ.push(Gate::Ry(1, 0.25)).unwrap();
        circ.push(Gate::Cnot { control: 1, target: 2 }).unwrap();
        circ.push(Gate::Mcu { controls: vec![0, 1], target: 2, matrix: pauli_x() }).unwrap();
        let text = circ.to_json();
        let back = Circuit::<f64>::from_json(&text).unwrap();
        assert_eq!(back, circ);
        assert_eq!(back.to_json(), text);
        assert!(text.find("\"kind\"").unwrap() < text.find("\"qubits\"").unwrap());
    }

    #[test]
    fn json_rejects_malformed_gates() {
        let text = r#"{"n_qubits":2,"gates":[{"kind":"RY","qubits":[0]}]}"#;
        assert!(Circuit::<f64>::from_json(text).is_err());
        let text = r#"{"n_qubits":2,"gates":[{"kind":"CNOT","qubits":[0,0]}]}"#;
        assert!(Circuit::<f64>::from_json(text).is_err());
    }
}
