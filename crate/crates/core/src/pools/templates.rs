//! CNOT-efficient circuits for pool exponentials.
//!
//! The excitation circuits take the rotation angle of the drawn circuit,
//! which is twice the pool parameter: the drawn circuit with angle `φ`
//! implements `exp(i(φ/2)G)`.

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::simcore::{Circuit, Gate, GateCounts};

pub const QEB_SINGLE_COUNTS: GateCounts = GateCounts::new(3, 7, 0);
pub const QEB_DOUBLE_COUNTS: GateCounts = GateCounts::new(13, 21, 0);

/// Ratio between the drawn rotation angle and the pool parameter θ.
pub const TEMPLATE_ANGLE_SCALE: f64 = 2.0;

/// `exp(iθ G_pq)` with 3 CNOTs.
pub fn qeb_single_template<T: Real>(n: usize, p: usize, q: usize, theta: T) -> Result<Circuit<T>> {
    if p == q {
        return Err(Error::input("single excitation needs two distinct qubits"));
    }
    let half_pi = T::FRAC_PI_2();
    let phi = theta * T::lit(TEMPLATE_ANGLE_SCALE);
    let half = phi / T::lit(2.0);
    let (r, s) = (p, q);
    let cx = Gate::Cnot { control: r, target: s };
    Circuit::from_gates(
        n,
        vec![
            Gate::Rz(r, half_pi),
            Gate::Ry(s, -half_pi),
            Gate::Rz(s, -half_pi),
            cx.clone(),
            Gate::Ry(r, half),
            Gate::Rz(s, -half_pi),
            cx.clone(),
            Gate::Ry(r, -half),
            Gate::H(s),
            cx,
        ],
    )
}

/// `exp(iθ G_pqrs)` with 13 CNOTs.
pub fn qeb_double_template<T: Real>(n: usize, p: usize, q: usize, r: usize, s: usize, theta: T) -> Result<Circuit<T>> {
    let support = [p, q, r, s];
    if support.iter().enumerate().any(|(i, x)| support[..i].contains(x)) {
        return Err(Error::input("double excitation needs four distinct qubits"));
    }
    let half_pi = T::FRAC_PI_2();
    let eighth = theta * T::lit(TEMPLATE_ANGLE_SCALE) / T::lit(8.0);
    // Wire names of the drawn circuit.
    let (wr, ws, wq, wp) = (p, q, r, s);
    let cx = |a: usize, b: usize| Gate::Cnot { control: a, target: b };
    Circuit::from_gates(
        n,
        vec![
            cx(wr, ws),
            cx(wq, wp),
            Gate::X(ws),
            Gate::X(wp),
            cx(wr, wq),
            Gate::Ry(wr, eighth),
            Gate::H(ws),
            cx(wr, ws),
            Gate::Ry(wr, -eighth),
            Gate::H(wp),
            cx(wr, wp),
            Gate::Ry(wr, eighth),
            cx(wr, ws),
            Gate::Ry(wr, -eighth),
            Gate::H(wq),
            cx(wr, wq),
            Gate::Ry(wr, eighth),
            cx(wr, ws),
            Gate::Ry(wr, -eighth),
            cx(wr, wp),
            Gate::Ry(wr, eighth),
            Gate::H(wp),
            cx(wr, ws),
            Gate::Ry(wr, -eighth),
            Gate::H(ws),
            Gate::Rz(wq, -half_pi),
            cx(wr, wq),
            Gate::Rz(wr, half_pi),
            Gate::Rz(wq, -half_pi),
            Gate::X(ws),
            Gate::Ry(wq, half_pi),
            Gate::X(wp),
            cx(wr, ws),
            cx(wq, wp),
        ],
    )
}

/// `exp(iθP)` for a Pauli word by basis change, CNOT ladder and one `RZ`.
pub fn pauli_string_template<T: Real>(n: usize, word: &str, support: &[usize], theta: T) -> Result<Circuit<T>> {
    if word.len() != support.len() || word.is_empty() {
        return Err(Error::input(format!("word '{word}' does not match support {support:?}")));
    }
    if word.chars().all(|ch| ch == 'I') {
        return Err(Error::input("identity word has no circuit"));
    }
    if word.chars().any(|ch| !"XYZ".contains(ch)) {
        return Err(Error::input(format!("word '{word}' must use only X, Y and Z")));
    }
    let half_pi = T::FRAC_PI_2();
    let letters: Vec<(char, usize)> = word.chars().zip(support.iter().copied()).collect();
    let mut gates = Vec::new();
    for &(ch, q) in &letters {
        match ch {
            'X' => gates.push(Gate::H(q)),
            'Y' => gates.push(Gate::Rx(q, half_pi)),
            _ => {}
        }
    }
    for w in support.windows(2) {
        gates.push(Gate::Cnot { control: w[0], target: w[1] });
    }
    gates.push(Gate::Rz(*support.last().expect("non-empty"), -T::lit(2.0) * theta));
    for w in support.windows(2).rev() {
        gates.push(Gate::Cnot { control: w[0], target: w[1] });
    }
    for &(ch, q) in &letters {
        match ch {
            'X' => gates.push(Gate::H(q)),
            'Y' => gates.push(Gate::Rx(q, -half_pi)),
            _ => {}
        }
    }
    Circuit::from_gates(n, gates)
}

pub fn pauli_string_counts(word: &str) -> GateCounts {
    let w = word.len() as u64;
    let xy = word.chars().filter(|ch| matches!(ch, 'X' | 'Y')).count() as u64;
    GateCounts::new(2 * (w - 1), 2 * xy + 1, 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;
    use crate::pools::PoolOperator;

    #[test]
    fn single_template_matches_exponential() {
        let op = PoolOperator::<f64>::qeb_single(0, 1).unwrap();
        for theta in [0.0, 0.4, -1.3, 2.9] {
            let circ = qeb_single_template(2, 0, 1, theta).unwrap();
            assert_eq!(circ.counts(), QEB_SINGLE_COUNTS);
            let d = circ.unitary().unwrap().phase_distance(&op.exponential(theta));
            assert!(d < 1e-12, "θ={theta}: {d}");
        }
    }

    #[test]
    fn double_template_matches_exponential() {
        let op = PoolOperator::<f64>::qeb_double(0, 1, 2, 3).unwrap();
        for theta in [0.0, std::f64::consts::FRAC_PI_3, -1.0, 2.7] {
            let circ = qeb_double_template(4, 0, 1, 2, 3, theta).unwrap();
            assert_eq!(circ.counts(), QEB_DOUBLE_COUNTS);
            let d = circ.unitary().unwrap().phase_distance(&op.exponential(theta));
            assert!(d < 1e-12, "θ={theta}: {d}");
        }
    }

    #[test]
    fn pauli_template_matches_exponential() {
        for (word, support) in [("XY", vec![0, 1]), ("YZXY", vec![3, 1, 0, 2]), ("Z", vec![1])] {
            let op = PoolOperator::<f64>::pauli_string(word, &support).unwrap();
            let circ = pauli_string_template(4, word, &support, 0.7).unwrap();
            assert_eq!(circ.counts(), pauli_string_counts(word));
            let embedded = Circuit::from_gates(4, vec![op.gate(0.7)]).unwrap().unitary().unwrap();
            assert!(circ.unitary().unwrap().phase_distance(&embedded) < 1e-12);
        }
        assert_eq!(pauli_string_counts("XYXY").cnot, 6);
        assert!(pauli_string_template::<f64>(2, "II", &[0, 1], 0.1).is_err());
        let id = pauli_string_template(2, "XX", &[0, 1], 0.0).unwrap().unitary().unwrap();
        assert!(id.phase_distance(&Matrix::identity(4)) < 1e-14);
    }
}
