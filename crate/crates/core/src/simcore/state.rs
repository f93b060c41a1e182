use num_complex::Complex;

use super::bits::BitPattern;
use super::gate::Gate;
use crate::error::{Error, Result};
use crate::scalar::{cast_complex, cone, czero, Real};

/// Largest register the dense representation accepts.
pub const MAX_DENSE_QUBITS: usize = 30;

/// Dense `2^n` amplitude vector.
///
/// Safe to share read-only across threads; mutation goes through `&mut self`.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector<T> {
    n_qubits: usize,
    amps: Vec<Complex<T>>,
}

fn check_size(n: usize) -> Result<()> {
    if n > MAX_DENSE_QUBITS {
        Err(Error::input(format!(
            "{n} qubits exceeds the dense simulation limit of {MAX_DENSE_QUBITS}"
        )))
    } else {
        Ok(())
    }
}

impl<T: Real> StateVector<T> {
    /// `|0…0⟩` on `n` qubits.
    pub fn zero_state(n: usize) -> Result<Self> {
        check_size(n)?;
        let mut amps = vec![czero(); 1 << n];
        amps[0] = cone();
        Ok(Self { n_qubits: n, amps })
    }

    /// Computational basis state `|p⟩`.
    pub fn basis_state(n: usize, p: &BitPattern) -> Result<Self> {
        if p.len() != n {
            return Err(Error::input(format!(
                "pattern '{p}' has length {} but the register has {n} qubits",
                p.len()
            )));
        }
        check_size(n)?;
        let mut amps = vec![czero(); 1 << n];
        amps[p.index() as usize] = cone();
        Ok(Self { n_qubits: n, amps })
    }

    /// Builder from raw amplitudes. No normalization is enforced.
    pub fn from_amplitudes(n: usize, amps: Vec<Complex<T>>) -> Result<Self> {
        check_size(n)?;
        if amps.len() != 1 << n {
            return Err(Error::input(format!(
                "{} amplitudes given for {n} qubits (expected {})",
                amps.len(),
                1usize << n
            )));
        }
        Ok(Self { n_qubits: n, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex<T>> {
        self.amps
    }

    pub fn amplitude(&self, p: &BitPattern) -> Complex<T> {
        self.amps[p.index() as usize]
    }

    pub fn norm_sqr(&self) -> T {
        self.amps.iter().fold(T::zero(), |acc, a| acc + a.norm_sqr())
    }

    /// Rescales to unit norm; fails on the zero vector.
    pub fn normalize(&mut self) -> Result<()> {
        let norm = self.norm_sqr().sqrt();
        if norm == T::zero() {
            return Err(Error::input("cannot normalize the zero vector"));
        }
        for a in &mut self.amps {
            *a /= norm;
        }
        Ok(())
    }

    /// `⟨self|other⟩ = Σ conj(self_i)·other_i`.
    pub fn overlap(&self, other: &Self) -> Result<Complex<T>> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::input(format!(
                "overlap between {}- and {}-qubit states",
                self.n_qubits, other.n_qubits
            )));
        }
        Ok(inner(&self.amps, &other.amps))
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &Self) -> Result<T> {
        self.overlap(other).map(|s| s.norm_sqr())
    }

    /// Applies a gate in place after validating it against the register.
    pub fn apply_gate(&mut self, gate: &Gate<T>) -> Result<()> {
        gate.validate(self.n_qubits)?;
        gate.apply_unchecked(&mut self.amps, self.n_qubits);
        Ok(())
    }

    /// Largest entry-wise distance to `other`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(T::zero(), T::max)
    }

    pub fn cast<U: Real>(&self) -> StateVector<U> {
        StateVector {
            n_qubits: self.n_qubits,
            amps: self.amps.iter().map(|&a| cast_complex(a)).collect(),
        }
    }
}

/// `Σ conj(a_i)·b_i`.
#[inline]
pub(crate) fn inner<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Complex<T> {
    a.iter().zip(b).fold(czero(), |acc, (x, y)| acc + x.conj() * y)
}

/// Free-function form of [`StateVector::basis_state`].
pub fn basis_state<T: Real>(n: usize, p: &BitPattern) -> Result<StateVector<T>> {
    StateVector::basis_state(n, p)
}

/// Returns `gate` applied to a copy of `state`.
pub fn apply_gate<T: Real>(state: &StateVector<T>, gate: &Gate<T>) -> Result<StateVector<T>> {
    let mut out = state.clone();
    out.apply_gate(gate)?;
    Ok(out)
}

pub fn overlap<T: Real>(a: &StateVector<T>, b: &StateVector<T>) -> Result<Complex<T>> {
    a.overlap(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simcore::gate::pauli_x;

    fn pat(s: &str) -> BitPattern {
        s.parse().unwrap()
    }

    #[test]
    fn basis_state_examples() {
        let s = StateVector::<f64>::basis_state(2, &pat("00")).unwrap();
        assert_eq!(s.amplitudes()[0], cone());
        let s = StateVector::<f64>::basis_state(2, &pat("10")).unwrap();
        assert_eq!(s.amplitudes()[2], cone());
        let s = StateVector::<f64>::basis_state(4, &pat("1100")).unwrap();
        assert_eq!(s.amplitudes()[12], cone());
        assert!(StateVector::<f64>::basis_state(3, &pat("10")).is_err());
    }

    #[test]
    fn gate_examples() {
        let mut s = StateVector::<f64>::basis_state(2, &pat("00")).unwrap();
        s.apply_gate(&Gate::X(0)).unwrap();
        assert_eq!(s, StateVector::basis_state(2, &pat("10")).unwrap());

        let mut s = StateVector::<f64>::zero_state(1).unwrap();
        s.apply_gate(&Gate::H(0)).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((s.amplitudes()[0].re - h).abs() < 1e-15 && (s.amplitudes()[1].re - h).abs() < 1e-15);

        let toffoli = Gate::Mcu { controls: vec![0, 1], target: 2, matrix: pauli_x() };
        let mut s = StateVector::<f64>::basis_state(3, &pat("110")).unwrap();
        s.apply_gate(&toffoli).unwrap();
        assert_eq!(s, StateVector::basis_state(3, &pat("111")).unwrap());
        let mut s = StateVector::<f64>::basis_state(3, &pat("100")).unwrap();
        s.apply_gate(&toffoli).unwrap();
        assert_eq!(s, StateVector::basis_state(3, &pat("100")).unwrap());
    }

    #[test]
    fn overlap_examples() {
        let a = StateVector::<f64>::basis_state(2, &pat("00")).unwrap();
        let b = StateVector::<f64>::basis_state(2, &pat("11")).unwrap();
        assert_eq!(a.overlap(&a).unwrap(), cone());
        assert_eq!(a.overlap(&b).unwrap(), czero());

        let zero = StateVector::<f64>::zero_state(1).unwrap();
        let mut plus = zero.clone();
        plus.apply_gate(&Gate::H(0)).unwrap();
        let s = zero.overlap(&plus).unwrap();
        assert!((s.re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert!(a.overlap(&zero).is_err());
    }

    #[test]
    fn refuses_oversized_registers() {
        assert!(StateVector::<f64>::zero_state(MAX_DENSE_QUBITS + 1).is_err());
    }

    #[test]
    fn works_in_single_precision() {
        let mut s = StateVector::<f32>::zero_state(2).unwrap();
        s.apply_gate(&Gate::H(0)).unwrap();
        s.apply_gate(&Gate::Cnot { control: 0, target: 1 }).unwrap();
        assert!((s.norm_sqr() - 1.0).abs() < 1e-6);
        assert!((s.amplitudes()[3].re - std::f32::consts::FRAC_1_SQRT_2).abs() < 1e-6);
    }
}
