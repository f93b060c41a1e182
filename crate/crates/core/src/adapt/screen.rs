use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::pools::Pool;
use crate::scalar::Real;
use crate::simcore::{inner, StateVector};

/// Overlap below which the first-order score vanishes and the fallback
/// `|⟨T|G|ψ⟩|` is used instead.
pub const ZERO_OVERLAP_TOL: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Candidate<T> {
    /// Position in the pool.
    pub index: usize,
    pub score: T,
}

/// Scores every pool operator against the current state and sorts them by
/// score, best first. Ties keep pool order.
pub fn screen<T: Real>(pool: &Pool<T>, current: &StateVector<T>, target: &StateVector<T>) -> Result<Vec<Candidate<T>>> {
    if pool.is_empty() {
        return Err(Error::input("cannot screen an empty pool"));
    }
    let n = pool.n_qubits();
    if current.n_qubits() != n || target.n_qubits() != n {
        return Err(Error::input(format!(
            "pool acts on {n} qubits, states have {} and {}",
            current.n_qubits(),
            target.n_qubits()
        )));
    }
    let s = inner(current.amplitudes(), target.amplitudes());
    let fallback = s.norm() < T::lit(ZERO_OVERLAP_TOL);
    let two = T::lit(2.0);
    let mut out: Vec<Candidate<T>> = pool
        .operators()
        .par_iter()
        .enumerate()
        .map(|(index, op)| {
            let tg = op.generator_element(target.amplitudes(), current.amplitudes(), n);
            let score = if fallback { tg.norm() } else { two * (tg * s).im.abs() };
            Candidate { index, score }
        })
        .collect();
    out.sort_by(|a, b| b.score.partial_cmp(&a.score).unwrap_or(std::cmp::Ordering::Equal).then(a.index.cmp(&b.index)));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adapt::{gradient, Ansatz};
    use crate::pools::{build_qeb_pool, build_qubit_pool};
    use crate::scalar::c;
    use crate::simcore::BitPattern;

    fn pat(s: &str) -> BitPattern {
        s.parse().unwrap()
    }

    #[test]
    fn picks_the_double_excitation() {
        let pool = build_qeb_pool::<f64>(4, false).unwrap();
        let hf = StateVector::basis_state(4, &pat("1100")).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut amps = vec![c(0.0, 0.0); 16];
        amps[0b1100] = c(h, 0.0);
        amps[0b0011] = c(h, 0.0);
        let target = StateVector::from_amplitudes(4, amps).unwrap();
        let ranked = screen(&pool, &hf, &target).unwrap();
        assert_eq!(pool.operators()[ranked[0].index].id(), "qeb_d_0_1_2_3");
        assert!(ranked[1..].iter().all(|cand| cand.score < 1e-15));
    }

    #[test]
    fn stationary_when_target_is_current() {
        let pool = build_qubit_pool::<f64>(3).unwrap();
        let psi = StateVector::basis_state(3, &pat("101")).unwrap();
        let ranked = screen(&pool, &psi, &psi).unwrap();
        assert!(ranked.iter().all(|cand| cand.score == 0.0));
        assert!(ranked.windows(2).all(|w| w[0].index < w[1].index));
    }

    #[test]
    fn score_equals_appended_gradient() {
        let pool = build_qeb_pool::<f64>(4, false).unwrap();
        let mut a = Ansatz::from_steps(pat("1100"), vec![("qeb_s_0_2".to_owned(), 0.4), ("qeb_d_0_1_2_3".to_owned(), -0.3)]);
        let psi = crate::adapt::evaluate(&a, &pool, a.thetas()).unwrap();
        let mut amps: Vec<_> = (0..16).map(|i| c((i as f64 * 0.7).cos(), (i as f64 * 0.23).sin())).collect();
        let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        amps.iter_mut().for_each(|z| *z /= norm);
        let target = StateVector::from_amplitudes(4, amps).unwrap();
        let ranked = screen(&pool, &psi, &target).unwrap();
        let cand = ranked[0];
        a.push(pool.operators()[cand.index].id(), 0.0);
        let g = gradient(&a, &pool, a.thetas(), &target).unwrap();
        assert!((g.last().unwrap().abs() - cand.score).abs() < 1e-10);
    }

    #[test]
    fn zero_overlap_fallback() {
        let pool = build_qeb_pool::<f64>(4, false).unwrap();
        let hf = StateVector::basis_state(4, &pat("1100")).unwrap();
        let target = StateVector::basis_state(4, &pat("1010")).unwrap();
        let ranked = screen(&pool, &hf, &target).unwrap();
        assert_eq!(pool.operators()[ranked[0].index].id(), "qeb_s_1_2");
        assert!((ranked[0].score - 1.0).abs() < 1e-15);
    }
}
