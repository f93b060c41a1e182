use std::cmp::Ordering as CmpOrdering;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::scalar::Real;

use super::sparse::SparseState;

/// How many entries a truncation keeps.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Keep {
    /// The `M'` largest amplitudes.
    Count(usize),
    /// The fewest largest amplitudes whose weight reaches the given fraction.
    Weight(f64),
}

/// Entry indices ordered by descending `|c|`, ties by pattern order.
pub fn ranked<T: Real>(state: &SparseState<T>) -> Vec<usize> {
    let e = state.entries();
    let mut idx: Vec<usize> = (0..e.len()).collect();
    idx.sort_by(|&a, &b| {
        e[b].1
            .norm_sqr()
            .partial_cmp(&e[a].1.norm_sqr())
            .unwrap_or(CmpOrdering::Equal)
            .then_with(|| e[a].0.cmp(&e[b].0))
    });
    idx
}

/// Keeps the largest entries and renormalizes. Returns the truncated state
/// and its fidelity with the original, `Σ_kept |c|² / Σ |c|²`.
///
/// Kept entries appear in ranked order.
pub fn truncate<T: Real>(state: &SparseState<T>, keep: Keep) -> Result<(SparseState<T>, T)> {
    if state.is_empty() {
        return Err(Error::input("cannot truncate an empty state"));
    }
    let order = ranked(state);
    let total = state.norm_sqr();
    let weights: Vec<T> = order.iter().map(|&i| state.entries()[i].1.norm_sqr() / total).collect();
    let count = match keep {
        Keep::Count(0) => return Err(Error::input("must keep at least one entry")),
        Keep::Count(m) => m.min(order.len()),
        Keep::Weight(tau) => {
            if !(tau > 0.0 && tau <= 1.0) {
                return Err(Error::input(format!("weight threshold {tau} outside (0, 1]")));
            }
            let tau = T::lit(tau);
            let mut acc = T::zero();
            weights
                .iter()
                .position(|&w| {
                    acc += w;
                    acc >= tau
                })
                .map_or(order.len(), |i| i + 1)
        }
    };
    let kept: Vec<_> = order[..count].iter().map(|&i| state.entries()[i]).collect();
    let fidelity = if count == order.len() {
        T::one()
    } else {
        weights[..count].iter().fold(T::zero(), |a, &w| a + w)
    };
    let out = SparseState::new(state.n_qubits(), kept)?.normalized()?;
    Ok((reattach(out, state), fidelity))
}

fn reattach<T: Real>(s: SparseState<T>, from: &SparseState<T>) -> SparseState<T> {
    match from.metadata() {
        Some(m) => s.with_metadata(m.clone()),
        None => s,
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectrumRow {
    pub rank: usize,
    pub abs_c: f64,
    pub cum_weight: f64,
}

/// Amplitudes by descending magnitude with running weight.
pub fn spectrum<T: Real>(state: &SparseState<T>) -> Vec<SpectrumRow> {
    let mut cum = 0.0;
    ranked(state)
        .into_iter()
        .enumerate()
        .map(|(r, i)| {
            let a = state.entries()[i].1;
            cum += a.norm_sqr().to_f64_lossy();
            SpectrumRow { rank: r + 1, abs_c: a.norm().to_f64_lossy(), cum_weight: cum }
        })
        .collect()
}

pub const SPECTRUM_CSV_VERSION: u32 = 1;

pub fn spectrum_csv(rows: &[SpectrumRow]) -> String {
    let mut out = format!("# qsprep spectrum v{SPECTRUM_CSV_VERSION}\nrank,abs_c,cum_weight\n");
    for r in rows {
        writeln!(out, "{},{:.17e},{:.17e}", r.rank, r.abs_c, r.cum_weight).expect("string write");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;

    fn two_level() -> SparseState<f64> {
        SparseState::new(
            2,
            vec![("01".parse().unwrap(), c(0.1f64.sqrt(), 0.0)), ("10".parse().unwrap(), c(0.9f64.sqrt(), 0.0))],
        )
        .unwrap()
    }

    #[test]
    fn keep_one_of_two() {
        let (t, f) = truncate(&two_level(), Keep::Count(1)).unwrap();
        assert!((f - 0.9).abs() < 1e-15);
        assert_eq!(t.len(), 1);
        assert_eq!(t.entries()[0].0.to_string(), "10");
        assert!((t.entries()[0].1.re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn keep_all_or_more_is_exact() {
        for m in [2, 5] {
            let (t, f) = truncate(&two_level(), Keep::Count(m)).unwrap();
            assert_eq!(f, 1.0);
            assert_eq!(t.len(), 2);
        }
        assert!(truncate(&two_level(), Keep::Count(0)).is_err());
    }

    #[test]
    fn weight_threshold_picks_smallest_prefix() {
        assert_eq!(truncate(&two_level(), Keep::Weight(0.5)).unwrap().0.len(), 1);
        assert_eq!(truncate(&two_level(), Keep::Weight(0.95)).unwrap().0.len(), 2);
        assert!(truncate(&two_level(), Keep::Weight(1.5)).is_err());
    }

    #[test]
    fn ties_follow_pattern_order() {
        let h = c(0.5f64, 0.0);
        let s = SparseState::new(
            2,
            ["11", "00", "10", "01"].iter().map(|p| (p.parse().unwrap(), h)).collect(),
        )
        .unwrap();
        let (t, _) = truncate(&s, Keep::Count(2)).unwrap();
        let kept: Vec<String> = t.entries().iter().map(|(p, _)| p.to_string()).collect();
        assert_eq!(kept, ["00", "01"]);
        let rows = spectrum(&s);
        let cum: Vec<f64> = rows.iter().map(|r| r.cum_weight).collect();
        assert_eq!(cum, [0.25, 0.5, 0.75, 1.0]);
    }
}
