//! Operator pools for adaptive ansatz growth.
//!
//! Pool unitaries are `exp(iθG)` with Hermitian `G`. Operators are sorted by
//! support, then kind, then Pauli word.

mod operator;
mod templates;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

pub use operator::{OperatorKind, PoolOperator};
pub use templates::{
    pauli_string_counts, pauli_string_template, qeb_double_template, qeb_single_template, QEB_DOUBLE_COUNTS,
    QEB_SINGLE_COUNTS, TEMPLATE_ANGLE_SCALE,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PoolKind {
    Qeb,
    Qubit,
}

impl fmt::Display for PoolKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PoolKind::Qeb => "qeb",
            PoolKind::Qubit => "qubit",
        })
    }
}

impl FromStr for PoolKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "qeb" => Ok(PoolKind::Qeb),
            "qubit" => Ok(PoolKind::Qubit),
            _ => Err(Error::input(format!("unknown pool kind '{s}' (expected qeb or qubit)"))),
        }
    }
}

/// Symmetries every operator of a pool conserves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SymmetryTag {
    ParticleAndSzPreserving,
    ParticlePreserving,
    None,
}

/// A finite set of operators with id lookup.
#[derive(Clone, Debug)]
pub struct Pool<T> {
    n_qubits: usize,
    kind: PoolKind,
    operators: Vec<PoolOperator<T>>,
    symmetry: SymmetryTag,
    index: HashMap<String, usize>,
}

#[derive(Serialize)]
struct OperatorRecord<'a> {
    id: &'a str,
    kind: OperatorKind,
    support: &'a [usize],
    #[serde(skip_serializing_if = "Option::is_none")]
    pauli_label: Option<String>,
}

impl<T: Real> Pool<T> {
    fn assemble(n_qubits: usize, kind: PoolKind, mut operators: Vec<PoolOperator<T>>, symmetry: SymmetryTag) -> Self {
        operators.sort_by(|a, b| {
            (a.support(), a.kind(), a.pauli_label()).cmp(&(b.support(), b.kind(), b.pauli_label()))
        });
        let index = operators.iter().enumerate().map(|(i, op)| (op.id().to_owned(), i)).collect();
        Self { n_qubits, kind, operators, symmetry, index }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn kind(&self) -> PoolKind {
        self.kind
    }

    pub fn operators(&self) -> &[PoolOperator<T>] {
        &self.operators
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    pub fn symmetry(&self) -> SymmetryTag {
        self.symmetry
    }

    pub fn position(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn get(&self, id: &str) -> Result<&PoolOperator<T>> {
        self.position(id)
            .map(|i| &self.operators[i])
            .ok_or_else(|| Error::input(format!("operator '{id}' is not in the pool")))
    }

    /// JSON list of `{id, kind, support, pauli_label?}`.
    pub fn to_json(&self) -> String {
        let records: Vec<OperatorRecord> = self
            .operators
            .iter()
            .map(|op| OperatorRecord { id: op.id(), kind: op.kind(), support: op.support(), pauli_label: op.pauli_label() })
            .collect();
        serde_json::to_string_pretty(&records).expect("pool serializes")
    }
}

/// Options for [`build_pool`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PoolOptions {
    /// QEB only: keep operators that conserve `S_z` under interleaved spin
    /// orbitals (qubit `2i` is α, `2i+1` is β).
    pub spin_restricted: bool,
}

pub fn build_pool<T: Real>(kind: PoolKind, n: usize, opts: &PoolOptions) -> Result<Pool<T>> {
    match kind {
        PoolKind::Qeb => build_qeb_pool(n, opts.spin_restricted),
        PoolKind::Qubit => build_qubit_pool(n),
    }
}

fn check_width(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::input(format!("pools need at least 2 qubits, got {n}")));
    }
    Ok(())
}

/// Disjoint pairs-of-pairs `((p,q),(r,s))` with `p<q`, `r<s`, `p<r`.
fn pair_of_pairs(n: usize) -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for p in 0..n {
        for q in p + 1..n {
            for r in p + 1..n {
                for s in r + 1..n {
                    if r != q && s != q {
                        out.push([p, q, r, s]);
                    }
                }
            }
        }
    }
    out
}

/// QEB singles over pairs `p<q` and doubles over disjoint pairs-of-pairs.
pub fn build_qeb_pool<T: Real>(n: usize, spin_restricted: bool) -> Result<Pool<T>> {
    check_width(n)?;
    let alpha = |q: usize| q.is_multiple_of(2);
    let mut ops = Vec::new();
    for p in 0..n {
        for q in p + 1..n {
            if !spin_restricted || alpha(p) == alpha(q) {
                ops.push(PoolOperator::qeb_single(p, q)?);
            }
        }
    }
    for [p, q, r, s] in pair_of_pairs(n) {
        let n_alpha = |a: usize, b: usize| alpha(a) as u8 + alpha(b) as u8;
        if !spin_restricted || n_alpha(p, q) == n_alpha(r, s) {
            ops.push(PoolOperator::qeb_double(p, q, r, s)?);
        }
    }
    let tag = if spin_restricted { SymmetryTag::ParticleAndSzPreserving } else { SymmetryTag::ParticlePreserving };
    Ok(Pool::assemble(n, PoolKind::Qeb, ops, tag))
}

/// Pauli strings `X_q Y_p` for every ordered pair and, for every four
/// qubits, the eight `X`/`Y` words with an odd number of `Y`.
pub fn build_qubit_pool<T: Real>(n: usize) -> Result<Pool<T>> {
    check_width(n)?;
    let mut ops = Vec::new();
    for p in 0..n {
        for q in p + 1..n {
            for word in ["XY", "YX"] {
                ops.push(PoolOperator::pauli_string(word, &[p, q])?);
            }
        }
    }
    let odd_y: Vec<String> = (0u32..16)
        .filter(|m| m.count_ones() % 2 == 1)
        .map(|m| (0..4).map(|i| if m >> (3 - i) & 1 == 1 { 'Y' } else { 'X' }).collect())
        .collect();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    for w in &odd_y {
                        ops.push(PoolOperator::pauli_string(w, &[a, b, c, d])?);
                    }
                }
            }
        }
    }
    Ok(Pool::assemble(n, PoolKind::Qubit, ops, SymmetryTag::None))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simcore::{BitPattern, StateVector};
    use crate::targets::twice_sz;

    #[test]
    fn qeb_pool_sizes() {
        let p = build_qeb_pool::<f64>(2, false).unwrap();
        assert_eq!(p.len(), 1);
        let p = build_qeb_pool::<f64>(4, false).unwrap();
        let count = |k| p.operators().iter().filter(|o| o.kind() == k).count();
        assert_eq!((count(OperatorKind::QebSingle), count(OperatorKind::QebDouble)), (6, 3));
        assert!(build_qeb_pool::<f64>(1, false).is_err());
    }

    #[test]
    fn qubit_pool_sizes() {
        let p = build_qubit_pool::<f64>(2).unwrap();
        let labels: Vec<String> = p.operators().iter().map(|o| o.pauli_label().unwrap()).collect();
        assert_eq!(labels, ["X0Y1", "Y0X1"]);
        let p = build_qubit_pool::<f64>(4).unwrap();
        assert_eq!(p.len(), 12 + 8);
        assert_eq!(p.symmetry(), SymmetryTag::None);
    }

    #[test]
    fn ids_unique_and_sorted() {
        let p = build_qeb_pool::<f64>(6, false).unwrap();
        assert_eq!(p.index.len(), p.len());
        assert!(p.operators().windows(2).all(|w| w[0].support() <= w[1].support()));
        assert_eq!(p.get("qeb_s_0_1").unwrap().support(), &[0, 1]);
        assert!(p.get("nope").is_err());
    }

    #[test]
    fn restricted_pool_conserves_sectors() {
        let n = 6;
        let pool = build_qeb_pool::<f64>(n, true).unwrap();
        for op in pool.operators() {
            for b in 0..1u64 << n {
                let pb = BitPattern::from_index(n, b).unwrap();
                let mut s = StateVector::<f64>::basis_state(n, &pb).unwrap();
                op.apply_exponential(s.amplitudes_mut(), n, 0.37);
                for (i, a) in s.amplitudes().iter().enumerate() {
                    if a.norm() > 1e-14 {
                        let pi = BitPattern::from_index(n, i as u64).unwrap();
                        assert_eq!(pi.weight(), pb.weight());
                        assert_eq!(twice_sz(&pi), twice_sz(&pb), "{} on {pb}", op.id());
                    }
                }
            }
        }
    }

    #[test]
    fn json_export_lists_ids() {
        let p = build_qubit_pool::<f64>(2).unwrap();
        let v: serde_json::Value = serde_json::from_str(&p.to_json()).unwrap();
        assert_eq!(v[0]["id"], "q_X0Y1");
        assert_eq!(v[0]["kind"], "qubit_string");
        assert_eq!(v[1]["pauli_label"], "Y0X1");
    }
}
