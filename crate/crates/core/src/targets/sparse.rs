use std::collections::HashSet;
use std::fmt::Write as _;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{c, czero, Real};
use crate::simcore::{BitPattern, StateVector, MAX_DENSE_QUBITS};

/// Default tolerance on `Σ|c|² = 1` for loaded states.
pub const NORM_TOL: f64 = 1e-10;

/// Spin-orbital to qubit ordering.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ordering {
    /// Qubit `2i` holds the α occupation of spatial orbital `i`, qubit `2i+1` the β one.
    #[default]
    Interleaved,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub electrons: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spatial_orbitals: Option<usize>,
    #[serde(default)]
    pub ordering: Ordering,
}

/// Sparse wave function: distinct basis patterns with complex amplitudes.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseState<T> {
    n_qubits: usize,
    entries: Vec<(BitPattern, Complex<T>)>,
    metadata: Option<Metadata>,
}

impl<T: Real> SparseState<T> {
    /// Builds a state, checking pattern lengths and distinctness. The norm is
    /// not checked; see [`SparseState::normalized`].
    pub fn new(n_qubits: usize, entries: Vec<(BitPattern, Complex<T>)>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(entries.len());
        for (p, _) in &entries {
            if p.len() != n_qubits {
                return Err(Error::input(format!(
                    "pattern '{p}' has length {} but the state has {n_qubits} qubits",
                    p.len()
                )));
            }
            if !seen.insert(*p) {
                return Err(Error::input(format!("duplicate pattern '{p}'")));
            }
        }
        Ok(Self { n_qubits, entries, metadata: None })
    }

    pub fn with_metadata(mut self, metadata: Metadata) -> Self {
        self.metadata = Some(metadata);
        self
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn entries(&self) -> &[(BitPattern, Complex<T>)] {
        &self.entries
    }

    pub fn metadata(&self) -> Option<&Metadata> {
        self.metadata.as_ref()
    }

    /// Sparsity `M`.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn norm_sqr(&self) -> T {
        self.entries.iter().fold(T::zero(), |acc, (_, a)| acc + a.norm_sqr())
    }

    pub fn is_normalized(&self, tol: T) -> bool {
        (self.norm_sqr() - T::one()).abs() <= tol
    }

    /// Returns a copy rescaled to unit norm.
    pub fn normalized(&self) -> Result<Self> {
        let norm = self.norm_sqr().sqrt();
        if norm == T::zero() {
            return Err(Error::input("cannot normalize a state with zero norm"));
        }
        let mut out = self.clone();
        for (_, a) in &mut out.entries {
            *a /= norm;
        }
        Ok(out)
    }

    /// Amplitude of `p`, zero if absent.
    pub fn amplitude(&self, p: &BitPattern) -> Complex<T> {
        self.entries
            .iter()
            .find(|(q, _)| q == p)
            .map_or_else(czero, |(_, a)| *a)
    }

    pub fn to_dense(&self) -> Result<StateVector<T>> {
        if self.n_qubits > MAX_DENSE_QUBITS {
            return Err(Error::input(format!("{} qubits is too large to densify", self.n_qubits)));
        }
        let mut amps = vec![czero(); 1 << self.n_qubits];
        for (p, a) in &self.entries {
            amps[p.index() as usize] = *a;
        }
        StateVector::from_amplitudes(self.n_qubits, amps)
    }

    /// Nonzero amplitudes of a dense state with `|c| > cutoff`, in index order.
    pub fn from_dense(state: &StateVector<T>, cutoff: T) -> Result<Self> {
        let n = state.n_qubits();
        let mut entries = Vec::new();
        for (i, a) in state.amplitudes().iter().enumerate() {
            if a.norm() > cutoff {
                entries.push((BitPattern::from_index(n, i as u64)?, *a));
            }
        }
        Self::new(n, entries)
    }

    /// `⟨self|other⟩` computed on the sparse supports.
    pub fn overlap(&self, other: &Self) -> Result<Complex<T>> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::input("overlap between states of different widths"));
        }
        let index: std::collections::HashMap<_, _> = other.entries.iter().map(|(p, a)| (*p, *a)).collect();
        Ok(self
            .entries
            .iter()
            .filter_map(|(p, a)| index.get(p).map(|b| a.conj() * b))
            .fold(czero(), |acc, z| acc + z))
    }

    pub fn cast<U: Real>(&self) -> SparseState<U> {
        SparseState {
            n_qubits: self.n_qubits,
            entries: self
                .entries
                .iter()
                .map(|(p, a)| (*p, crate::scalar::cast_complex(*a)))
                .collect(),
            metadata: self.metadata.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        let doc = StateDoc {
            n_qubits: self.n_qubits,
            metadata: self.metadata.clone(),
            entries: self
                .entries
                .iter()
                .map(|(p, a)| EntryDoc { pattern: *p, re: a.re.to_f64_lossy(), im: a.im.to_f64_lossy() })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("state serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: StateDoc = serde_json::from_str(text)?;
        let entries = doc
            .entries
            .into_iter()
            .map(|e| (e.pattern, c(T::lit(e.re), T::lit(e.im))))
            .collect();
        let s = Self::new(doc.n_qubits, entries)?;
        Ok(match doc.metadata {
            Some(m) => s.with_metadata(m),
            None => s,
        })
    }

    /// Whitespace text form: a header `n=<int>` then `pattern re im` per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("n={}\n", self.n_qubits);
        for (p, a) in &self.entries {
            writeln!(out, "{p} {:e} {:e}", a.re.to_f64_lossy(), a.im.to_f64_lossy()).expect("string write");
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or_else(|| Error::input("empty state file"))?;
        let n: usize = header
            .strip_prefix("n=")
            .and_then(|v| v.trim().parse().ok())
            .ok_or_else(|| Error::Parse { line: hline, msg: format!("expected header 'n=<int>', found '{header}'") })?;
        let mut entries = Vec::new();
        for (line, l) in lines {
            let err = |msg: String| Error::Parse { line, msg };
            let fields: Vec<&str> = l.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(err(format!("expected 'pattern re im', found {} fields", fields.len())));
            }
            let p: BitPattern = fields[0].parse().map_err(|e: Error| err(e.to_string()))?;
            let re: f64 = fields[1].parse().map_err(|_| err(format!("bad real part '{}'", fields[1])))?;
            let im: f64 = fields[2].parse().map_err(|_| err(format!("bad imaginary part '{}'", fields[2])))?;
            entries.push((p, c(T::lit(re), T::lit(im))));
        }
        Self::new(n, entries)
    }

    /// Parses either format, choosing JSON when the text starts with `{`.
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            Self::from_json(text)
        } else {
            Self::from_text(text)
        }
    }
}

#[derive(Serialize, Deserialize)]
struct StateDoc {
    n_qubits: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    metadata: Option<Metadata>,
    entries: Vec<EntryDoc>,
}

#[derive(Serialize, Deserialize)]
struct EntryDoc {
    pattern: BitPattern,
    re: f64,
    #[serde(default)]
    im: f64,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bell() -> SparseState<f64> {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        SparseState::new(
            2,
            vec![("01".parse().unwrap(), c(h, 0.0)), ("10".parse().unwrap(), c(0.0, h))],
        )
        .unwrap()
    }

    #[test]
    fn rejects_duplicates_and_bad_lengths() {
        let p: BitPattern = "01".parse().unwrap();
        assert!(SparseState::<f64>::new(2, vec![(p, c(1.0, 0.0)), (p, c(0.0, 0.0))]).is_err());
        assert!(SparseState::<f64>::new(3, vec![(p, c(1.0, 0.0))]).is_err());
    }

    #[test]
    fn json_and_text_round_trip() {
        let s = bell().with_metadata(Metadata { electrons: Some(1), spatial_orbitals: Some(1), ..Default::default() });
        let back = SparseState::<f64>::parse(&s.to_json()).unwrap();
        assert_eq!(back, s);
        let back = SparseState::<f64>::parse(&s.to_text()).unwrap();
        assert!(back.overlap(&s).unwrap().re > 1.0 - 1e-15);
    }

    #[test]
    fn text_errors_carry_line_numbers() {
        let err = SparseState::<f64>::from_text("n=2\n01 1.0 0.0\n10 x 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        assert!(SparseState::<f64>::from_text("2\n01 1 0\n").is_err());
    }

    #[test]
    fn dense_round_trip() {
        let s = bell();
        let d = s.to_dense().unwrap();
        assert_eq!(SparseState::from_dense(&d, 1e-14).unwrap(), s);
        assert!((d.norm_sqr() - 1.0).abs() < 1e-15);
    }
}
