use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Longest supported bit pattern.
pub const MAX_PATTERN_LEN: usize = 64;

/// Computational basis label over `len` qubits.
///
/// Character `i` of the printed form is qubit `i`, and the basis index is
/// big-endian: qubit 0 is the most significant bit. Because of that, the
/// lexicographic order of equal-length strings is the numeric order of
/// their indices, which the derived `Ord` reproduces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitPattern {
    len: usize,
    bits: u64,
}

impl BitPattern {
    /// Pattern of length `len` whose big-endian value is `index`.
    pub fn from_index(len: usize, index: u64) -> Result<Self> {
        if len > MAX_PATTERN_LEN {
            return Err(Error::input(format!(
                "pattern length {len} exceeds {MAX_PATTERN_LEN}"
            )));
        }
        if len < 64 && index >> len != 0 {
            return Err(Error::input(format!(
                "index {index} does not fit in {len} bits"
            )));
        }
        Ok(Self { len, bits: index })
    }

    pub fn zeros(len: usize) -> Result<Self> {
        Self::from_index(len, 0)
    }

    /// Pattern with ones exactly at the listed qubit positions.
    pub fn from_ones(len: usize, ones: &[usize]) -> Result<Self> {
        let mut p = Self::zeros(len)?;
        for &q in ones {
            if q >= len {
                return Err(Error::input(format!("qubit {q} out of range for length {len}")));
            }
            p.bits |= p.mask(q);
        }
        Ok(p)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Big-endian basis index.
    pub fn index(&self) -> u64 {
        self.bits
    }

    #[inline]
    fn mask(&self, qubit: usize) -> u64 {
        1u64 << (self.len - 1 - qubit)
    }

    pub fn get(&self, qubit: usize) -> bool {
        self.bits & self.mask(qubit) != 0
    }

    pub fn with(mut self, qubit: usize, value: bool) -> Self {
        if value {
            self.bits |= self.mask(qubit);
        } else {
            self.bits &= !self.mask(qubit);
        }
        self
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.bits.count_ones() as usize
    }

    /// Qubit positions holding a 1, ascending.
    pub fn ones(&self) -> Vec<usize> {
        (0..self.len).filter(|&q| self.get(q)).collect()
    }

    /// Concatenation `self ‖ other` (other becomes the least significant part).
    pub fn concat(&self, other: &BitPattern) -> Result<Self> {
        let len = self.len + other.len;
        let bits = if other.len == 64 { 0 } else { self.bits << other.len } | other.bits;
        Self::from_index(len, bits)
    }
}

impl fmt::Display for BitPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in 0..self.len {
            f.write_str(if self.get(q) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitPattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.len() > MAX_PATTERN_LEN {
            return Err(Error::input(format!(
                "pattern '{s}' longer than {MAX_PATTERN_LEN} bits"
            )));
        }
        let mut bits = 0u64;
        for ch in s.chars() {
            bits = (bits << 1)
                | match ch {
                    '0' => 0,
                    '1' => 1,
                    _ => return Err(Error::input(format!("invalid character '{ch}' in pattern '{s}'"))),
                };
        }
        Ok(Self { len: s.len(), bits })
    }
}

impl Serialize for BitPattern {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BitPattern {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn big_endian_indices() {
        assert_eq!("00".parse::<BitPattern>().unwrap().index(), 0);
        assert_eq!("10".parse::<BitPattern>().unwrap().index(), 2);
        assert_eq!("1100".parse::<BitPattern>().unwrap().index(), 12);
    }

    #[test]
    fn ones_and_weight() {
        let p: BitPattern = "101".parse().unwrap();
        assert_eq!(p.weight(), 2);
        assert_eq!(p.ones(), vec![0, 2]);
        assert_eq!(BitPattern::from_ones(3, &[0, 2]).unwrap(), p);
        assert_eq!(p.to_string(), "101");
    }

    #[test]
    fn rejects_garbage() {
        assert!("10a".parse::<BitPattern>().is_err());
        assert!(BitPattern::from_index(2, 4).is_err());
        assert!(BitPattern::from_ones(2, &[2]).is_err());
    }

    #[test]
    fn ordering_is_lexicographic() {
        let a: BitPattern = "0110".parse().unwrap();
        let b: BitPattern = "1000".parse().unwrap();
        assert!(a < b);
        assert!(a.to_string() < b.to_string());
    }
}
