//! Fixed-length bit vectors.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BitsError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("invalid bit character {0:?}")]
    InvalidChar(char),
}

/// An ordered sequence of bits. Stored unpacked; indexing is exact.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct BitVector {
    bits: Vec<bool>,
}

impl BitVector {
    pub fn new(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    pub fn zeros(len: usize) -> Self {
        Self {
            bits: vec![false; len],
        }
    }

    /// Builds a vector from 0/1 integers; any non-zero entry is a 1.
    pub fn from_ints(bits: &[u8]) -> Self {
        Self {
            bits: bits.iter().map(|&b| b != 0).collect(),
        }
    }

    /// Encodes `value` in exactly `width` bits, most significant bit first.
    /// Bits of `value` above `width` are dropped.
    pub fn from_uint(value: u64, width: usize) -> Self {
        let bits = (0..width)
            .rev()
            .map(|shift| shift < 64 && (value >> shift) & 1 == 1)
            .collect();
        Self { bits }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, k: usize) -> bool {
        self.bits[k]
    }

    pub fn set(&mut self, k: usize, value: bool) {
        self.bits[k] = value;
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.bits.iter().copied()
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.bits
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Interprets the vector as an unsigned integer, most significant bit first.
    pub fn to_uint(&self) -> u64 {
        self.bits.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64)
    }

    /// Bitwise complement.
    pub fn flip(&self) -> Self {
        Self {
            bits: self.bits.iter().map(|&b| !b).collect(),
        }
    }

    pub fn push(&mut self, bit: bool) {
        self.bits.push(bit);
    }

    pub fn extend_from(&mut self, other: &BitVector) {
        self.bits.extend_from_slice(&other.bits);
    }

    pub fn concat<'a>(parts: impl IntoIterator<Item = &'a BitVector>) -> Self {
        let mut out = Self::default();
        for p in parts {
            out.extend_from(p);
        }
        out
    }

    /// True iff no coordinate is 1 in both vectors.
    pub fn is_orthogonal_to(&self, other: &BitVector) -> Result<bool, BitsError> {
        if self.len() != other.len() {
            return Err(BitsError::DimensionMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        Ok(self.bits.iter().zip(&other.bits).all(|(&a, &b)| !(a && b)))
    }
}

/// True iff `a[k] * b[k] = 0` for every coordinate `k`.
pub fn are_orthogonal(a: &BitVector, b: &BitVector) -> Result<bool, BitsError> {
    a.is_orthogonal_to(b)
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitVector {
    type Err = BitsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(BitsError::InvalidChar(other)),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Self::new)
    }
}

impl From<BitVector> for String {
    fn from(v: BitVector) -> String {
        v.to_string()
    }
}

impl TryFrom<String> for BitVector {
    type Error = BitsError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<Vec<bool>> for BitVector {
    fn from(bits: Vec<bool>) -> Self {
        Self::new(bits)
    }
}
