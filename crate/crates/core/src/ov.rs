//! Set disjointness and orthogonal vectors instances, their brute-force
//! oracles, and the communication-free encoding of the former into the latter.
//!
//! Indices in this API are 0-based. The index code of vector `i` is the
//! 0-based index itself written MSB-first in `ceil(log2 n)` bits, which fits
//! for every `i < n` and is injective.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::{BitVector, BitsError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OvError {
    #[error("instance size must be at least 1")]
    Empty,
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("vector {index} has length {found}, expected {expected}")]
    Length {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("left has {left} vectors but right has {right}")]
    SideMismatch { left: usize, right: usize },
    #[error("index {index} out of range for n = {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error(transparent)]
    Bits(#[from] BitsError),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// `ceil(log2 n)` for `n >= 1`; 0 for `n = 1`.
pub fn ceil_log2(n: usize) -> usize {
    assert!(n >= 1, "ceil_log2 of zero");
    (usize::BITS - (n - 1).leading_zeros()) as usize
}

/// Dimension of the orthogonal vectors instance produced from a size-`n`
/// disjointness instance: `2 ceil(log2 n) + 3`.
pub fn encoded_dimension(n: usize) -> usize {
    2 * ceil_log2(n) + 3
}

/// Two bit vectors of equal length `n >= 1`, one per party.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DisjointnessInstance {
    x: BitVector,
    y: BitVector,
}

impl DisjointnessInstance {
    pub fn new(x: BitVector, y: BitVector) -> Result<Self, OvError> {
        if x.is_empty() {
            return Err(OvError::Empty);
        }
        if x.len() != y.len() {
            return Err(OvError::Length {
                index: 1,
                expected: x.len(),
                found: y.len(),
            });
        }
        Ok(Self { x, y })
    }

    pub fn x(&self) -> &BitVector {
        &self.x
    }

    pub fn y(&self) -> &BitVector {
        &self.y
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    /// Smallest `k` with `x[k] = y[k] = 1`, if the sets intersect.
    pub fn is_intersecting(&self) -> Option<usize> {
        (0..self.n()).find(|&k| self.x.get(k) && self.y.get(k))
    }

    /// Writes the text form: a header line `n`, then `x`, then `y`.
    pub fn to_text(&self) -> String {
        format!("{}\n{}\n{}\n", self.n(), self.x, self.y)
    }

    pub fn from_text(text: &str) -> Result<Self, OvError> {
        let mut lines = content_lines(text);
        let (line, header) = lines.next().ok_or(OvError::Parse {
            line: 1,
            message: "missing header".into(),
        })?;
        let n = parse_header(line, header, 1)?[0];
        if n == 0 {
            return Err(OvError::Parse {
                line,
                message: "n must be at least 1".into(),
            });
        }
        let x = parse_row(lines.next(), n, "x")?;
        let y = parse_row(lines.next(), n, "y")?;
        if let Some((line, _)) = lines.next() {
            return Err(OvError::Parse {
                line,
                message: "unexpected trailing row".into(),
            });
        }
        Self::new(x, y)
    }
}

pub fn is_intersecting(inst: &DisjointnessInstance) -> Option<usize> {
    inst.is_intersecting()
}

/// Two equal-size sets of `d`-dimensional bit vectors, `n >= 1`, `d >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OvInstance {
    left: Vec<BitVector>,
    right: Vec<BitVector>,
    dimension: usize,
}

impl OvInstance {
    pub fn new(left: Vec<BitVector>, right: Vec<BitVector>) -> Result<Self, OvError> {
        if left.is_empty() || right.is_empty() {
            return Err(OvError::Empty);
        }
        if left.len() != right.len() {
            return Err(OvError::SideMismatch {
                left: left.len(),
                right: right.len(),
            });
        }
        let dimension = left[0].len();
        if dimension == 0 {
            return Err(OvError::ZeroDimension);
        }
        for (index, v) in left.iter().chain(&right).enumerate() {
            if v.len() != dimension {
                return Err(OvError::Length {
                    index,
                    expected: dimension,
                    found: v.len(),
                });
            }
        }
        Ok(Self {
            left,
            right,
            dimension,
        })
    }

    pub fn left(&self) -> &[BitVector] {
        &self.left
    }

    pub fn right(&self) -> &[BitVector] {
        &self.right
    }

    pub fn n(&self) -> usize {
        self.left.len()
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn ones_left(&self) -> usize {
        self.left.iter().map(BitVector::count_ones).sum()
    }

    pub fn ones_right(&self) -> usize {
        self.right.iter().map(BitVector::count_ones).sum()
    }

    /// Lexicographically smallest `(i, j)` with `left[i]` orthogonal to
    /// `right[j]`, by exhaustive search over all pairs.
    pub fn has_orthogonal_pair(&self) -> Option<(usize, usize)> {
        for (i, l) in self.left.iter().enumerate() {
            for (j, r) in self.right.iter().enumerate() {
                if l.is_orthogonal_to(r).expect("dimensions validated") {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// Header `n d`, then the left rows, then the right rows.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n(), self.dimension);
        for v in self.left.iter().chain(&self.right) {
            out.push_str(&v.to_string());
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, OvError> {
        let mut lines = content_lines(text);
        let (line, header) = lines.next().ok_or(OvError::Parse {
            line: 1,
            message: "missing header".into(),
        })?;
        let dims = parse_header(line, header, 2)?;
        let (n, d) = (dims[0], dims[1]);
        if n == 0 || d == 0 {
            return Err(OvError::Parse {
                line,
                message: "n and d must be at least 1".into(),
            });
        }
        let mut left = Vec::with_capacity(n);
        let mut right = Vec::with_capacity(n);
        for _ in 0..n {
            left.push(parse_row(lines.next(), d, "left vector")?);
        }
        for _ in 0..n {
            right.push(parse_row(lines.next(), d, "right vector")?);
        }
        if let Some((line, _)) = lines.next() {
            return Err(OvError::Parse {
                line,
                message: "unexpected trailing row".into(),
            });
        }
        Self::new(left, right)
    }

    /// Canonical form up to reordering each side (sorted rows). Used to
    /// enumerate instances up to relabeling of the vectors.
    pub fn canonical(&self) -> Self {
        let mut left = self.left.clone();
        let mut right = self.right.clone();
        left.sort();
        right.sort();
        Self {
            left,
            right,
            dimension: self.dimension,
        }
    }
}

pub fn has_orthogonal_pair(inst: &OvInstance) -> Option<(usize, usize)> {
    inst.has_orthogonal_pair()
}

impl fmt::Display for OvInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for OvInstance {
    type Err = OvError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::from_text(s)
    }
}

impl FromStr for DisjointnessInstance {
    type Err = OvError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::from_text(s)
    }
}

/// Index code of the 0-based index `index` among `n` vectors:
/// `index` MSB-first in `ceil(log2 n)` bits.
pub fn index_code(index: usize, n: usize) -> Result<BitVector, OvError> {
    if index >= n {
        return Err(OvError::IndexOutOfRange { index, n });
    }
    Ok(BitVector::from_uint(index as u64, ceil_log2(n)))
}

/// Alice's half of the encoding: `x[i] | !x[i] | !x[i] | s_i | !s_i`.
pub fn encode_alice(x: &BitVector) -> Vec<BitVector> {
    let n = x.len();
    (0..n)
        .map(|i| {
            let s = index_code(i, n).expect("index in range");
            let b = x.get(i);
            let mut v = BitVector::new(vec![b, !b, !b]);
            v.extend_from(&s);
            v.extend_from(&s.flip());
            v
        })
        .collect()
}

/// Bob's half of the encoding: `!y[j] | y[j] | !y[j] | !s_j | s_j`.
pub fn encode_bob(y: &BitVector) -> Vec<BitVector> {
    let n = y.len();
    (0..n)
        .map(|j| {
            let s = index_code(j, n).expect("index in range");
            let b = y.get(j);
            let mut v = BitVector::new(vec![!b, b, !b]);
            v.extend_from(&s.flip());
            v.extend_from(&s);
            v
        })
        .collect()
}

/// Encodes a disjointness instance as an orthogonal vectors instance of
/// dimension `2 ceil(log2 n) + 3`. The sets intersect iff the output has an
/// orthogonal pair; each side is computed from its own party's input only.
pub fn encode_disjointness(inst: &DisjointnessInstance) -> OvInstance {
    OvInstance::new(encode_alice(inst.x()), encode_bob(inst.y()))
        .expect("encoder output is well formed")
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn parse_header(line: usize, header: &str, fields: usize) -> Result<Vec<usize>, OvError> {
    let values: Vec<&str> = header.split_whitespace().collect();
    if values.len() != fields {
        return Err(OvError::Parse {
            line,
            message: format!("header needs {fields} field(s), found {}", values.len()),
        });
    }
    values
        .iter()
        .map(|v| {
            v.parse::<usize>().map_err(|e| OvError::Parse {
                line,
                message: format!("bad header value {v:?}: {e}"),
            })
        })
        .collect()
}

fn parse_row(next: Option<(usize, &str)>, len: usize, what: &str) -> Result<BitVector, OvError> {
    let (line, row) = next.ok_or_else(|| OvError::Parse {
        line: 0,
        message: format!("missing {what} row"),
    })?;
    let v: BitVector = row.parse().map_err(|e: BitsError| OvError::Parse {
        line,
        message: e.to_string(),
    })?;
    if v.len() != len {
        return Err(OvError::Parse {
            line,
            message: format!("{what} has {} bits, expected {len}", v.len()),
        });
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bv(s: &str) -> BitVector {
        s.parse().unwrap()
    }

    fn disj(x: &str, y: &str) -> DisjointnessInstance {
        DisjointnessInstance::new(bv(x), bv(y)).unwrap()
    }

    #[test]
    fn ceil_log2_values() {
        let expect = [
            (1, 0),
            (2, 1),
            (3, 2),
            (4, 2),
            (5, 3),
            (8, 3),
            (9, 4),
            (16, 4),
            (64, 6),
            (1024, 10),
        ];
        for (n, e) in expect {
            assert_eq!(ceil_log2(n), e, "n = {n}");
        }
    }

    #[test]
    fn intersection_examples() {
        assert_eq!(disj("10", "11").is_intersecting(), Some(0));
        assert_eq!(disj("10", "01").is_intersecting(), None);
        assert_eq!(disj("0000", "1111").is_intersecting(), None);
    }

    #[test]
    fn orthogonal_pair_examples() {
        let one = OvInstance::new(vec![bv("1")], vec![bv("1")]).unwrap();
        assert_eq!(one.has_orthogonal_pair(), None);
        let disjoint = OvInstance::new(vec![bv("10")], vec![bv("01")]).unwrap();
        assert_eq!(disjoint.has_orthogonal_pair(), Some((0, 0)));
    }

    #[test]
    fn smallest_witness_is_reported() {
        let inst = OvInstance::new(vec![bv("11"), bv("00")], vec![bv("11"), bv("01")]).unwrap();
        assert_eq!(inst.has_orthogonal_pair(), Some((1, 0)));
    }

    #[test]
    fn index_code_examples() {
        assert_eq!(index_code(0, 2).unwrap(), bv("0"));
        assert_eq!(index_code(3, 4).unwrap(), bv("11"));
        assert_eq!(index_code(0, 1).unwrap(), bv(""));
        assert_eq!(
            index_code(2, 2),
            Err(OvError::IndexOutOfRange { index: 2, n: 2 })
        );
    }

    #[test]
    fn index_code_is_injective() {
        for n in 1..=1024 {
            let mut codes: Vec<_> = (0..n).map(|i| index_code(i, n).unwrap()).collect();
            assert!(codes.iter().all(|c| c.len() == ceil_log2(n)));
            codes.sort();
            codes.dedup();
            assert_eq!(codes.len(), n, "collision for n = {n}");
        }
    }

    #[test]
    fn encoder_examples() {
        let ov = encode_disjointness(&disj("10", "11"));
        assert_eq!(ov.dimension(), 5);
        assert_eq!(ov.left()[0], bv("10001"));
        assert_eq!(ov.right()[0], bv("01010"));
        assert_eq!(ov.right()[1], bv("01001"));
        assert!(ov.left()[0].is_orthogonal_to(&ov.right()[0]).unwrap());
        assert!(!ov.left()[0].is_orthogonal_to(&ov.right()[1]).unwrap());
        assert_eq!(ov.has_orthogonal_pair(), Some((0, 0)));

        let single = encode_disjointness(&disj("0", "0"));
        assert_eq!(single.dimension(), 3);
        assert_eq!(single.left()[0], bv("011"));
        assert_eq!(single.right()[0], bv("101"));
        assert_eq!(single.has_orthogonal_pair(), None);
    }

    #[test]
    fn dimension_law() {
        for n in 1..=300 {
            let x = BitVector::zeros(n);
            assert_eq!(encode_alice(&x)[0].len(), encoded_dimension(n));
            assert_eq!(encode_bob(&x)[n - 1].len(), encoded_dimension(n));
        }
    }

    #[test]
    fn sides_encode_independently() {
        let a = encode_disjointness(&disj("1011", "0000"));
        let b = encode_disjointness(&disj("1011", "1111"));
        assert_eq!(a.left(), b.left());
        let c = encode_disjointness(&disj("0000", "0110"));
        let d = encode_disjointness(&disj("1111", "0110"));
        assert_eq!(c.right(), d.right());
    }

    #[test]
    fn text_formats_round_trip() {
        let d = disj("1011", "0110");
        assert_eq!(d.to_text(), "4\n1011\n0110\n");
        assert_eq!(DisjointnessInstance::from_text(&d.to_text()).unwrap(), d);
        let ov = encode_disjointness(&d);
        assert_eq!(OvInstance::from_text(&ov.to_text()).unwrap(), ov);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = OvInstance::from_text("2 3\n101\n10\n000\n111\n").unwrap_err();
        assert!(matches!(err, OvError::Parse { line: 3, .. }), "{err:?}");
        let err = OvInstance::from_text("1 2\n1a\n00\n").unwrap_err();
        assert!(matches!(err, OvError::Parse { line: 2, .. }), "{err:?}");
        let err = DisjointnessInstance::from_text("2 5\n10\n01\n").unwrap_err();
        assert!(matches!(err, OvError::Parse { line: 1, .. }), "{err:?}");
        let err = DisjointnessInstance::from_text("2\n10\n01\n11\n").unwrap_err();
        assert!(matches!(err, OvError::Parse { line: 4, .. }), "{err:?}");
        assert!(OvInstance::from_text("").is_err());
    }

    #[test]
    fn invalid_instances_are_rejected() {
        assert_eq!(
            DisjointnessInstance::new(bv(""), bv("")),
            Err(OvError::Empty)
        );
        assert!(DisjointnessInstance::new(bv("1"), bv("10")).is_err());
        assert_eq!(
            OvInstance::new(vec![bv("")], vec![bv("")]),
            Err(OvError::ZeroDimension)
        );
        assert!(matches!(
            OvInstance::new(vec![bv("1")], vec![]),
            Err(OvError::Empty)
        ));
        assert!(matches!(
            OvInstance::new(vec![bv("1"), bv("0")], vec![bv("1")]),
            Err(OvError::SideMismatch { .. })
        ));
        assert!(matches!(
            OvInstance::new(vec![bv("10")], vec![bv("1")]),
            Err(OvError::Length { .. })
        ));
    }
}
