//! Fixed-length binary strings.
//!
//! Index 0 holds the most significant bit, so lexicographic order on strings
//! of equal length coincides with numeric order on their decimal values.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Result, SlicedError};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BitString {
    bits: Vec<u8>,
}

impl BitString {
    /// Builds a string from a vector of 0/1 values.
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if let Some(b) = bits.iter().find(|&&b| b > 1) {
            return Err(SlicedError::InvalidInput(format!(
                "bit value {b} is not 0 or 1"
            )));
        }
        Ok(Self { bits })
    }

    pub(crate) fn from_raw(bits: Vec<u8>) -> Self {
        debug_assert!(bits.iter().all(|&b| b <= 1));
        Self { bits }
    }

    pub fn empty() -> Self {
        Self { bits: Vec::new() }
    }

    pub fn zeros(len: usize) -> Self {
        Self { bits: vec![0; len] }
    }

    pub fn ones(len: usize) -> Self {
        Self { bits: vec![1; len] }
    }

    /// The length-`len` big-endian representation of `value`.
    pub fn from_biguint(value: &BigUint, len: usize) -> Result<Self> {
        if value.bits() > len as u64 {
            return Err(SlicedError::OutOfRange(format!(
                "{value} does not fit in {len} bits"
            )));
        }
        let bits = (0..len)
            .map(|i| value.bit((len - 1 - i) as u64) as u8)
            .collect();
        Ok(Self { bits })
    }

    pub fn from_u64(value: u64, len: usize) -> Result<Self> {
        Self::from_biguint(&BigUint::from(value), len)
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.bits
    }

    pub fn into_vec(self) -> Vec<u8> {
        self.bits
    }

    /// Bit at 0-based position `i`.
    pub fn get(&self, i: usize) -> u8 {
        self.bits[i]
    }

    pub fn weight(&self) -> usize {
        self.bits.iter().filter(|&&b| b == 1).count()
    }

    /// First `len` bits.
    pub fn prefix(&self, len: usize) -> BitString {
        Self {
            bits: self.bits[..len].to_vec(),
        }
    }

    /// Bits in the 0-based half-open range `[start, end)`, clamped to the string.
    pub fn slice(&self, start: usize, end: usize) -> BitString {
        let end = end.min(self.len());
        let start = start.min(end);
        Self {
            bits: self.bits[start..end].to_vec(),
        }
    }

    pub fn concat<'a>(parts: impl IntoIterator<Item = &'a BitString>) -> BitString {
        let mut bits = Vec::new();
        for p in parts {
            bits.extend_from_slice(&p.bits);
        }
        Self { bits }
    }

    pub fn push(&mut self, bit: u8) {
        assert!(bit <= 1);
        self.bits.push(bit);
    }

    pub fn flip(&mut self, i: usize) {
        self.bits[i] ^= 1;
    }

    pub fn remove(&mut self, i: usize) -> u8 {
        self.bits.remove(i)
    }

    pub fn insert(&mut self, i: usize, bit: u8) {
        assert!(bit <= 1);
        self.bits.insert(i, bit);
    }

    /// MSB-first integer value; 0 for the empty string.
    pub fn decimal(&self) -> BigUint {
        let mut v = BigUint::zero();
        for chunk in self.bits.chunks(64) {
            let mut word = 0u64;
            for &b in chunk {
                word = (word << 1) | b as u64;
            }
            v = (v << chunk.len()) + word;
        }
        v
    }

    /// Decimal value when it fits in a `u64`.
    pub fn to_u64(&self) -> Option<u64> {
        if self.len() > 64 {
            return self.decimal().to_u64();
        }
        Some(self.bits.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64))
    }

    pub fn hamming_distance(&self, other: &BitString) -> Result<usize> {
        if self.len() != other.len() {
            return Err(SlicedError::LengthMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        Ok(hamming(&self.bits, &other.bits))
    }

    /// `|a| + |b| - 2 LCS(a, b)`.
    pub fn deletion_distance(&self, other: &BitString) -> usize {
        deletion_distance(&self.bits, &other.bits)
    }

    /// True iff `self` is obtained from `other` by deletions.
    pub fn is_subsequence_of(&self, other: &BitString) -> bool {
        is_subsequence(&self.bits, &other.bits)
    }

    /// Bits packed MSB-first into bytes, zero padded at the end.
    pub fn to_bytes(&self) -> Vec<u8> {
        self.bits
            .chunks(8)
            .map(|c| {
                c.iter()
                    .enumerate()
                    .fold(0u8, |acc, (i, &b)| acc | (b << (7 - i)))
            })
            .collect()
    }

    /// The first `len` bits of `bytes`, MSB-first; missing bits read as zero.
    pub fn from_bytes(bytes: &[u8], len: usize) -> Self {
        let bits = (0..len)
            .map(|i| bytes.get(i / 8).map_or(0, |byte| (byte >> (7 - i % 8)) & 1))
            .collect();
        Self { bits }
    }
}

pub(crate) fn hamming(a: &[u8], b: &[u8]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

pub(crate) fn is_subsequence(s: &[u8], c: &[u8]) -> bool {
    let mut it = c.iter();
    s.iter().all(|b| it.any(|x| x == b))
}

pub(crate) fn lcs(a: &[u8], b: &[u8]) -> usize {
    let mut row = vec![0usize; b.len() + 1];
    for &x in a {
        let mut diag = 0;
        for j in 0..b.len() {
            let up = row[j + 1];
            row[j + 1] = if x == b[j] { diag + 1 } else { up.max(row[j]) };
            diag = up;
        }
    }
    row[b.len()]
}

pub(crate) fn deletion_distance(a: &[u8], b: &[u8]) -> usize {
    a.len() + b.len() - 2 * lcs(a, b)
}

impl FromStr for BitString {
    type Err = SlicedError;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(SlicedError::InvalidInput(format!(
                    "unexpected character {other:?} in bit string"
                ))),
            })
            .collect::<Result<Vec<u8>>>()?;
        Ok(Self { bits })
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn hamming_examples() {
        assert_eq!(bs("001").hamming_distance(&bs("001")).unwrap(), 0);
        assert_eq!(bs("001").hamming_distance(&bs("101")).unwrap(), 1);
        assert_eq!(bs("111").hamming_distance(&bs("000")).unwrap(), 3);
        assert!(bs("01").hamming_distance(&bs("011")).is_err());
    }

    #[test]
    fn decimal_examples() {
        assert_eq!(bs("111").decimal(), BigUint::from(7u8));
        assert_eq!(bs("110").decimal(), BigUint::from(6u8));
        assert_eq!(BitString::empty().decimal(), BigUint::zero());
        let long = BitString::ones(130);
        assert_eq!(long.decimal(), (BigUint::from(1u8) << 130usize) - 1u8);
    }

    #[test]
    fn subsequence_examples() {
        assert!(bs("01").is_subsequence_of(&bs("001")));
        assert!(!bs("11").is_subsequence_of(&bs("001")));
        assert!(BitString::empty().is_subsequence_of(&bs("0110")));
    }

    #[test]
    fn deletion_distance_examples() {
        assert_eq!(bs("01").deletion_distance(&bs("01")), 0);
        assert_eq!(bs("001").deletion_distance(&bs("01")), 1);
        assert_eq!(bs("10").deletion_distance(&bs("01")), 2);
    }

    #[test]
    fn bytes_round_trip() {
        let s = bs("1011000111");
        assert_eq!(s.to_bytes(), vec![0b1011_0001, 0b1100_0000]);
        assert_eq!(BitString::from_bytes(&s.to_bytes(), 10), s);
        assert_eq!(BitString::from_bytes(&[0xff], 10), bs("1111111100"));
    }

    fn bits(max: usize) -> impl Strategy<Value = BitString> {
        prop::collection::vec(0u8..2, 0..max).prop_map(BitString::from_raw)
    }

    proptest! {
        #[test]
        fn decimal_order_matches_lex_order(a in prop::collection::vec(0u8..2, 12), b in prop::collection::vec(0u8..2, 12)) {
            let (a, b) = (BitString::from_raw(a), BitString::from_raw(b));
            prop_assert_eq!(a.cmp(&b), a.decimal().cmp(&b.decimal()));
            prop_assert_eq!(BitString::from_biguint(&a.decimal(), 12).unwrap(), a);
        }

        #[test]
        fn hamming_zero_iff_equal(a in prop::collection::vec(0u8..2, 10), b in prop::collection::vec(0u8..2, 10)) {
            let (a, b) = (BitString::from_raw(a), BitString::from_raw(b));
            prop_assert_eq!(a.hamming_distance(&b).unwrap() == 0, a == b);
        }

        #[test]
        fn deletion_distance_is_a_metric(a in bits(10), b in bits(10), c in bits(10)) {
            let ab = a.deletion_distance(&b);
            prop_assert_eq!(ab, b.deletion_distance(&a));
            prop_assert_eq!(ab == 0, a == b);
            prop_assert!(ab <= a.deletion_distance(&c) + c.deletion_distance(&b));
        }

        #[test]
        fn subsequence_iff_distance_is_length_gap(a in bits(8), b in bits(10)) {
            let sub = a.is_subsequence_of(&b);
            let gap = b.len().checked_sub(a.len());
            prop_assert_eq!(sub, gap == Some(a.deletion_distance(&b)));
        }
    }
}
