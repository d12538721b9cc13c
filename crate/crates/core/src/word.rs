//! Words (unordered sets of strings), indicator vectors and error balls.

use std::collections::BTreeSet;

use crate::bits::BitString;
use crate::error::{Result, SlicedError};

/// Largest ball the enumeration helpers will materialize.
pub const BALL_CAP: u128 = 1 << 22;

/// An unordered set of distinct strings. Duplicates merge on construction and
/// the canonical order is descending.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    strings: Vec<BitString>,
}

impl Word {
    pub fn new(strings: impl IntoIterator<Item = BitString>) -> Self {
        let set: BTreeSet<BitString> = strings.into_iter().collect();
        Self {
            strings: set.into_iter().rev().collect(),
        }
    }

    /// Strings in canonical (descending) order.
    pub fn strings(&self) -> &[BitString] {
        &self.strings
    }

    pub fn len(&self) -> usize {
        self.strings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strings.is_empty()
    }

    pub fn contains(&self, s: &BitString) -> bool {
        self.strings.contains(s)
    }

    /// Common length of all strings, if they agree.
    pub fn uniform_len(&self) -> Option<usize> {
        let first = self.strings.first()?.len();
        self.strings
            .iter()
            .all(|s| s.len() == first)
            .then_some(first)
    }
}

impl FromIterator<BitString> for Word {
    fn from_iter<I: IntoIterator<Item = BitString>>(iter: I) -> Self {
        Self::new(iter)
    }
}

/// Characteristic vector of a set of length-`l_prime` strings over all
/// `2^l_prime` values, stored by its support. Position `i` (0-based) is set
/// iff the string with decimal value `i` is in the set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndicatorVector {
    l_prime: usize,
    support: BTreeSet<u64>,
}

impl IndicatorVector {
    pub fn new(l_prime: usize, set: &[BitString]) -> Result<Self> {
        if l_prime > 63 {
            return Err(SlicedError::Unsupported(format!(
                "indicator vector over 2^{l_prime} positions"
            )));
        }
        let mut support = BTreeSet::new();
        for s in set {
            if s.len() != l_prime {
                return Err(SlicedError::LengthMismatch {
                    left: s.len(),
                    right: l_prime,
                });
            }
            support.insert(s.to_u64().expect("fits"));
        }
        Ok(Self { l_prime, support })
    }

    pub fn from_support(l_prime: usize, support: impl IntoIterator<Item = u64>) -> Self {
        Self {
            l_prime,
            support: support.into_iter().collect(),
        }
    }

    pub fn len(&self) -> u64 {
        1u64 << self.l_prime
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn weight(&self) -> usize {
        self.support.len()
    }

    pub fn support(&self) -> impl Iterator<Item = u64> + '_ {
        self.support.iter().copied()
    }

    /// The strings whose positions are set, in descending order.
    pub fn to_set(&self) -> Vec<BitString> {
        self.support
            .iter()
            .rev()
            .map(|&v| BitString::from_u64(v, self.l_prime).expect("fits"))
            .collect()
    }

    /// Dense form; only sensible for small `l_prime`.
    pub fn to_bits(&self) -> BitString {
        let mut bits = vec![0u8; self.len() as usize];
        for &v in &self.support {
            bits[v as usize] = 1;
        }
        BitString::from_raw(bits)
    }

    pub fn hamming_distance(&self, other: &IndicatorVector) -> usize {
        self.support.symmetric_difference(&other.support).count()
    }
}

fn binom_u128(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let mut r: u128 = 1;
    for i in 0..k {
        r = r.saturating_mul(n - i) / (i + 1);
    }
    r
}

fn check_ball_size(w: &Word, k: usize, per_op: u128) -> Result<()> {
    let total: u128 = w.strings().iter().map(|s| s.len() as u128).sum();
    let count: u128 = (0..=k as u128).map(|r| binom_u128(total * per_op, r)).sum();
    if count > BALL_CAP {
        return Err(SlicedError::CapExceeded {
            count,
            cap: BALL_CAP,
        });
    }
    Ok(())
}

/// Every word reachable from `w` by flipping at most `k` bits.
pub fn hamming_ball_word(w: &Word, k: usize) -> Result<BTreeSet<Word>> {
    check_ball_size(w, k, 1)?;
    let positions: Vec<(usize, usize)> = w
        .strings()
        .iter()
        .enumerate()
        .flat_map(|(i, s)| (0..s.len()).map(move |p| (i, p)))
        .collect();
    let mut out = BTreeSet::new();
    let mut strings = w.strings().to_vec();
    flip_rec(&positions, 0, k, &mut strings, &mut out);
    Ok(out)
}

fn flip_rec(
    positions: &[(usize, usize)],
    start: usize,
    left: usize,
    strings: &mut Vec<BitString>,
    out: &mut BTreeSet<Word>,
) {
    out.insert(Word::new(strings.iter().cloned()));
    if left == 0 {
        return;
    }
    for idx in start..positions.len() {
        let (i, p) = positions[idx];
        strings[i].flip(p);
        flip_rec(positions, idx + 1, left - 1, strings, out);
        strings[i].flip(p);
    }
}

/// Every word reachable from `w` by deleting at most `k` bits.
pub fn deletion_ball_word(w: &Word, k: usize) -> Result<BTreeSet<Word>> {
    check_ball_size(w, k, 1)?;
    let mut out = BTreeSet::new();
    let mut strings = w.strings().to_vec();
    delete_rec(k, &mut strings, &mut out);
    Ok(out)
}

fn delete_rec(left: usize, strings: &mut Vec<BitString>, out: &mut BTreeSet<Word>) {
    out.insert(Word::new(strings.iter().cloned()));
    if left == 0 {
        return;
    }
    for i in 0..strings.len() {
        for p in 0..strings[i].len() {
            let bit = strings[i].remove(p);
            delete_rec(left - 1, strings, out);
            strings[i].insert(p, bit);
        }
    }
}

/// All subsequences of `c` of length at least `|c| - k`.
pub fn deletion_ball_string(c: &BitString, k: usize) -> Result<BTreeSet<BitString>> {
    if k > c.len() {
        return Err(SlicedError::OutOfRange(format!(
            "{k} deletions from a string of length {}",
            c.len()
        )));
    }
    if binom_u128(c.len() as u128, k as u128) > BALL_CAP {
        return Err(SlicedError::CapExceeded {
            count: binom_u128(c.len() as u128, k as u128),
            cap: BALL_CAP,
        });
    }
    let mut level: BTreeSet<BitString> = BTreeSet::from([c.clone()]);
    let mut out = level.clone();
    for _ in 0..k {
        let mut next = BTreeSet::new();
        for s in &level {
            for p in 0..s.len() {
                let mut t = s.clone();
                t.remove(p);
                next.insert(t);
            }
        }
        out.extend(next.iter().cloned());
        level = next;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    fn word(ss: &[&str]) -> Word {
        ss.iter().map(|s| bs(s)).collect()
    }

    #[test]
    fn word_merges_duplicates_and_sorts_descending() {
        let w = word(&["001", "101", "001"]);
        assert_eq!(w.len(), 2);
        assert_eq!(w.strings(), &[bs("101"), bs("001")]);
        assert_eq!(w, word(&["101", "001"]));
    }

    #[test]
    fn indicator_examples() {
        assert_eq!(
            IndicatorVector::new(2, &[bs("11")]).unwrap().to_bits(),
            bs("0001")
        );
        assert_eq!(
            IndicatorVector::new(2, &[bs("00"), bs("11")])
                .unwrap()
                .to_bits(),
            bs("1001")
        );
        assert_eq!(IndicatorVector::new(2, &[]).unwrap().to_bits(), bs("0000"));
        let v = IndicatorVector::new(3, &[bs("101"), bs("011")]).unwrap();
        assert_eq!(v.weight(), 2);
        assert_eq!(v.to_set(), vec![bs("101"), bs("011")]);
    }

    #[test]
    fn example_one_balls() {
        let w = word(&["001", "101"]);
        let h: BTreeSet<Word> = [
            &["001", "101"][..],
            &["101"],
            &["011", "101"],
            &["000", "101"],
            &["001"],
            &["001", "111"],
            &["001", "100"],
        ]
        .iter()
        .map(|ss| word(ss))
        .collect();
        assert_eq!(hamming_ball_word(&w, 1).unwrap(), h);
        let d: BTreeSet<Word> = [
            &["001", "101"][..],
            &["01", "101"],
            &["00", "101"],
            &["001", "01"],
            &["001", "11"],
            &["001", "10"],
        ]
        .iter()
        .map(|ss| word(ss))
        .collect();
        assert_eq!(deletion_ball_word(&w, 1).unwrap(), d);
    }

    #[test]
    fn small_balls() {
        let w = word(&["0"]);
        assert_eq!(
            hamming_ball_word(&w, 1).unwrap(),
            BTreeSet::from([word(&["0"]), word(&["1"])])
        );
        assert_eq!(
            hamming_ball_word(&w, 0).unwrap(),
            BTreeSet::from([w.clone()])
        );
        let w = word(&["01"]);
        assert_eq!(
            deletion_ball_word(&w, 1).unwrap(),
            BTreeSet::from([word(&["01"]), word(&["1"]), word(&["0"])])
        );
        assert_eq!(deletion_ball_word(&w, 0).unwrap(), BTreeSet::from([w]));
    }

    #[test]
    fn string_ball_examples() {
        assert_eq!(
            deletion_ball_string(&bs("01"), 1).unwrap(),
            BTreeSet::from([bs("01"), bs("0"), bs("1")])
        );
        assert_eq!(
            deletion_ball_string(&bs("00"), 1).unwrap(),
            BTreeSet::from([bs("00"), bs("0")])
        );
        assert_eq!(
            deletion_ball_string(&bs("0110"), 0).unwrap(),
            BTreeSet::from([bs("0110")])
        );
        assert!(deletion_ball_string(&bs("0"), 2).is_err());
    }

    #[test]
    fn string_ball_matches_subsequence_characterization() {
        let c = bs("0110100");
        for k in 0..=3 {
            let ball = deletion_ball_string(&c, k).unwrap();
            for len in 0..=c.len() {
                for v in 0..(1u64 << len) {
                    let s = BitString::from_u64(v, len).unwrap();
                    let expected = s.is_subsequence_of(&c) && len + k >= c.len();
                    assert_eq!(ball.contains(&s), expected, "{s} k={k}");
                }
            }
        }
    }

    #[test]
    fn ball_cap_is_enforced() {
        let w: Word = (0..8u64)
            .map(|i| BitString::from_u64(i << 40, 64).unwrap())
            .collect();
        assert!(matches!(
            hamming_ball_word(&w, 4),
            Err(SlicedError::CapExceeded { .. })
        ));
    }
}
