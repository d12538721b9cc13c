//! Greedy codebook generation shared by the Hamming and deletion variants.
//!
//! Both variants walk the binary tree of prefixes. A node with prefix `p` of
//! length `l` has weight `2^{L'-l} - N(p, prior)`, where `N` counts conflicts
//! with the entries generated so far. Generation descends into the 0-child
//! when its weight is at least the remaining rank `q`, and otherwise subtracts
//! that weight and takes the 1-child; ranking inverts the walk.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed};

use crate::bits::{self, BitString};
use crate::combinatorics::GapSequence;
use crate::error::{DecodeFailure, Result, SlicedError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Metric {
    Hamming,
    Deletion,
}

/// Index strings `a_1 > ... > a_M` of length `L'`, `a_1` all ones, pairwise
/// at Hamming distance at least `2K+1` or with disjoint `K`-deletion balls.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Codebook {
    pub entries: Vec<BitString>,
    pub l_prime: usize,
    pub k: usize,
    pub metric: Metric,
}

impl Codebook {
    /// Checks the all-ones head, strict descending order and separation.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(SlicedError::decode(DecodeFailure::Codebook(msg)));
        if self.entries.is_empty() {
            return bad("empty".into());
        }
        if let Some(e) = self.entries.iter().find(|e| e.len() != self.l_prime) {
            return bad(format!(
                "entry {e} has length {} instead of {}",
                e.len(),
                self.l_prime
            ));
        }
        if self.entries[0] != BitString::ones(self.l_prime) {
            return bad("first entry is not all ones".into());
        }
        if self.entries.windows(2).any(|w| w[0] <= w[1]) {
            return bad("entries are not strictly descending".into());
        }
        for (i, a) in self.entries.iter().enumerate() {
            for b in &self.entries[i + 1..] {
                if !separated(self.metric, a.as_slice(), b.as_slice(), self.k) {
                    return bad(format!("{a} and {b} are too close"));
                }
            }
        }
        Ok(())
    }
}

pub(crate) fn separated(metric: Metric, a: &[u8], b: &[u8], k: usize) -> bool {
    match metric {
        Metric::Hamming => bits::hamming(a, b) > 2 * k,
        // D_K(a) and D_K(b) meet iff a and b share a subsequence of length L'-K.
        Metric::Deletion => bits::lcs(a, b) + k < a.len(),
    }
}

/// Conflict count `N(prefix, prior)`.
pub(crate) trait PrefixCounter {
    fn count(&mut self, prefix: &[u8], prior: &[BitString]) -> BigUint;
}

fn node_weight(l_prime: usize, len: usize, n: BigUint) -> BigInt {
    BigInt::from(BigUint::one() << (l_prime - len)) - BigInt::from(n)
}

/// Generates `a_1, ..., a_M` from a gap sequence.
pub(crate) fn greedy(
    q: &GapSequence,
    l_prime: usize,
    counter: &mut impl PrefixCounter,
) -> Result<Vec<BitString>> {
    let mut book: Vec<BitString> = Vec::with_capacity(q.values.len());
    for qi in &q.values {
        let mut rest = BigInt::from(qi.clone());
        let mut prefix = Vec::with_capacity(l_prime);
        for len in 1..=l_prime {
            prefix.push(0);
            let weight = node_weight(l_prime, len, counter.count(&prefix, &book));
            if weight < rest {
                rest -= weight;
                *prefix.last_mut().unwrap() = 1;
            }
            debug_assert!(rest.is_positive());
            debug_assert!(rest <= node_weight(l_prime, len, counter.count(&prefix, &book)));
        }
        if !rest.is_one() {
            return Err(SlicedError::Internal(format!(
                "greedy walk ended with rank {rest} instead of 1"
            )));
        }
        book.push(BitString::from_raw(prefix));
    }
    Ok(book)
}

/// Recovers `q_i = decimal(a_i) + 1 - sum over 1-bits of N(prefix || 0, prior)`.
pub(crate) fn rank(book: &[BitString], counter: &mut impl PrefixCounter) -> Vec<BigUint> {
    let mut out = Vec::with_capacity(book.len());
    for (i, a) in book.iter().enumerate() {
        let mut q = BigInt::from(a.decimal() + 1u8);
        let mut prefix = Vec::with_capacity(a.len());
        for &bit in a.as_slice() {
            if bit == 1 {
                prefix.push(0);
                q -= BigInt::from(counter.count(&prefix, &book[..i]));
                prefix.pop();
            }
            prefix.push(bit);
        }
        out.push(q.to_biguint().unwrap_or_default());
    }
    out
}
