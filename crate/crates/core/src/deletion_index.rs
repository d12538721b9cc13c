//! Robust indexing under the deletion metric: `P`, the pair-deletion count
//! `N`, the dynamic program for `N_D`, greedy codebook generation and its
//! inverse, and `F^D_S`.
//!
//! The table `n(k1, k2, r1, r2)` counts triples `(c', D1, D2)` where `c'`
//! has length `L' - l + k1` and starts with the last `k1` bits of the prefix
//! `a`, `D1` and `D2` delete at most `r1` bits from `c'` and at most `r2`
//! bits from the last `k2` bits of `c`, and both deletions leave the same
//! string. `N_D(a, c) = n(l, L', K, K)`.

use std::collections::HashMap;
use std::ops::{AddAssign, Mul};

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::bits::BitString;
use crate::combinatorics::{binomial_u64, gap_domain_size, gap_rank, gap_unrank, GapSequence};
use crate::error::{DecodeFailure, Result, SlicedError};
use crate::robust_index::{greedy, rank, Codebook, Metric, PrefixCounter};

/// `P = sum_{r=0}^{K} C(L', r)^2 2^r`.
pub fn deletion_interference_size(l_prime: usize, k: usize) -> BigUint {
    (0..=k as u64)
        .map(|r| {
            let c = binomial_u64(l_prime as u64, r);
            (&c * &c) << r
        })
        .sum()
}

/// Largest inputs accepted by [`count_pair_deletions`].
pub const PAIR_ORACLE_MAX_LEN: usize = 16;
pub const PAIR_ORACLE_MAX_R: usize = 3;

/// `N(c1, c2, r1, r2)`: pairs of deletion sets of sizes at most `r1`, `r2`
/// leaving equal strings, by enumeration. Oracle scale only.
pub fn count_pair_deletions(
    c1: &BitString,
    c2: &BitString,
    r1: usize,
    r2: usize,
) -> Result<BigUint> {
    if c1.len().max(c2.len()) > PAIR_ORACLE_MAX_LEN || r1.max(r2) > PAIR_ORACLE_MAX_R {
        return Err(SlicedError::Unsupported(format!(
            "pair-deletion enumeration is limited to length {PAIR_ORACLE_MAX_LEN} and radius {PAIR_ORACLE_MAX_R}"
        )));
    }
    let left = subsequence_multiplicities(c1.as_slice(), r1);
    let right = subsequence_multiplicities(c2.as_slice(), r2);
    let n: u64 = left
        .iter()
        .map(|(s, &x)| x * right.get(s).copied().unwrap_or(0))
        .sum();
    Ok(BigUint::from(n))
}

/// Each string left by deleting at most `r` positions, with the number of
/// position sets producing it.
fn subsequence_multiplicities(c: &[u8], r: usize) -> HashMap<Vec<u8>, u64> {
    let mut out = HashMap::new();
    for mask in 0u32..1 << c.len() {
        if mask.count_ones() as usize <= r {
            let s: Vec<u8> = (0..c.len())
                .filter(|i| mask >> i & 1 == 0)
                .map(|i| c[i])
                .collect();
            *out.entry(s).or_insert(0) += 1;
        }
    }
    out
}

/// Variants of the recursion, for differential testing.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DpOptions {
    /// Use the factor 2 on the "first bit of c' deleted" term. This
    /// overcounts, because that bit is fixed by the prefix.
    pub doubled_deleted_term: bool,
    /// Sum the `k2 < L' - l` base case up to `r1` instead of
    /// `min(r1, L' - l - (k2 - r2))`.
    pub displayed_upper_limit: bool,
}

trait Count: Clone + Zero + for<'a> AddAssign<&'a Self> + Mul<Output = Self> {
    fn from_u64(v: u64) -> Self;
    fn into_biguint(self) -> BigUint;
}

impl Count for u128 {
    fn from_u64(v: u64) -> Self {
        v as u128
    }
    fn into_biguint(self) -> BigUint {
        BigUint::from(self)
    }
}

impl Count for BigUint {
    fn from_u64(v: u64) -> Self {
        BigUint::from(v)
    }
    fn into_biguint(self) -> BigUint {
        self
    }
}

/// Dense `n(k1, k2, r1, r2)` for one prefix `a` and one string `c`.
#[derive(Clone, Debug)]
pub struct DpTable {
    prefix_len: usize,
    l_prime: usize,
    k: usize,
    data: Vec<BigUint>,
}

impl DpTable {
    /// `n(k1, k2, r1, r2)`; zero when a radius is negative.
    pub fn get(&self, k1: usize, k2: usize, r1: isize, r2: isize) -> BigUint {
        if r1 < 0 || r2 < 0 {
            return BigUint::zero();
        }
        self.data[index(self.l_prime, self.k, k1, k2, r1 as usize, r2 as usize)].clone()
    }

    /// `N_D(a, c) = n(l, L', K, K)`.
    pub fn n_d(&self) -> BigUint {
        self.get(
            self.prefix_len,
            self.l_prime,
            self.k as isize,
            self.k as isize,
        )
    }
}

fn index(l_prime: usize, k: usize, k1: usize, k2: usize, r1: usize, r2: usize) -> usize {
    ((k1 * (l_prime + 1) + k2) * (k + 1) + r1) * (k + 1) + r2
}

fn fill<T: Count>(a: &[u8], c: &[u8], k: usize, opts: DpOptions) -> Vec<T> {
    let (l, lp) = (a.len(), c.len());
    let free = lp - l;
    let size = (l + 1) * (lp + 1) * (k + 1) * (k + 1);
    let mut t = vec![T::zero(); size];
    let binom = pascal::<T>(lp);
    let mut pow2 = vec![T::from_u64(1)];
    for i in 0..lp {
        let mut next = pow2[i].clone();
        next += &pow2[i];
        pow2.push(next);
    }

    for k2 in 0..=lp {
        for r1 in 0..=k {
            for r2 in 0..=k {
                if free > k2 + r1 || k2 > free + r2 {
                    continue;
                }
                let mut acc = T::zero();
                if k2 >= free {
                    // |D2| = i; c' keeps k2 - i bits, so |D1| = free - (k2 - i).
                    let hi = r2.min(k2 + r1 - free);
                    for i in k2 - free..=hi {
                        if i > k2 {
                            break;
                        }
                        let d1 = free - (k2 - i);
                        acc += &(binom[k2][i].clone() * binom[free][d1].clone() * pow2[d1].clone());
                    }
                } else {
                    // |D1| = i; the suffix keeps free - i bits.
                    let hi = if opts.displayed_upper_limit {
                        r1
                    } else {
                        r1.min(free + r2 - k2)
                    };
                    for i in free - k2..=hi {
                        if i > free {
                            break;
                        }
                        let d2 = k2 + i - free;
                        acc += &(binom[k2][d2].clone() * binom[free][i].clone() * pow2[i].clone());
                    }
                }
                t[index(lp, k, 0, k2, r1, r2)] = acc;
            }
        }
    }

    for k1 in 1..=l {
        let bit = a[l - k1];
        for k2 in 0..=lp {
            for r1 in 0..=k {
                for r2 in 0..=k {
                    let mut acc = T::zero();
                    // First bit of c' kept: it matches the first kept bit c_j
                    // of the suffix; the `skipped` bits before it are deleted.
                    for (skipped, j) in (lp - k2..lp).enumerate() {
                        if skipped > r2 {
                            break;
                        }
                        if c[j] == bit {
                            acc += &t[index(lp, k, k1 - 1, lp - j - 1, r1, r2 - skipped)];
                        }
                    }
                    // First bit of c' deleted.
                    if r1 > 0 {
                        let prev = &t[index(lp, k, k1 - 1, k2, r1 - 1, r2)];
                        acc += prev;
                        if opts.doubled_deleted_term {
                            acc += prev;
                        }
                    }
                    t[index(lp, k, k1, k2, r1, r2)] = acc;
                }
            }
        }
    }
    t
}

fn pascal<T: Count>(n: usize) -> Vec<Vec<T>> {
    let mut rows: Vec<Vec<T>> = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let mut row = vec![T::zero(); i + 1];
        row[0] = T::from_u64(1);
        row[i] = T::from_u64(1);
        for j in 1..i {
            let mut v = rows[i - 1][j - 1].clone();
            v += &rows[i - 1][j];
            row[j] = v;
        }
        rows.push(row);
    }
    rows
}

/// Every table entry is at most `2^{L'} C(L', K)^2 <= 2^{3L'}`.
fn fits_u128(l_prime: usize) -> bool {
    3 * l_prime < 127
}

fn n_d_one(a: &[u8], c: &[u8], k: usize, opts: DpOptions) -> BigUint {
    let at = index(c.len(), k, a.len(), c.len(), k, k);
    if fits_u128(c.len()) {
        fill::<u128>(a, c, k, opts).swap_remove(at).into_biguint()
    } else {
        fill::<BigUint>(a, c, k, opts).swap_remove(at)
    }
}

/// The full table for prefix `a` and string `c`.
pub fn dp_prefix_count(a: &BitString, c: &BitString, k: usize) -> Result<DpTable> {
    dp_prefix_count_with(a, c, k, DpOptions::default())
}

pub fn dp_prefix_count_with(
    a: &BitString,
    c: &BitString,
    k: usize,
    opts: DpOptions,
) -> Result<DpTable> {
    if a.len() > c.len() {
        return Err(SlicedError::LengthMismatch {
            left: a.len(),
            right: c.len(),
        });
    }
    let data = if fits_u128(c.len()) {
        fill::<u128>(a.as_slice(), c.as_slice(), k, opts)
            .into_iter()
            .map(BigUint::from)
            .collect()
    } else {
        fill::<BigUint>(a.as_slice(), c.as_slice(), k, opts)
    };
    Ok(DpTable {
        prefix_len: a.len(),
        l_prime: c.len(),
        k,
        data,
    })
}

/// `N_D(a, A) = sum_{c in A} N_D(a, c)`.
pub fn count_prefix_deletion(a: &BitString, set: &[BitString], k: usize) -> Result<BigUint> {
    count_prefix_deletion_with(a, set, k, DpOptions::default())
}

pub fn count_prefix_deletion_with(
    a: &BitString,
    set: &[BitString],
    k: usize,
    opts: DpOptions,
) -> Result<BigUint> {
    let mut total = BigUint::zero();
    for c in set {
        if a.len() > c.len() {
            return Err(SlicedError::LengthMismatch {
                left: a.len(),
                right: c.len(),
            });
        }
        total += n_d_one(a.as_slice(), c.as_slice(), k, opts);
    }
    Ok(total)
}

struct DeletionCounter {
    k: usize,
}

impl PrefixCounter for DeletionCounter {
    fn count(&mut self, prefix: &[u8], prior: &[BitString]) -> BigUint {
        prior
            .iter()
            .map(|c| n_d_one(prefix, c.as_slice(), self.k, DpOptions::default()))
            .sum()
    }
}

fn check_gap(q: &GapSequence, l_prime: usize, m: usize, k: usize) -> Result<()> {
    let p = deletion_interference_size(l_prime, k);
    if q.gap != p {
        return Err(SlicedError::InvalidInput(format!(
            "gap {} differs from P = {p}",
            q.gap
        )));
    }
    if q.values.len() != m {
        return Err(SlicedError::InvalidInput(format!(
            "expected {m} values, got {}",
            q.values.len()
        )));
    }
    q.validate(l_prime)
}

/// Greedy deletion codebook from a gap sequence with gap `P`.
pub fn greedy_codebook_deletion(
    q: &GapSequence,
    l_prime: usize,
    m: usize,
    k: usize,
) -> Result<Codebook> {
    check_gap(q, l_prime, m, k)?;
    let entries = greedy(q, l_prime, &mut DeletionCounter { k })?;
    Ok(Codebook {
        entries,
        l_prime,
        k,
        metric: Metric::Deletion,
    })
}

/// Inverse of [`greedy_codebook_deletion`].
pub fn codebook_rank_deletion(book: &Codebook) -> Result<GapSequence> {
    if book.entries.windows(2).any(|w| w[0] <= w[1]) {
        return Err(SlicedError::decode(DecodeFailure::Codebook(
            "entries are not strictly descending".into(),
        )));
    }
    let values = rank(&book.entries, &mut DeletionCounter { k: book.k });
    Ok(GapSequence {
        values,
        gap: deletion_interference_size(book.l_prime, book.k),
    })
}

/// Number of valid inputs to [`fds`]; zero when `2^{L'} <= M P`.
pub fn fds_domain(l_prime: usize, m: usize, k: usize) -> BigUint {
    gap_domain_size(l_prime, m, &deletion_interference_size(l_prime, k))
}

/// `F^D_S(d)`: an `M`-entry deletion codebook for `d` in `[1, fds_domain]`.
pub fn fds(d: &BigUint, l_prime: usize, m: usize, k: usize) -> Result<Codebook> {
    let q = gap_unrank(d, l_prime, m, &deletion_interference_size(l_prime, k))?;
    greedy_codebook_deletion(&q, l_prime, m, k)
}

/// Inverse of [`fds`]. Rejects codebooks that `fds` cannot produce.
pub fn fds_inv(book: &Codebook) -> Result<BigUint> {
    if book.metric != Metric::Deletion {
        return Err(SlicedError::InvalidInput(
            "expected a deletion codebook".into(),
        ));
    }
    book.validate()?;
    let q = codebook_rank_deletion(book)?;
    let m = book.entries.len();
    let d = gap_rank(&q, book.l_prime, m)
        .map_err(|e| SlicedError::decode(DecodeFailure::Codebook(e.to_string())))?;
    if fds(&d, book.l_prime, m, book.k)? != *book {
        return Err(SlicedError::decode(DecodeFailure::Codebook(
            "codebook is not in the image of F^D_S".into(),
        )));
    }
    Ok(d)
}

/// `N_D` values as `u64`, for compact test output.
pub fn n_d_u64(a: &BitString, c: &BitString, k: usize) -> Option<u64> {
    n_d_one(a.as_slice(), c.as_slice(), k, DpOptions::default()).to_u64()
}
