//! Robust indexing under the Hamming metric: `Q`, the prefix conflict count
//! `N_H`, greedy codebook generation and its inverse, and `F^H_S`.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::bits::{self, BitString};
use crate::combinatorics::{binomial_u64, gap_domain_size, gap_rank, gap_unrank, GapSequence};
use crate::error::{DecodeFailure, Result, SlicedError};
use crate::robust_index::{greedy, rank, Codebook, Metric, PrefixCounter};

/// `Q = sum_{i=0}^{2K} C(L', i)`, the size of a radius-2K Hamming ball.
pub fn hamming_ball_size(l_prime: usize, k: usize) -> BigUint {
    (0..=2 * k as u64)
        .map(|i| binomial_u64(l_prime as u64, i))
        .sum()
}

/// `N_H(a, A)`: pairs `(c, c')` with `c` in `A`, `c'` extending `a` to length
/// `L'`, and `d_H(c, c') <= 2K`.
pub fn count_prefix_hamming(a: &BitString, set: &[BitString], k: usize) -> Result<BigUint> {
    let mut total = BigUint::zero();
    for c in set {
        if a.len() > c.len() {
            return Err(SlicedError::LengthMismatch {
                left: a.len(),
                right: c.len(),
            });
        }
        total += count_one(a.as_slice(), c.as_slice(), k);
    }
    Ok(total)
}

fn count_one(a: &[u8], c: &[u8], k: usize) -> BigUint {
    let d = bits::hamming(a, &c[..a.len()]);
    if d > 2 * k {
        return BigUint::zero();
    }
    let free = (c.len() - a.len()) as u64;
    (0..=(2 * k - d) as u64)
        .map(|i| binomial_u64(free, i))
        .sum()
}

struct HammingCounter {
    k: usize,
}

impl PrefixCounter for HammingCounter {
    fn count(&mut self, prefix: &[u8], prior: &[BitString]) -> BigUint {
        prior
            .iter()
            .map(|c| count_one(prefix, c.as_slice(), self.k))
            .sum()
    }
}

/// Greedy Hamming codebook from a gap sequence with gap `Q`.
pub fn greedy_codebook_hamming(
    q: &GapSequence,
    l_prime: usize,
    m: usize,
    k: usize,
) -> Result<Codebook> {
    let big_q = hamming_ball_size(l_prime, k);
    if q.gap != big_q {
        return Err(SlicedError::InvalidInput(format!(
            "gap {} differs from Q = {big_q}",
            q.gap
        )));
    }
    if q.values.len() != m {
        return Err(SlicedError::InvalidInput(format!(
            "expected {m} values, got {}",
            q.values.len()
        )));
    }
    q.validate(l_prime)?;
    let entries = greedy(q, l_prime, &mut HammingCounter { k })?;
    Ok(Codebook {
        entries,
        l_prime,
        k,
        metric: Metric::Hamming,
    })
}

/// Inverse of [`greedy_codebook_hamming`].
pub fn codebook_rank_hamming(book: &Codebook) -> Result<GapSequence> {
    if book.entries.windows(2).any(|w| w[0] <= w[1]) {
        return Err(SlicedError::decode(DecodeFailure::Codebook(
            "entries are not strictly descending".into(),
        )));
    }
    let values = rank(&book.entries, &mut HammingCounter { k: book.k });
    Ok(GapSequence {
        values,
        gap: hamming_ball_size(book.l_prime, book.k),
    })
}

/// Number of valid inputs to [`fhs`].
pub fn fhs_domain(l_prime: usize, m: usize, k: usize) -> BigUint {
    gap_domain_size(l_prime, m, &hamming_ball_size(l_prime, k))
}

/// `F^H_S(d)`: an `M`-entry Hamming codebook for `d` in `[1, fhs_domain]`.
pub fn fhs(d: &BigUint, l_prime: usize, m: usize, k: usize) -> Result<Codebook> {
    let q = gap_unrank(d, l_prime, m, &hamming_ball_size(l_prime, k))?;
    greedy_codebook_hamming(&q, l_prime, m, k)
}

/// Inverse of [`fhs`]. Rejects codebooks that `fhs` cannot produce.
pub fn fhs_inv(book: &Codebook) -> Result<BigUint> {
    if book.metric != Metric::Hamming {
        return Err(SlicedError::InvalidInput(
            "expected a Hamming codebook".into(),
        ));
    }
    book.validate()?;
    let q = codebook_rank_hamming(book)?;
    let m = book.entries.len();
    let d = gap_rank(&q, book.l_prime, m)
        .map_err(|e| SlicedError::decode(DecodeFailure::Codebook(e.to_string())))?;
    if fhs(&d, book.l_prime, m, book.k)? != *book {
        return Err(SlicedError::decode(DecodeFailure::Codebook(
            "codebook is not in the image of F^H_S".into(),
        )));
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use proptest::prelude::*;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    fn b(v: u64) -> BigUint {
        BigUint::from(v)
    }

    fn book(entries: &[&str], k: usize) -> Codebook {
        let entries: Vec<BitString> = entries.iter().map(|s| bs(s)).collect();
        Codebook {
            l_prime: entries[0].len(),
            entries,
            k,
            metric: Metric::Hamming,
        }
    }

    #[test]
    fn ball_size_examples() {
        assert_eq!(hamming_ball_size(3, 1), b(7));
        assert_eq!(hamming_ball_size(12, 1), b(79));
        assert_eq!(hamming_ball_size(9, 0), b(1));
        assert_eq!(hamming_ball_size(7, 1), b(29));
    }

    #[test]
    fn prefix_count_examples() {
        let a = [bs("111")];
        assert_eq!(
            count_prefix_hamming(&BitString::empty(), &a, 1).unwrap(),
            b(7)
        );
        assert_eq!(count_prefix_hamming(&bs("0"), &a, 1).unwrap(), b(3));
        assert_eq!(
            count_prefix_hamming(&bs("0"), &a, 1).unwrap(),
            oracle::prefix_hamming(&bs("0"), &a, 1)
        );
        assert_eq!(count_prefix_hamming(&bs("111"), &a, 0).unwrap(), b(1));
        assert_eq!(count_prefix_hamming(&bs("000"), &a, 1).unwrap(), b(0));
    }

    #[test]
    fn greedy_examples_at_k0() {
        let q = GapSequence {
            values: vec![b(8), b(7)],
            gap: b(1),
        };
        let out = greedy_codebook_hamming(&q, 3, 2, 0).unwrap();
        assert_eq!(out, book(&["111", "110"], 0));
        assert_eq!(codebook_rank_hamming(&out).unwrap(), q);
        let q = GapSequence {
            values: vec![b(8), b(1)],
            gap: b(1),
        };
        let out = greedy_codebook_hamming(&q, 3, 2, 0).unwrap();
        assert_eq!(out, book(&["111", "000"], 0));
        assert_eq!(codebook_rank_hamming(&out).unwrap(), q);
    }

    #[test]
    fn fhs_first_codebook_golden() {
        // Oracle: with prior {1111111}, a_2 is the 29th string (in
        // increasing order) outside the radius-2 ball, i.e. of weight <= 4.
        let out = fhs(&b(1), 7, 2, 1).unwrap();
        let mut outside: Vec<BitString> = (0..128u64)
            .map(|v| BitString::from_u64(v, 7).unwrap())
            .filter(|s| s.weight() <= 4)
            .collect();
        outside.sort();
        assert_eq!(out.entries[0], BitString::ones(7));
        assert_eq!(out.entries[1], outside[28]);
        assert_eq!(out.entries[1], bs("0011100"));
    }

    #[test]
    fn fhs_is_a_bijection_at_l7_m2_k1() {
        assert_eq!(fhs_domain(7, 2, 1), b(71));
        let mut seen = std::collections::HashSet::new();
        for d in 1..=71u64 {
            let out = fhs(&b(d), 7, 2, 1).unwrap();
            out.validate().unwrap();
            assert_eq!(fhs_inv(&out).unwrap(), b(d));
            assert!(seen.insert(out.entries));
        }
        assert!(fhs(&b(72), 7, 2, 1).is_err());
    }

    #[test]
    fn rank_identities_hold_on_sampled_ranks() {
        for (l_prime, m, k) in [
            (5usize, 2usize, 0usize),
            (6, 3, 0),
            (7, 2, 1),
            (8, 3, 1),
            (8, 2, 1),
        ] {
            let size: u64 = fhs_domain(l_prime, m, k).try_into().unwrap();
            let step = (size / 200).max(1);
            for d in (1..=size).step_by(step as usize) {
                let q = gap_unrank(&b(d), l_prime, m, &hamming_ball_size(l_prime, k)).unwrap();
                let out = greedy_codebook_hamming(&q, l_prime, m, k).unwrap();
                out.validate().unwrap();
                for i in 0..m {
                    let prior = &out.entries[..i];
                    let ai = &out.entries[i];
                    let mut expected = q.values[i].clone() - 1u8;
                    for l in 0..l_prime {
                        if ai.get(l) == 1 {
                            let mut p = ai.prefix(l);
                            p.push(0);
                            expected += count_prefix_hamming(&p, prior, k).unwrap();
                        }
                    }
                    assert_eq!(ai.decimal(), expected);
                    assert_eq!(
                        ai.decimal(),
                        q.values[i].clone() - 1u8 + oracle::smaller_conflicts(ai, prior, k)
                    );
                }
            }
        }
    }

    #[test]
    fn rejects_foreign_codebooks() {
        // Valid S^H member that the greedy map never emits.
        let foreign = book(&["1111111", "0000000"], 1);
        foreign.validate().unwrap();
        assert!(fhs_inv(&foreign).is_err());
        assert!(fhs_inv(&book(&["1111111", "1111100"], 1)).is_err());
        assert!(fhs_inv(&book(&["0011100", "1111111"], 1)).is_err());
    }

    #[test]
    fn closed_form_matches_enumeration() {
        for l_prime in 1..=7usize {
            for k in 0..=2usize {
                for len in 0..=l_prime {
                    for av in 0..1u64 << len {
                        let a = BitString::from_u64(av, len).unwrap();
                        for cv in 0..1u64 << l_prime {
                            let c = [BitString::from_u64(cv, l_prime).unwrap()];
                            assert_eq!(
                                count_prefix_hamming(&a, &c, k).unwrap(),
                                oracle::prefix_hamming(&a, &c, k)
                            );
                        }
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn split_identity(l_prime in 2usize..14, k in 0usize..3, seed in any::<u64>(), set_size in 0usize..5) {
            let mut x = seed;
            let mut next = || { x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407); x >> 11 };
            let len = (next() as usize) % l_prime;
            let a = BitString::from_u64(next() % (1 << len), len).unwrap();
            let set: Vec<BitString> = (0..set_size).map(|_| BitString::from_u64(next() % (1 << l_prime), l_prime).unwrap()).collect();
            let mut a0 = a.clone();
            a0.push(0);
            let mut a1 = a.clone();
            a1.push(1);
            let whole = count_prefix_hamming(&a, &set, k).unwrap();
            prop_assert_eq!(whole, count_prefix_hamming(&a0, &set, k).unwrap() + count_prefix_hamming(&a1, &set, k).unwrap());
        }
    }
}
