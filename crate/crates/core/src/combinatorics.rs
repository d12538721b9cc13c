//! Exact binomials, colexicographic combination (un)ranking, and the
//! gap-separated integer map used by both robust-indexing variants.
//!
//! Ranks are 1-based. Rank 1 is the colex-smallest set `{1, ..., m}`; a
//! 0-based set `e_1 < ... < e_m` has rank `1 + sum_j C(e_j, j)`.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Result, SlicedError};

pub fn binomial(n: &BigUint, m: u64) -> BigUint {
    let m_big = BigUint::from(m);
    if &m_big > n {
        return BigUint::zero();
    }
    let m = if &m_big * 2u8 > *n {
        (n - &m_big).try_into().unwrap_or(u64::MAX)
    } else {
        m
    };
    let mut r = BigUint::one();
    for i in 0..m {
        r = r * (n - i) / (i + 1);
    }
    r
}

pub fn binomial_u64(n: u64, m: u64) -> BigUint {
    binomial(&BigUint::from(n), m)
}

/// `C(2^l_prime - M*G + M - 1, M - 1)`, or zero when `2^l_prime <= M*G`.
pub fn gap_domain_size(l_prime: usize, m: usize, gap: &BigUint) -> BigUint {
    match gap_universe(l_prime, m, gap) {
        Some(n) => binomial(&n, (m - 1) as u64),
        None => BigUint::zero(),
    }
}

fn gap_universe(l_prime: usize, m: usize, gap: &BigUint) -> Option<BigUint> {
    let total = BigUint::one() << l_prime;
    let used = gap * m;
    (total > used).then(|| total - used + (m - 1))
}

/// The set of rank `d` among `m`-subsets of `[n]`, ascending, 1-based.
pub fn unrank_combination(d: &BigUint, n: &BigUint, m: usize) -> Result<Vec<BigUint>> {
    let size = binomial(n, m as u64);
    if d.is_zero() || d > &size {
        return Err(SlicedError::OutOfRange(format!(
            "rank {d} not in [1, {size}]"
        )));
    }
    let mut rest = d - 1u8;
    let mut out = vec![BigUint::zero(); m];
    let mut hi = n.clone();
    for j in (1..=m).rev() {
        // Largest e < hi with C(e, j) <= rest.
        let (mut lo, mut up) = (BigUint::from(j - 1), hi.clone());
        while &lo + 1u8 < up {
            let mid = (&lo + &up) >> 1;
            if binomial(&mid, j as u64) <= rest {
                lo = mid;
            } else {
                up = mid;
            }
        }
        rest -= binomial(&lo, j as u64);
        out[j - 1] = &lo + 1u8;
        hi = lo;
    }
    debug_assert!(rest.is_zero());
    Ok(out)
}

/// Inverse of [`unrank_combination`]. `set` may be given in any order.
pub fn rank_combination(set: &[BigUint], n: &BigUint, m: usize) -> Result<BigUint> {
    if set.len() != m {
        return Err(SlicedError::InvalidInput(format!(
            "expected {m} elements, got {}",
            set.len()
        )));
    }
    let mut sorted = set.to_vec();
    sorted.sort();
    let mut rank = BigUint::one();
    for (j, e) in sorted.iter().enumerate() {
        if e.is_zero() || e > n {
            return Err(SlicedError::InvalidInput(format!(
                "element {e} not in [1, {n}]"
            )));
        }
        if j > 0 && sorted[j - 1] == *e {
            return Err(SlicedError::InvalidInput(format!("repeated element {e}")));
        }
        rank += binomial(&(e - 1u8), (j + 1) as u64);
    }
    Ok(rank)
}

/// Smallest `t` with `2^t >= x`; zero for `x <= 1`.
pub fn ceil_log2(x: &BigUint) -> usize {
    if *x <= BigUint::one() {
        return 0;
    }
    (x - 1u8).bits() as usize
}

/// `log2(x)` to double precision, from the leading 64 bits of `x`.
pub fn log2_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 64 {
        let v: u64 = x.try_into().expect("fits");
        return (v as f64).log2();
    }
    let shift = bits - 64;
    let top: u64 = (x >> shift).try_into().expect("fits");
    (top as f64).log2() + shift as f64
}

/// Integers `q_1 > ... > q_M` with `q_1 = 2^l_prime`, consecutive gaps at
/// least `gap` and `q_M >= gap`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapSequence {
    pub values: Vec<BigUint>,
    pub gap: BigUint,
}

impl GapSequence {
    pub fn validate(&self, l_prime: usize) -> Result<()> {
        let bad = |msg: String| Err(SlicedError::InvalidInput(format!("gap sequence: {msg}")));
        match self.values.first() {
            None => return bad("empty".into()),
            Some(q1) if *q1 != BigUint::one() << l_prime => {
                return bad(format!("q_1 = {q1} is not 2^{l_prime}"))
            }
            _ => {}
        }
        for (i, w) in self.values.windows(2).enumerate() {
            if w[0] < &w[1] + &self.gap {
                return bad(format!("q_{} - q_{} < {}", i + 1, i + 2, self.gap));
            }
        }
        if self.values.last().unwrap() < &self.gap {
            return bad(format!("q_M < {}", self.gap));
        }
        Ok(())
    }
}

/// `d -> (q_1, ..., q_M)`, with `q_i = q'_i + (M - i + 1)(G - 1)` for the
/// descending elements `q'_i` of the rank-`d` set.
pub fn gap_unrank(d: &BigUint, l_prime: usize, m: usize, gap: &BigUint) -> Result<GapSequence> {
    if m == 0 || gap.is_zero() {
        return Err(SlicedError::InvalidInput("need M >= 1 and G >= 1".into()));
    }
    let n = gap_universe(l_prime, m, gap)
        .ok_or_else(|| SlicedError::Infeasible(format!("2^{l_prime} <= M*G = {}", gap * m)))?;
    let mut values = vec![BigUint::one() << l_prime];
    if m > 1 {
        let set = unrank_combination(d, &n, m - 1)?;
        let g1 = gap - 1u8;
        for (idx, e) in set.iter().rev().enumerate() {
            let i = idx + 2;
            values.push(e + &g1 * (m - i + 1));
        }
    } else if !d.is_one() {
        return Err(SlicedError::OutOfRange(format!("rank {d} not in [1, 1]")));
    }
    Ok(GapSequence {
        values,
        gap: gap.clone(),
    })
}

/// Inverse of [`gap_unrank`].
pub fn gap_rank(q: &GapSequence, l_prime: usize, m: usize) -> Result<BigUint> {
    if q.values.len() != m {
        return Err(SlicedError::InvalidInput(format!(
            "expected {m} values, got {}",
            q.values.len()
        )));
    }
    q.validate(l_prime)?;
    let n = gap_universe(l_prime, m, &q.gap)
        .ok_or_else(|| SlicedError::Infeasible(format!("2^{l_prime} <= M*G = {}", &q.gap * m)))?;
    if m == 1 {
        return Ok(BigUint::one());
    }
    let g1 = &q.gap - 1u8;
    let set: Vec<BigUint> = q.values[1..]
        .iter()
        .enumerate()
        .map(|(idx, v)| v - &g1 * (m - (idx + 2) + 1))
        .collect();
    rank_combination(&set, &n, m - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn b(v: u64) -> BigUint {
        BigUint::from(v)
    }

    /// All m-subsets of [n] in colex order, by brute force.
    fn colex_subsets(n: u64, m: usize) -> Vec<Vec<u64>> {
        let mut all: Vec<Vec<u64>> = (0u64..1 << n)
            .filter(|mask| mask.count_ones() as usize == m)
            .map(|mask| {
                (0..n)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| i + 1)
                    .collect()
            })
            .collect();
        all.sort_by(|x, y| x.iter().rev().cmp(y.iter().rev()));
        all
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial_u64(5, 2), b(10));
        assert_eq!(binomial_u64(7, 0), b(1));
        assert_eq!(binomial_u64(12, 2), b(66));
        assert_eq!(binomial_u64(3, 5), b(0));
        assert_eq!(binomial_u64(60, 30), b(118264581564861424));
    }

    #[test]
    fn unrank_examples() {
        assert_eq!(
            unrank_combination(&b(1), &b(5), 2).unwrap(),
            vec![b(1), b(2)]
        );
        assert_eq!(
            unrank_combination(&b(10), &b(5), 2).unwrap(),
            vec![b(4), b(5)]
        );
        assert!(unrank_combination(&b(0), &b(5), 2).is_err());
        assert!(unrank_combination(&b(11), &b(5), 2).is_err());
        assert_eq!(rank_combination(&[b(1), b(2)], &b(5), 2).unwrap(), b(1));
        assert_eq!(rank_combination(&[b(5), b(4)], &b(5), 2).unwrap(), b(10));
        assert!(rank_combination(&[b(4), b(4)], &b(5), 2).is_err());
        assert!(rank_combination(&[b(6), b(4)], &b(5), 2).is_err());
    }

    #[test]
    fn unrank_follows_brute_force_colex_order() {
        for n in 1..=8u64 {
            for m in 0..=n as usize {
                for (idx, set) in colex_subsets(n, m).iter().enumerate() {
                    let d = b(idx as u64 + 1);
                    let got = unrank_combination(&d, &b(n), m).unwrap();
                    assert_eq!(got, set.iter().map(|&x| b(x)).collect::<Vec<_>>());
                    assert_eq!(rank_combination(&got, &b(n), m).unwrap(), d);
                }
            }
        }
    }

    #[test]
    fn gap_examples() {
        let q = gap_unrank(&b(5), 3, 2, &b(1)).unwrap();
        assert_eq!(q.values, vec![b(8), b(5)]);
        assert_eq!(gap_rank(&q, 3, 2).unwrap(), b(5));
        let q = gap_unrank(&b(1), 7, 2, &b(29)).unwrap();
        assert_eq!(q.values, vec![b(128), b(29)]);
        assert_eq!(gap_rank(&q, 7, 2).unwrap(), b(1));
        assert_eq!(gap_domain_size(7, 2, &b(29)), b(71));
        for d in 1..=71 {
            let q = gap_unrank(&b(d), 7, 2, &b(29)).unwrap();
            assert_eq!(gap_rank(&q, 7, 2).unwrap(), b(d));
        }
        assert!(gap_unrank(&b(72), 7, 2, &b(29)).is_err());
        assert!(matches!(
            gap_unrank(&b(1), 6, 2, &b(32)),
            Err(SlicedError::Infeasible(_))
        ));
    }

    #[test]
    fn gap_unrank_is_valid_and_bijective_exhaustively() {
        for l_prime in 1..=8usize {
            for m in 1..=4usize {
                for g in [1u64, 2, 3, 7, 19] {
                    let gap = b(g);
                    let size = gap_domain_size(l_prime, m, &gap);
                    let size: u64 = size.try_into().unwrap();
                    if size > 3000 {
                        continue;
                    }
                    let mut seen = std::collections::HashSet::new();
                    for d in 1..=size {
                        let q = gap_unrank(&b(d), l_prime, m, &gap).unwrap();
                        q.validate(l_prime).unwrap();
                        assert_eq!(gap_rank(&q, l_prime, m).unwrap(), b(d));
                        assert!(seen.insert(q.values));
                    }
                }
            }
        }
    }

    #[test]
    fn log_helpers() {
        assert_eq!(ceil_log2(&b(0)), 0);
        assert_eq!(ceil_log2(&b(1)), 0);
        assert_eq!(ceil_log2(&b(2)), 1);
        assert_eq!(ceil_log2(&b(64)), 6);
        assert_eq!(ceil_log2(&b(65)), 7);
        assert_eq!(ceil_log2(&b(288)), 9);
        assert_eq!(log2_big(&b(1024)), 10.0);
        let big = BigUint::from(3u8) << 200;
        assert!((log2_big(&big) - (200.0 + 3f64.log2())).abs() < 1e-12);
    }

    #[test]
    fn gap_rank_rejects_bad_sequences() {
        let bad = GapSequence {
            values: vec![b(128), b(120)],
            gap: b(29),
        };
        assert!(gap_rank(&bad, 7, 2).is_err());
        let bad = GapSequence {
            values: vec![b(127), b(29)],
            gap: b(29),
        };
        assert!(gap_rank(&bad, 7, 2).is_err());
    }

    proptest! {
        #[test]
        fn rank_unrank_round_trip_large(n in 50u64..1_000_000, m in 1usize..6, seed in any::<u64>()) {
            let size = binomial_u64(n, m as u64);
            let d = BigUint::from(seed) % &size + 1u8;
            let set = unrank_combination(&d, &b(n), m).unwrap();
            prop_assert!(set.windows(2).all(|w| w[0] < w[1]));
            prop_assert_eq!(rank_combination(&set, &b(n), m).unwrap(), d);
        }
    }
}
