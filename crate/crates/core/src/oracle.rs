//! Brute-force reference implementations. Each enumerates directly from a
//! definition and shares no code with the fast paths it is compared against.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::bits::BitString;
use crate::deletion_index::count_pair_deletions;

fn all_strings(len: usize) -> impl Iterator<Item = BitString> {
    (0..1u64 << len).map(move |v| BitString::from_u64(v, len).expect("fits"))
}

fn extensions(a: &BitString, l_prime: usize) -> impl Iterator<Item = BitString> + '_ {
    all_strings(l_prime - a.len()).map(move |tail| BitString::concat([a, &tail]))
}

/// `N_H(a, A)` by enumerating every length-`L'` extension of `a`.
pub fn prefix_hamming(a: &BitString, set: &[BitString], k: usize) -> BigUint {
    let mut n = 0u64;
    for c in set {
        for ext in extensions(a, c.len()) {
            let d = ext
                .as_slice()
                .iter()
                .zip(c.as_slice())
                .filter(|(x, y)| x != y)
                .count();
            n += (d <= 2 * k) as u64;
        }
    }
    BigUint::from(n)
}

/// `sum_{c in A} |{c' < a : d_H(c', c) <= 2K}|`, the conflict term of the rank identity
/// without the `q_i - 1` term.
pub fn smaller_conflicts(a: &BitString, set: &[BitString], k: usize) -> BigUint {
    let mut n = 0u64;
    for c in set {
        for other in all_strings(a.len()).take_while(|s| s < a) {
            let d = other
                .as_slice()
                .iter()
                .zip(c.as_slice())
                .filter(|(x, y)| x != y)
                .count();
            n += (d <= 2 * k) as u64;
        }
    }
    BigUint::from(n)
}

/// `N_D(a, A)` by enumerating every extension and every pair of deletion sets.
pub fn prefix_deletion(a: &BitString, set: &[BitString], k: usize) -> BigUint {
    let mut n = BigUint::zero();
    for c in set {
        for ext in extensions(a, c.len()) {
            n += count_pair_deletions(&ext, c, k, k).expect("oracle scale");
        }
    }
    n
}
