//! Error injection on words: explicit patterns, exhaustive enumeration and
//! seeded random sampling.
//!
//! A pattern is an ordered list of operations. Each operation names a string
//! by its index in the canonical (descending) order of the input word, which
//! is fixed before any operation runs, and a position in that string's
//! current state. Insertions place the new bit before `position`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bits::BitString;
use crate::error::{Result, SlicedError};
use crate::word::Word;

/// Default limit on the number of patterns [`enumerate_patterns`] will emit.
pub const DEFAULT_PATTERN_CAP: u128 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OpKind {
    Substitute,
    Delete,
    Insert,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ErrorOp {
    pub kind: OpKind,
    pub string: usize,
    pub position: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bit: Option<u8>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ErrorPattern {
    pub ops: Vec<ErrorOp>,
}

impl ErrorPattern {
    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }
}

pub fn apply_pattern(w: &Word, e: &ErrorPattern) -> Result<Word> {
    let mut strings = w.strings().to_vec();
    for (n, op) in e.ops.iter().enumerate() {
        let s = strings.get_mut(op.string).ok_or_else(|| {
            SlicedError::OutOfRange(format!(
                "op {n}: no string {} in a word of {}",
                op.string,
                w.len()
            ))
        })?;
        let limit = if op.kind == OpKind::Insert {
            s.len() + 1
        } else {
            s.len()
        };
        if op.position >= limit {
            return Err(SlicedError::OutOfRange(format!(
                "op {n}: position {} in a string of length {}",
                op.position,
                s.len()
            )));
        }
        match op.kind {
            OpKind::Substitute => s.flip(op.position),
            OpKind::Delete => {
                s.remove(op.position);
            }
            OpKind::Insert => match op.bit {
                Some(b @ (0 | 1)) => s.insert(op.position, b),
                other => {
                    return Err(SlicedError::InvalidInput(format!(
                        "op {n}: insertion bit {other:?}"
                    )))
                }
            },
        }
    }
    Ok(Word::new(strings))
}

/// An operation in the coordinates of the unmodified word.
#[derive(Clone, Copy, Debug)]
struct FlatOp {
    kind: OpKind,
    string: usize,
    position: usize,
    bit: Option<u8>,
}

/// Every pattern of at most `k` operations of the given kinds, up to
/// reordering. Within a string, operations run right to left, so each acts on
/// the original bit at its position; only insertions may repeat.
pub fn enumerate_patterns(w: &Word, k: usize, kinds: &[OpKind], cap: u128) -> Result<PatternIter> {
    let mut flat = Vec::new();
    for (string, s) in w.strings().iter().enumerate() {
        for position in (0..=s.len()).rev() {
            if position < s.len() {
                for kind in [OpKind::Substitute, OpKind::Delete] {
                    if kinds.contains(&kind) {
                        flat.push(FlatOp {
                            kind,
                            string,
                            position,
                            bit: None,
                        });
                    }
                }
            }
            if kinds.contains(&OpKind::Insert) {
                for b in 0..2 {
                    flat.push(FlatOp {
                        kind: OpKind::Insert,
                        string,
                        position,
                        bit: Some(b),
                    });
                }
            }
        }
    }
    let count = pattern_count(&flat, k);
    if count > cap {
        return Err(SlicedError::CapExceeded { count, cap });
    }
    Ok(PatternIter {
        flat,
        k,
        idx: Vec::new(),
        fresh: true,
    })
}

fn pattern_count(flat: &[FlatOp], k: usize) -> u128 {
    let ins = flat.iter().filter(|f| f.kind == OpKind::Insert).count() as u128;
    let other = flat.len() as u128 - ins;
    let choose = |n: u128, r: u128| -> u128 {
        if r > n {
            return 0;
        }
        (0..r).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1))
    };
    let mut total = 0u128;
    for j in 0..=k as u128 {
        for a in 0..=j {
            let b = j - a;
            let multisets = if b == 0 { 1 } else { choose(ins + b - 1, b) };
            total = total.saturating_add(choose(other, a).saturating_mul(multisets));
        }
    }
    total
}

/// Streaming output of [`enumerate_patterns`].
pub struct PatternIter {
    flat: Vec<FlatOp>,
    k: usize,
    idx: Vec<usize>,
    fresh: bool,
}

impl PatternIter {
    fn next_index(&self, prev: usize) -> usize {
        if self.flat[prev].kind == OpKind::Insert {
            prev
        } else {
            prev + 1
        }
    }

    fn fill_from(&mut self, start: usize) -> bool {
        for t in start..self.idx.len() {
            let v = if t == 0 {
                0
            } else {
                self.next_index(self.idx[t - 1])
            };
            if v >= self.flat.len() {
                return false;
            }
            self.idx[t] = v;
        }
        true
    }

    fn advance(&mut self) -> bool {
        for pos in (0..self.idx.len()).rev() {
            let v = self.idx[pos] + 1;
            if v >= self.flat.len() {
                continue;
            }
            self.idx[pos] = v;
            if self.fill_from(pos + 1) {
                return true;
            }
        }
        while self.idx.len() < self.k {
            self.idx.push(0);
            if self.fill_from(0) {
                return true;
            }
        }
        false
    }

    fn current(&self) -> ErrorPattern {
        let ops = self
            .idx
            .iter()
            .map(|&i| {
                let f = self.flat[i];
                ErrorOp {
                    kind: f.kind,
                    string: f.string,
                    position: f.position,
                    bit: f.bit,
                }
            })
            .collect();
        ErrorPattern { ops }
    }
}

impl Iterator for PatternIter {
    type Item = ErrorPattern;

    fn next(&mut self) -> Option<ErrorPattern> {
        if self.fresh {
            self.fresh = false;
            return Some(ErrorPattern::default());
        }
        self.advance().then(|| self.current())
    }
}

fn random_op(rng: &mut ChaCha8Rng, kind: OpKind, lens: &mut [usize]) -> Option<ErrorOp> {
    let eligible: Vec<usize> = (0..lens.len())
        .filter(|&i| kind == OpKind::Insert || lens[i] > 0)
        .collect();
    let &string = eligible.choose(rng)?;
    let (position, bit) = match kind {
        OpKind::Insert => (rng.gen_range(0..=lens[string]), Some(rng.gen_range(0..2u8))),
        _ => (rng.gen_range(0..lens[string]), None),
    };
    match kind {
        OpKind::Insert => lens[string] += 1,
        OpKind::Delete => lens[string] -= 1,
        OpKind::Substitute => {}
    }
    Some(ErrorOp {
        kind,
        string,
        position,
        bit,
    })
}

/// A pattern with a uniform number of operations in `[0, k]`, each of a
/// uniformly chosen allowed kind, on a uniform string and position.
pub fn random_pattern(w: &Word, k: usize, kinds: &[OpKind], seed: u64) -> ErrorPattern {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if kinds.is_empty() || w.is_empty() {
        return ErrorPattern::default();
    }
    let count = rng.gen_range(0..=k);
    let mut lens: Vec<usize> = w.strings().iter().map(BitString::len).collect();
    let ops = (0..count)
        .filter_map(|_| {
            let kind = *kinds.choose(&mut rng).expect("nonempty");
            random_op(&mut rng, kind, &mut lens)
        })
        .collect();
    ErrorPattern { ops }
}

/// A pattern with exactly the requested number of each operation, in random
/// order.
pub fn random_pattern_exact(
    w: &Word,
    subs: usize,
    dels: usize,
    ins: usize,
    seed: u64,
) -> Result<ErrorPattern> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut kinds: Vec<OpKind> = [
        (OpKind::Substitute, subs),
        (OpKind::Delete, dels),
        (OpKind::Insert, ins),
    ]
    .into_iter()
    .flat_map(|(k, n)| std::iter::repeat_n(k, n))
    .collect();
    kinds.shuffle(&mut rng);
    let mut lens: Vec<usize> = w.strings().iter().map(BitString::len).collect();
    let ops = kinds
        .into_iter()
        .map(|kind| {
            random_op(&mut rng, kind, &mut lens).ok_or_else(|| {
                SlicedError::InvalidInput(format!("no string can take a {kind:?} operation"))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ErrorPattern { ops })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::{deletion_ball_word, hamming_ball_word};
    use std::collections::BTreeSet;

    fn word(strings: &[&str]) -> Word {
        strings
            .iter()
            .map(|s| s.parse::<BitString>().unwrap())
            .collect()
    }

    fn outcomes(w: &Word, k: usize, kinds: &[OpKind]) -> BTreeSet<Word> {
        enumerate_patterns(w, k, kinds, DEFAULT_PATTERN_CAP)
            .unwrap()
            .map(|e| apply_pattern(w, &e).unwrap())
            .collect()
    }

    /// Every word reachable by applying `k` single operations in sequence.
    fn brute_outcomes(w: &Word, k: usize, kinds: &[OpKind]) -> BTreeSet<Word> {
        let mut frontier: BTreeSet<Vec<BitString>> = [w.strings().to_vec()].into();
        let mut all: BTreeSet<Word> = [w.clone()].into();
        for _ in 0..k {
            let mut next = BTreeSet::new();
            for strings in &frontier {
                for i in 0..strings.len() {
                    for p in 0..=strings[i].len() {
                        for &kind in kinds {
                            let mut s = strings.clone();
                            match kind {
                                OpKind::Substitute if p < s[i].len() => s[i].flip(p),
                                OpKind::Delete if p < s[i].len() => {
                                    s[i].remove(p);
                                }
                                OpKind::Insert => {
                                    for b in 0..2 {
                                        let mut t = s.clone();
                                        t[i].insert(p, b);
                                        next.insert(t);
                                    }
                                    continue;
                                }
                                _ => continue,
                            }
                            next.insert(s);
                        }
                    }
                }
            }
            all.extend(next.iter().map(|s| Word::new(s.clone())));
            frontier = next;
        }
        all
    }

    #[test]
    fn example_patterns() {
        let w = word(&["001", "101"]);
        assert_eq!(apply_pattern(&w, &ErrorPattern::default()).unwrap(), w);
        // Canonical order is descending: string 0 is 101, string 1 is 001.
        let sub = ErrorPattern {
            ops: vec![ErrorOp {
                kind: OpKind::Substitute,
                string: 1,
                position: 1,
                bit: None,
            }],
        };
        assert_eq!(apply_pattern(&w, &sub).unwrap(), word(&["011", "101"]));
        let del = ErrorPattern {
            ops: vec![ErrorOp {
                kind: OpKind::Delete,
                string: 0,
                position: 0,
                bit: None,
            }],
        };
        assert_eq!(apply_pattern(&w, &del).unwrap(), word(&["001", "01"]));
        let ins = ErrorPattern {
            ops: vec![ErrorOp {
                kind: OpKind::Insert,
                string: 1,
                position: 3,
                bit: Some(1),
            }],
        };
        assert_eq!(apply_pattern(&w, &ins).unwrap(), word(&["0011", "101"]));
    }

    #[test]
    fn invalid_patterns_are_rejected() {
        let w = word(&["001", "101"]);
        let bad = |kind, string, position, bit| ErrorPattern {
            ops: vec![ErrorOp {
                kind,
                string,
                position,
                bit,
            }],
        };
        assert!(apply_pattern(&w, &bad(OpKind::Substitute, 2, 0, None)).is_err());
        assert!(apply_pattern(&w, &bad(OpKind::Delete, 0, 3, None)).is_err());
        assert!(apply_pattern(&w, &bad(OpKind::Insert, 0, 4, Some(0))).is_err());
        assert!(apply_pattern(&w, &bad(OpKind::Insert, 0, 1, None)).is_err());
        assert!(apply_pattern(&w, &bad(OpKind::Insert, 0, 1, Some(2))).is_err());
    }

    #[test]
    fn selectors_bind_before_any_op() {
        let w = word(&["100", "011"]);
        // Flipping 100 to 000 reorders the word, but string 1 still means 011.
        let e = ErrorPattern {
            ops: vec![
                ErrorOp {
                    kind: OpKind::Substitute,
                    string: 0,
                    position: 0,
                    bit: None,
                },
                ErrorOp {
                    kind: OpKind::Substitute,
                    string: 1,
                    position: 2,
                    bit: None,
                },
            ],
        };
        assert_eq!(apply_pattern(&w, &e).unwrap(), word(&["000", "010"]));
    }

    #[test]
    fn example_balls() {
        let w = word(&["001", "101"]);
        let sub = outcomes(&w, 1, &[OpKind::Substitute]);
        assert_eq!(sub.len(), 7);
        assert_eq!(sub, hamming_ball_word(&w, 1).unwrap());
        let del = outcomes(&w, 1, &[OpKind::Delete]);
        assert_eq!(del.len(), 6);
        assert_eq!(del, deletion_ball_word(&w, 1).unwrap());
        let zero: Vec<_> = enumerate_patterns(&w, 0, &[OpKind::Substitute], 10)
            .unwrap()
            .collect();
        assert_eq!(zero, vec![ErrorPattern::default()]);
    }

    #[test]
    fn enumeration_covers_every_outcome() {
        let all = [OpKind::Substitute, OpKind::Delete, OpKind::Insert];
        let cases: [&[OpKind]; 5] = [
            &[OpKind::Substitute],
            &[OpKind::Delete],
            &[OpKind::Insert],
            &[OpKind::Delete, OpKind::Insert],
            &all,
        ];
        for w in [word(&["001", "101"]), word(&["0110", "1000", "1111"])] {
            for kinds in cases {
                for k in 0..=2 {
                    assert_eq!(
                        outcomes(&w, k, kinds),
                        brute_outcomes(&w, k, kinds),
                        "{kinds:?} k={k}"
                    );
                }
            }
        }
        let w = word(&["0110", "1000", "1111"]);
        assert_eq!(
            outcomes(&w, 2, &[OpKind::Substitute]),
            hamming_ball_word(&w, 2).unwrap()
        );
        assert_eq!(
            outcomes(&w, 2, &[OpKind::Delete]),
            deletion_ball_word(&w, 2).unwrap()
        );
    }

    #[test]
    fn count_matches_stream_length() {
        let w = word(&["0110", "1000", "1111"]);
        for kinds in [
            &[OpKind::Substitute][..],
            &[OpKind::Insert],
            &[OpKind::Delete, OpKind::Insert],
        ] {
            for k in 0..=3 {
                let it = enumerate_patterns(&w, k, kinds, DEFAULT_PATTERN_CAP).unwrap();
                let expected = pattern_count(&it.flat, k);
                assert_eq!(it.count() as u128, expected);
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        let w = word(&["0110", "1000", "1111"]);
        assert!(matches!(
            enumerate_patterns(&w, 3, &[OpKind::Substitute], 100),
            Err(SlicedError::CapExceeded { .. })
        ));
    }

    #[test]
    fn random_patterns_are_reproducible_and_bounded() {
        let w = word(&["0110", "1000", "1111"]);
        let kinds = [OpKind::Substitute, OpKind::Delete, OpKind::Insert];
        assert_eq!(
            random_pattern(&w, 2, &kinds, 7),
            random_pattern(&w, 2, &kinds, 7)
        );
        let ball = brute_outcomes(&w, 2, &kinds);
        for seed in 0..1000 {
            let e = random_pattern(&w, 2, &kinds, seed);
            assert!(e.len() <= 2);
            let out = apply_pattern(&w, &e).unwrap();
            assert!(out.len() <= w.len());
            assert!(ball.contains(&out));
        }
        let sub_ball = hamming_ball_word(&w, 1).unwrap();
        for seed in 0..200 {
            let e = random_pattern(&w, 1, &[OpKind::Substitute], seed);
            assert!(sub_ball.contains(&apply_pattern(&w, &e).unwrap()));
        }
    }

    #[test]
    fn exact_patterns_have_the_requested_counts() {
        let w = word(&["0110", "1000", "1111"]);
        for seed in 0..100 {
            let e = random_pattern_exact(&w, 1, 2, 1, seed).unwrap();
            let count = |k| e.ops.iter().filter(|o| o.kind == k).count();
            assert_eq!(
                (
                    count(OpKind::Substitute),
                    count(OpKind::Delete),
                    count(OpKind::Insert)
                ),
                (1, 2, 1)
            );
            apply_pattern(&w, &e).unwrap();
        }
        assert_eq!(
            random_pattern_exact(&w, 1, 1, 1, 9).unwrap(),
            random_pattern_exact(&w, 1, 1, 1, 9).unwrap()
        );
    }

    #[test]
    fn patterns_serialize_to_json() {
        let e = ErrorPattern {
            ops: vec![
                ErrorOp {
                    kind: OpKind::Delete,
                    string: 1,
                    position: 4,
                    bit: None,
                },
                ErrorOp {
                    kind: OpKind::Insert,
                    string: 0,
                    position: 0,
                    bit: Some(1),
                },
            ],
        };
        let json = serde_json::to_string(&e).unwrap();
        assert_eq!(
            json,
            r#"{"ops":[{"kind":"delete","string":1,"position":4},{"kind":"insert","string":0,"position":0,"bit":1}]}"#
        );
        assert_eq!(serde_json::from_str::<ErrorPattern>(&json).unwrap(), e);
    }
}
