//! The acceptance suite: one check per criterion, shared by the `acceptance`
//! test target and `sliced selftest`.

use std::collections::HashSet;
use std::fmt;
use std::time::Instant;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bits::BitString;
use crate::channel::{
    apply_pattern, enumerate_patterns, random_pattern, OpKind, DEFAULT_PATTERN_CAP,
};
use crate::del_code::{del_decode, del_decode_with, del_encode, del_params, DelMode};
use crate::deletion_index::{
    deletion_interference_size, dp_prefix_count_with, fds, fds_domain, fds_inv, DpOptions,
};
use crate::error::Result;
use crate::hamming_index::{count_prefix_hamming, fhs, fhs_domain, fhs_inv, hamming_ball_size};
use crate::message::Message;
use crate::oracle;
use crate::subst_code::{
    counting_bound_holds, index_len_cases, redundancy_report, subst_decode, subst_encode,
    subst_params,
};
use crate::word::{deletion_ball_word, hamming_ball_word, IndicatorVector, Word};

/// Independently scripted `r_achieved` at `(M, L, K) = (4, 72, 1)`; see
/// `tests/scripts/redundancy_golden.py`.
pub const REDUNDANCY_GOLDEN: f64 = 76.345_199_157_013_6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    /// Reduced sample counts, under a minute in total.
    Quick,
    /// The full sweeps.
    #[default]
    Full,
}

#[derive(Clone, Debug, Default)]
pub struct Options {
    pub level: Level,
    /// Passed to the `N_D` dynamic program checked by criterion 6.
    pub dp: DpOptions,
    pub seed: u64,
}

pub const CRITERIA: [(u32, &str); 12] = [
    (1, "substitution end-to-end, M=4 L=72 K=1"),
    (2, "substitution K=2 randomized, M=2 L'=21"),
    (3, "deletion end-to-end, M=4 L=72 K=1 vt1"),
    (4, "Hamming index bijection, L'=7 M=2 K=1"),
    (5, "deletion index bijection, L'=6 M=2 K=1"),
    (6, "N_D dynamic program vs enumeration"),
    (7, "N_H closed form vs enumeration"),
    (8, "indicator distance under K substitutions"),
    (9, "two-string ball example"),
    (10, "index length inequalities"),
    (11, "redundancy accounting golden value"),
    (12, "binomial domain counting bound"),
];

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    /// Instances checked.
    pub count: u64,
    pub millis: u128,
    pub detail: String,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} criterion {:>2}: {} ({} checks, {} ms) {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.count,
            self.millis,
            self.detail
        )
    }
}

struct Outcome {
    passed: bool,
    count: u64,
    detail: String,
}

impl Outcome {
    fn new(failures: u64, count: u64, detail: impl Into<String>) -> Self {
        let detail = detail.into();
        let detail = if failures == 0 {
            detail
        } else {
            format!("{failures} failures; {detail}")
        };
        Self {
            passed: failures == 0,
            count,
            detail,
        }
    }
}

pub fn run(id: u32, opts: &Options) -> CriterionResult {
    let name = CRITERIA
        .iter()
        .find(|(i, _)| *i == id)
        .map_or("unknown criterion", |(_, n)| *n);
    let start = Instant::now();
    let outcome = match id {
        1 => substitution_end_to_end(opts),
        2 => substitution_k2(opts),
        3 => deletion_end_to_end(opts),
        4 => Ok(hamming_bijection()),
        5 => Ok(deletion_bijection()),
        6 => Ok(dp_vs_oracle(opts)),
        7 => Ok(closed_form_vs_oracle(opts)),
        8 => indicator_distance(),
        9 => example_balls(),
        10 => Ok(index_len_inequalities()),
        11 => redundancy(),
        12 => Ok(counting_bound()),
        _ => Ok(Outcome {
            passed: false,
            count: 0,
            detail: format!("no criterion {id}"),
        }),
    };
    let outcome = outcome.unwrap_or_else(|e| Outcome {
        passed: false,
        count: 0,
        detail: format!("error: {e}"),
    });
    CriterionResult {
        id,
        name,
        passed: outcome.passed,
        count: outcome.count,
        millis: start.elapsed().as_millis(),
        detail: outcome.detail,
    }
}

pub fn run_all(opts: &Options) -> Vec<CriterionResult> {
    CRITERIA.iter().map(|&(id, _)| run(id, opts)).collect()
}

fn random_message(rng: &mut ChaCha8Rng, d1_domain: &BigUint, d2_bits: usize) -> Message {
    let d1 = rng.gen_biguint_below(d1_domain) + 1u8;
    let d2 = BitString::new((0..d2_bits).map(|_| rng.gen_range(0..2)).collect()).expect("bits");
    Message { d1, d2 }
}

trait GenBig {
    fn gen_biguint_below(&mut self, bound: &BigUint) -> BigUint;
}

impl GenBig for ChaCha8Rng {
    /// Rejection sampling on `bits(bound)` random bits.
    fn gen_biguint_below(&mut self, bound: &BigUint) -> BigUint {
        let bits = bound.bits() as usize;
        loop {
            let v = BitString::new((0..bits).map(|_| self.gen_range(0..2)).collect())
                .expect("bits")
                .decimal();
            if v < *bound {
                return v;
            }
        }
    }
}

fn substitution_end_to_end(opts: &Options) -> Result<Outcome> {
    let p = subst_params(4, 72, 1)?;
    let messages = if opts.level == Level::Full { 100 } else { 10 };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 1);
    let (mut count, mut failures) = (0u64, 0u64);
    for _ in 0..messages {
        let msg = random_message(&mut rng, &p.d1_domain, p.d2_bits);
        let w = subst_encode(&msg, &p)?;
        for e in enumerate_patterns(&w, 1, &[OpKind::Substitute], DEFAULT_PATTERN_CAP)? {
            count += 1;
            let r = apply_pattern(&w, &e)?;
            failures += (subst_decode(&r, &p).ok() != Some(msg.clone())) as u64;
        }
    }
    Ok(Outcome::new(
        failures,
        count,
        format!("{messages} messages x (1 + 288) patterns"),
    ))
}

fn substitution_k2(opts: &Options) -> Result<Outcome> {
    let l = (1..1000)
        .find(|&l| subst_params(2, l, 2).is_ok())
        .expect("a feasible L exists");
    let p = subst_params(2, l, 2)?;
    let patterns = if opts.level == Level::Full {
        10_000
    } else {
        1_000
    };
    let per_message = 100;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 2);
    let (mut count, mut failures) = (0u64, 0u64);
    let mut msg = random_message(&mut rng, &p.d1_domain, p.d2_bits);
    let mut w = subst_encode(&msg, &p)?;
    for t in 0..patterns {
        if t % per_message == 0 && t > 0 {
            msg = random_message(&mut rng, &p.d1_domain, p.d2_bits);
            w = subst_encode(&msg, &p)?;
        }
        let e = random_pattern(&w, 2, &[OpKind::Substitute], rng.gen());
        let r = apply_pattern(&w, &e)?;
        count += 1;
        failures += (subst_decode(&r, &p).ok() != Some(msg.clone())) as u64;
    }
    Ok(Outcome::new(
        failures,
        count,
        format!("L = {l}, L' = {}, {patterns} random patterns", p.l_prime),
    ))
}

fn deletion_end_to_end(opts: &Options) -> Result<Outcome> {
    let p = del_params(4, 72, 1, "vt1")?;
    let messages = if opts.level == Level::Full { 100 } else { 5 };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 3);
    let (mut count, mut failures) = (0u64, 0u64);
    for _ in 0..messages {
        let msg = random_message(&mut rng, &p.d1_domain, p.d2_bits);
        let w = del_encode(&msg, &p)?;
        for e in enumerate_patterns(&w, 1, &[OpKind::Delete], DEFAULT_PATTERN_CAP)? {
            count += 1;
            let r = apply_pattern(&w, &e)?;
            failures += (del_decode(&r, &p).ok() != Some(msg.clone())) as u64;
        }
        for e in enumerate_patterns(&w, 1, &[OpKind::Insert], DEFAULT_PATTERN_CAP)?.skip(1) {
            count += 1;
            let r = apply_pattern(&w, &e)?;
            failures += (del_decode_with(&r, &p, DelMode::Indels).ok() != Some(msg.clone())) as u64;
        }
    }
    Ok(Outcome::new(
        failures,
        count,
        format!("{messages} messages, every single deletion and insertion"),
    ))
}

fn hamming_bijection() -> Outcome {
    let size: u64 = fhs_domain(7, 2, 1).try_into().unwrap_or(0);
    let mut seen = HashSet::new();
    let mut failures = 0;
    for d in 1..=size {
        let d = BigUint::from(d);
        let ok = match fhs(&d, 7, 2, 1) {
            Ok(book) => {
                book.validate().is_ok()
                    && fhs_inv(&book).ok() == Some(d)
                    && seen.insert(book.entries)
            }
            Err(_) => false,
        };
        failures += !ok as u64;
    }
    let failures = failures + (size != 71) as u64;
    Outcome::new(failures, size, format!("domain {size}"))
}

fn deletion_bijection_at(l_prime: usize) -> (u64, u64) {
    let size: u64 = fds_domain(l_prime, 2, 1).try_into().unwrap_or(0);
    let mut seen = HashSet::new();
    let mut failures = 0;
    for d in 1..=size {
        let d = BigUint::from(d);
        let ok = match fds(&d, l_prime, 2, 1) {
            Ok(book) => {
                let balls: Vec<_> = book
                    .entries
                    .iter()
                    .map(|a| crate::word::deletion_ball_string(a, 1).expect("small"))
                    .collect();
                let disjoint = balls
                    .iter()
                    .enumerate()
                    .all(|(i, a)| balls[i + 1..].iter().all(|b| a.is_disjoint(b)));
                disjoint && fds_inv(&book).ok() == Some(d) && seen.insert(book.entries)
            }
            Err(_) => false,
        };
        failures += !ok as u64;
    }
    (size, failures)
}

fn deletion_bijection() -> Outcome {
    let (size, failures) = deletion_bijection_at(6);
    let (size9, failures9) = deletion_bijection_at(9);
    let extra = format!("supplementary L'=9: {size9} values, {failures9} failures");
    if size == 0 {
        let mp = deletion_interference_size(6, 1) * 2u8;
        return Outcome {
            passed: false,
            count: size9,
            detail: format!("domain at L'=6 is empty because 2^6 = 64 <= M*P = {mp}; {extra}"),
        };
    }
    Outcome::new(failures + failures9, size + size9, extra)
}

fn all_strings(len: usize) -> impl Iterator<Item = BitString> {
    (0..1u64 << len).map(move |v| BitString::from_u64(v, len).expect("fits"))
}

fn dp_vs_oracle(opts: &Options) -> Outcome {
    let l_prime = 6;
    let (mut count, mut failures) = (0u64, 0u64);
    for k in 1..=2 {
        for len in 0..=l_prime {
            for a in all_strings(len) {
                for c in all_strings(l_prime) {
                    count += 1;
                    let fast = dp_prefix_count_with(&a, &c, k, opts.dp).map(|t| t.n_d());
                    failures += (fast.ok()
                        != Some(oracle::prefix_deletion(&a, std::slice::from_ref(&c), k)))
                        as u64;
                }
            }
        }
    }
    Outcome::new(
        failures,
        count,
        "L'=6, K in {1, 2}, every prefix and string",
    )
}

fn closed_form_vs_oracle(opts: &Options) -> Outcome {
    let max_len = if opts.level == Level::Full { 8 } else { 6 };
    let (mut count, mut failures) = (0u64, 0u64);
    for l_prime in 1..=max_len {
        for k in 0..=2 {
            for len in 0..=l_prime {
                for a in all_strings(len) {
                    for c in all_strings(l_prime) {
                        count += 1;
                        let set = std::slice::from_ref(&c);
                        failures += (count_prefix_hamming(&a, set, k).ok()
                            != Some(oracle::prefix_hamming(&a, set, k)))
                            as u64;
                    }
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 7);
    for _ in 0..1000 {
        let l_prime = rng.gen_range(1..=16usize);
        let k = rng.gen_range(0..=3usize);
        let len = rng.gen_range(0..l_prime);
        let a = BitString::from_u64(rng.gen_range(0..1u64 << len), len).expect("fits");
        let set: Vec<BitString> = (0..rng.gen_range(0..5))
            .map(|_| BitString::from_u64(rng.gen_range(0..1u64 << l_prime), l_prime).expect("fits"))
            .collect();
        let (mut a0, mut a1) = (a.clone(), a.clone());
        a0.push(0);
        a1.push(1);
        let whole = count_prefix_hamming(&a, &set, k).expect("lengths agree");
        let split = count_prefix_hamming(&a0, &set, k).expect("lengths agree")
            + count_prefix_hamming(&a1, &set, k).expect("lengths agree");
        count += 1;
        failures += (whole != split) as u64;
    }
    Outcome::new(
        failures,
        count,
        format!("L' <= {max_len}, K <= 2, plus 1000 split identities"),
    )
}

fn indicator_distance() -> Result<Outcome> {
    let (mut count, mut failures) = (0u64, 0u64);
    for l_prime in 1..=4usize {
        let strings: Vec<BitString> = all_strings(l_prime).collect();
        for m in 1..=3usize.min(strings.len()) {
            for combo in combinations(strings.len(), m) {
                let w = Word::new(combo.iter().map(|&i| strings[i].clone()));
                let base = IndicatorVector::new(l_prime, w.strings())?;
                for k in 0..=2 {
                    for r in hamming_ball_word(&w, k)? {
                        count += 1;
                        let other = IndicatorVector::new(l_prime, r.strings())?;
                        failures += (base.hamming_distance(&other) > 2 * k) as u64;
                    }
                }
            }
        }
    }
    Ok(Outcome::new(failures, count, "L' <= 4, M <= 3, K <= 2"))
}

fn combinations(n: usize, m: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, m, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, m, &mut Vec::new(), &mut out);
    out
}

fn example_balls() -> Result<Outcome> {
    let word = |ss: &[&str]| -> Word {
        ss.iter()
            .map(|s| s.parse::<BitString>().expect("bits"))
            .collect()
    };
    let w = word(&["001", "101"]);
    let hamming: HashSet<Word> = [
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
    let deletion: HashSet<Word> = [
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
    let h: HashSet<Word> = hamming_ball_word(&w, 1)?.into_iter().collect();
    let d: HashSet<Word> = deletion_ball_word(&w, 1)?.into_iter().collect();
    let failures = (h != hamming) as u64 + (d != deletion) as u64;
    Ok(Outcome::new(
        failures,
        2,
        format!("{} and {} words", h.len(), d.len()),
    ))
}

fn index_len_inequalities() -> Outcome {
    let ms: Vec<usize> = (1..=20).map(|e| 1usize << e).collect();
    let ks: Vec<usize> = (1..=6).collect();
    let cases = index_len_cases(&ms, &ks);
    let chain: Vec<String> = cases
        .iter()
        .filter(|c| !c.chain_holds)
        .map(|c| format!("(M={}, K={}, L'={})", c.m, c.k, c.l_prime))
        .collect();
    let gap = cases.iter().filter(|c| !c.gap_holds).count();
    let failures = (chain.len() + gap) as u64;
    let detail = if chain.is_empty() {
        format!("{gap} MQ(M+1) failures")
    } else {
        format!(
            "M^2 L'^2K <= 2^(L'-1) fails at {}; MQ(M+1) <= 2^L' fails {gap} times",
            chain.join(", ")
        )
    };
    Outcome {
        passed: failures == 0,
        count: cases.len() as u64,
        detail,
    }
}

fn redundancy() -> Result<Outcome> {
    let r = redundancy_report(&subst_params(4, 72, 1)?);
    let diff = (r.r_achieved - REDUNDANCY_GOLDEN).abs();
    Ok(Outcome::new(
        (diff >= 1e-3) as u64,
        1,
        format!("r = {:.6} bits, golden {REDUNDANCY_GOLDEN}", r.r_achieved),
    ))
}

fn counting_bound() -> Outcome {
    let (mut count, mut failures) = (0u64, 0u64);
    for l_prime in 5..=24usize {
        for m in 2..=5usize {
            for k in 0..=2usize {
                for gap in [
                    hamming_ball_size(l_prime, k),
                    deletion_interference_size(l_prime, k),
                ] {
                    if BigUint::from(1u8) << l_prime <= &gap * m {
                        continue;
                    }
                    count += 1;
                    failures += !counting_bound_holds(l_prime, m, &gap) as u64;
                }
            }
        }
    }
    Outcome::new(
        failures,
        count,
        "5 <= L' <= 24, 2 <= M <= 5, K <= 2, gaps Q and P",
    )
}
