//! The `K`-deletion code over words of `M` strings of length `L`.
//!
//! Layout, strings listed by descending index `a_1 > ... > a_M` (`a_1` all
//! ones):
//!
//! * every string starts with its `L'`-bit index;
//! * string 1 continues with the `alpha`-bit deletion-codec encoding of the
//!   `4KL'`-bit RS parity over the indicator vector of `{a_i}`;
//! * the payload codeword (deletion-codec encoding of `d2`, zero padded to the
//!   container length `M(L - L') - alpha`) fills the rest of string 1 and
//!   then strings `2..M` after their indices.
//!
//! The decoder runs in one of two modes: pure deletions, or any mix of at
//! most `K` deletions and insertions.

use num_bigint::BigUint;
use serde::Serialize;

use crate::bits::{self, BitString};
use crate::combinatorics::{binomial, log2_big};
use crate::deletion_codec::{DeletionCodec, DeletionCodecProfile};
use crate::deletion_index::{deletion_interference_size, fds, fds_domain, fds_inv};
use crate::error::{DecodeFailure, Result, SlicedError};
use crate::message::Message;
use crate::robust_index::{Codebook, Metric};
use crate::rs::{rs_correct_sparse, rs_redundancy_sparse, RsProfile};
use crate::subst_code::{index_len, MAX_L_PRIME};
use crate::word::{IndicatorVector, Word};

/// Which channel the decoder assumes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum DelMode {
    /// At most `K` deletions in total.
    #[default]
    Deletions,
    /// At most `K` deletions and insertions in total.
    Indels,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DelParams {
    pub m: usize,
    pub l: usize,
    pub k: usize,
    pub l_prime: usize,
    /// `sum_{r<=K} C(L', r)^2 2^r`, the gap of the index map.
    pub p: BigUint,
    pub d1_domain: BigUint,
    pub codec: DeletionCodec,
    pub rs_indicator: RsProfile,
    /// Codec protecting the `4KL'` parity bits; its length is `alpha`.
    pub parity_codec: DeletionCodecProfile,
    /// `M(L - L') - alpha`.
    pub container: usize,
    /// Codec over the payload; its message length is `d2_bits`.
    pub payload_codec: DeletionCodecProfile,
    pub d2_bits: usize,
}

impl DelParams {
    pub fn new(m: usize, l: usize, k: usize, codec: DeletionCodec) -> Result<Self> {
        if m < 2 {
            return Err(SlicedError::InvalidInput(format!("need M >= 2, got {m}")));
        }
        let l_prime = index_len(m, k);
        if l_prime > MAX_L_PRIME {
            return Err(SlicedError::Unsupported(format!(
                "L' = {l_prime} exceeds {MAX_L_PRIME}"
            )));
        }
        let p = deletion_interference_size(l_prime, k);
        if &p * m >= BigUint::from(1u8) << l_prime {
            return Err(SlicedError::Infeasible(format!(
                "2^L' > MP fails: M = {m}, P = {p}, L' = {l_prime}"
            )));
        }
        let parity_bits = 4 * k * l_prime;
        let rs_indicator = RsProfile::new(1u64 << l_prime, 2 * k, parity_bits)?;
        let parity_codec = DeletionCodecProfile::new(codec, parity_bits, k)?;
        let alpha = parity_codec.big_n;
        if l_prime + alpha > l {
            return Err(SlicedError::Infeasible(format!(
                "L' + alpha <= L fails: string 1 needs {l_prime} + {alpha} bits but L = {l}"
            )));
        }
        let container = m * (l - l_prime) - alpha;
        let mut payload = None;
        for n in (0..=container).rev() {
            match codec.codeword_len(n, k) {
                Ok(len) if len <= container => {
                    payload = Some(n);
                    break;
                }
                Ok(_) => {}
                Err(e) => return Err(e),
            }
        }
        let n_payload = payload.ok_or_else(|| {
            SlicedError::Infeasible(format!("no payload fits a {container}-bit container"))
        })?;
        let payload_codec = DeletionCodecProfile::new(codec, n_payload, k)?;
        let d1_domain = fds_domain(l_prime, m, k);
        Ok(Self {
            m,
            l,
            k,
            l_prime,
            p,
            d1_domain,
            codec,
            rs_indicator,
            parity_codec,
            container,
            payload_codec,
            d2_bits: n_payload,
        })
    }

    pub fn alpha(&self) -> usize {
        self.parity_codec.big_n
    }

    /// Zero bits appended to the payload codeword to fill the container.
    pub fn pad(&self) -> usize {
        self.container - self.payload_codec.big_n
    }

    fn tail_start(&self, entry: usize) -> usize {
        if entry == 0 {
            self.l_prime + self.alpha()
        } else {
            self.l_prime
        }
    }
}

pub fn del_params(m: usize, l: usize, k: usize, codec: &str) -> Result<DelParams> {
    DelParams::new(m, l, k, codec.parse()?)
}

pub fn del_encode(msg: &Message, p: &DelParams) -> Result<Word> {
    msg.validate(&p.d1_domain, p.d2_bits)?;
    let book = fds(&msg.d1, p.l_prime, p.m, p.k)?;
    let indicator = IndicatorVector::new(p.l_prime, &book.entries)?;
    let parity = rs_redundancy_sparse(indicator.support(), &p.rs_indicator)?;
    let protected = p.parity_codec.encode(&parity)?;
    let mut payload = p.payload_codec.encode(&msg.d2)?.into_vec();
    payload.resize(p.container, 0);
    let mut rest = payload.as_slice();
    let strings = book.entries.iter().enumerate().map(|(i, a)| {
        let mut s = a.as_slice().to_vec();
        if i == 0 {
            s.extend_from_slice(protected.as_slice());
        }
        let (head, tail) = rest.split_at(p.l - s.len());
        s.extend_from_slice(head);
        rest = tail;
        BitString::from_raw(s)
    });
    Ok(Word::new(strings.collect::<Vec<_>>()))
}

fn fail<T>(f: DecodeFailure) -> Result<T> {
    Err(SlicedError::decode(f))
}

/// Decodes a word hit by at most `K` deletions.
pub fn del_decode(received: &Word, p: &DelParams) -> Result<Message> {
    del_decode_with(received, p, DelMode::Deletions)
}

pub fn del_decode_with(received: &Word, p: &DelParams, mode: DelMode) -> Result<Message> {
    let strings = received.strings();
    if strings.len() != p.m {
        return fail(DecodeFailure::MalformedWord(format!(
            "{} strings instead of {}",
            strings.len(),
            p.m
        )));
    }
    let max_len = if mode == DelMode::Indels {
        p.l + p.k
    } else {
        p.l
    };
    if let Some(s) = strings
        .iter()
        .find(|s| s.len() + p.k < p.l || s.len() > max_len)
    {
        return fail(DecodeFailure::MalformedWord(format!(
            "string of length {} outside [{}, {max_len}]",
            s.len(),
            p.l - p.k
        )));
    }
    let drift: usize = strings.iter().map(|s| s.len().abs_diff(p.l)).sum();
    if drift > p.k {
        return fail(DecodeFailure::MalformedWord(format!(
            "lengths differ from L by {drift} in total"
        )));
    }

    // Step 1: the string whose first L' - K bits are all ones came from a_1.
    // Insertions may plant up to K zeros there, so indel mode keeps every
    // string that could qualify and lets verification pick.
    let head = p.l_prime - p.k;
    let zeros = |s: &BitString| head - s.prefix(head).weight();
    let anchors: Vec<usize> = match mode {
        DelMode::Deletions => (0..p.m).filter(|&i| zeros(&strings[i]) == 0).collect(),
        DelMode::Indels => {
            let mut a: Vec<usize> = (0..p.m).filter(|&i| zeros(&strings[i]) <= p.k).collect();
            a.sort_by_key(|&i| zeros(&strings[i]));
            a
        }
    };
    match (mode, anchors.len()) {
        (_, 0) => return fail(DecodeFailure::AnchorNotFound),
        (DelMode::Deletions, n) if n > 1 => return fail(DecodeFailure::AnchorAmbiguous(n)),
        _ => {}
    }

    // Each received index differs from its original only if an error hit it,
    // so the indicator vectors differ in at most 2K positions.
    let received_indices: Vec<BitString> = strings.iter().map(|s| s.prefix(p.l_prime)).collect();
    let noisy = IndicatorVector::new(p.l_prime, &received_indices)?;

    let mut first_err = None;
    for &anchor in &anchors {
        for window in parity_windows(&strings[anchor], p, mode) {
            match attempt(strings, &noisy, &window, p, mode) {
                Ok(msg) => return Ok(msg),
                Err(e) => {
                    first_err.get_or_insert(e);
                }
            }
        }
    }
    Err(
        first_err.unwrap_or(SlicedError::decode(DecodeFailure::Codec(
            "no parity window fits".into(),
        ))),
    )
}

/// Candidate spans of the protected parity inside the anchor string, most
/// likely first. With `j` deletions before the span and `e` inside it, the
/// span is `[L' - j, L' - j + alpha - e)`; indel mode shifts both ends by up
/// to `K` either way.
fn parity_windows(anchor: &BitString, p: &DelParams, mode: DelMode) -> Vec<BitString> {
    let k = p.k as isize;
    let (l_prime, alpha) = (p.l_prime as isize, p.alpha() as isize);
    let mut spans: Vec<(isize, isize)> = Vec::new();
    match mode {
        DelMode::Deletions => {
            let lost = (p.l - anchor.len()) as isize;
            for j in 0..=lost {
                for e in 0..=lost - j {
                    spans.push((l_prime - j, alpha - e));
                }
            }
        }
        DelMode::Indels => {
            for t in -k..=k {
                for u in -k..=k {
                    spans.push((l_prime + t, alpha + u));
                }
            }
            spans.sort_by_key(|&(s, n)| (s - l_prime).abs() + (n - alpha).abs());
        }
    }
    let mut out: Vec<BitString> = Vec::new();
    for (start, len) in spans {
        if start < 0 || len < 0 || (start + len) as usize > anchor.len() {
            continue;
        }
        let w = anchor.slice(start as usize, (start + len) as usize);
        if !out.contains(&w) {
            out.push(w);
        }
    }
    out
}

fn attempt(
    strings: &[BitString],
    noisy: &IndicatorVector,
    window: &BitString,
    p: &DelParams,
    mode: DelMode,
) -> Result<Message> {
    let parity = p.parity_codec.decode(window)?;
    let support = rs_correct_sparse(noisy.support(), &parity, &p.rs_indicator)?;
    if support.len() != p.m {
        return fail(DecodeFailure::Codebook(format!(
            "indicator has weight {} instead of {}",
            support.len(),
            p.m
        )));
    }
    let entries = IndicatorVector::from_support(p.l_prime, support).to_set();
    let book = Codebook {
        entries,
        l_prime: p.l_prime,
        k: p.k,
        metric: Metric::Deletion,
    };
    let d1 = fds_inv(&book)?;

    let orders = match mode {
        DelMode::Deletions => vec![match_by_subsequence(strings, &book, p)?],
        DelMode::Indels => match_by_distance(strings, &book, p),
    };
    if orders.is_empty() {
        return fail(DecodeFailure::Matching(
            "no assignment of strings to indices within K".into(),
        ));
    }
    let mut first_err = None;
    for order in orders {
        match read_payload(strings, &order, &d1, p, mode) {
            Ok(msg) => return Ok(msg),
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    Err(first_err.expect("at least one order"))
}

/// Step 2, deletions only: `order[i]` is the received string whose first
/// `L' - K` bits are a subsequence of `a_i`.
fn match_by_subsequence(
    strings: &[BitString],
    book: &Codebook,
    p: &DelParams,
) -> Result<Vec<usize>> {
    let head = p.l_prime - p.k;
    let mut order = vec![usize::MAX; p.m];
    for (s, x) in strings.iter().enumerate() {
        let prefix = x.prefix(head);
        let mut hits = book
            .entries
            .iter()
            .enumerate()
            .filter(|(_, a)| bits::is_subsequence(prefix.as_slice(), a.as_slice()));
        let i = match (hits.next(), hits.next()) {
            (Some((i, _)), None) => i,
            (None, _) => {
                return fail(DecodeFailure::Matching(format!(
                    "{prefix} is a subsequence of no index"
                )))
            }
            _ => {
                return fail(DecodeFailure::Matching(format!(
                    "{prefix} is a subsequence of several indices"
                )))
            }
        };
        if order[i] != usize::MAX {
            return fail(DecodeFailure::Matching(format!(
                "two strings claim index {}",
                book.entries[i]
            )));
        }
        order[i] = s;
    }
    Ok(order)
}

/// Step 2 with insertions: the cost of giving string `x` index `a` is the
/// least deletion distance between `a` and a prefix of `x` of length in
/// `[L' - K, L' + K]`. Returns every assignment of total cost at most `K`,
/// cheapest first.
fn match_by_distance(strings: &[BitString], book: &Codebook, p: &DelParams) -> Vec<Vec<usize>> {
    let cost: Vec<Vec<usize>> = book
        .entries
        .iter()
        .map(|a| {
            strings
                .iter()
                .map(|x| {
                    (p.l_prime - p.k..=(p.l_prime + p.k).min(x.len()))
                        .map(|len| bits::deletion_distance(&x.as_slice()[..len], a.as_slice()))
                        .min()
                        .unwrap_or(usize::MAX)
                })
                .collect()
        })
        .collect();
    let mut found = Vec::new();
    let mut order = Vec::with_capacity(p.m);
    let mut used = vec![false; p.m];
    assign(&cost, p.k, 0, &mut order, &mut used, &mut found);
    found.sort_by_key(|(c, _)| *c);
    found.into_iter().map(|(_, o)| o).collect()
}

fn assign(
    cost: &[Vec<usize>],
    budget: usize,
    spent: usize,
    order: &mut Vec<usize>,
    used: &mut [bool],
    found: &mut Vec<(usize, Vec<usize>)>,
) {
    let i = order.len();
    if i == cost.len() {
        found.push((spent, order.clone()));
        return;
    }
    for s in 0..used.len() {
        let c = cost[i][s];
        if !used[s] && c != usize::MAX && spent + c <= budget {
            used[s] = true;
            order.push(s);
            assign(cost, budget, spent + c, order, used, found);
            order.pop();
            used[s] = false;
        }
    }
}

/// Step 3: decode the concatenated tails, then verify against the input.
fn read_payload(
    strings: &[BitString],
    order: &[usize],
    d1: &BigUint,
    p: &DelParams,
    mode: DelMode,
) -> Result<Message> {
    let mut joined = Vec::with_capacity(p.container + p.k);
    for (i, &s) in order.iter().enumerate() {
        let x = strings[s].as_slice();
        joined.extend_from_slice(&x[p.tail_start(i).min(x.len())..]);
    }
    joined.truncate(joined.len().saturating_sub(p.pad()));
    let d2 = p.payload_codec.decode(&BitString::from_raw(joined))?;
    let msg = Message { d1: d1.clone(), d2 };

    let again = del_encode(&msg, p)?;
    let pairs = again
        .strings()
        .iter()
        .zip(order.iter().map(|&s| &strings[s]));
    let ok = match mode {
        DelMode::Deletions => pairs.into_iter().all(|(c, x)| x.is_subsequence_of(c)),
        DelMode::Indels => pairs.map(|(c, x)| c.deletion_distance(x)).sum::<usize>() <= p.k,
    };
    if !ok {
        return fail(DecodeFailure::Codec(
            "decoded word is not within K edits of the input".into(),
        ));
    }
    Ok(msg)
}

/// Achieved redundancy with the codec's true overheads.
#[derive(Clone, Debug, Serialize)]
pub struct DelRedundancyReport {
    pub m: usize,
    pub l: usize,
    pub k: usize,
    pub l_prime: usize,
    pub codec: String,
    pub log2_words: f64,
    pub log2_d1_domain: f64,
    pub d2_bits: usize,
    /// `log2 C(2^L, M) - log2 d1_domain - d2_bits`.
    pub r_achieved: f64,
    /// `4K log2(ML)`.
    pub term_error_log: f64,
    /// `(12K + 2) log2 M`.
    pub term_index_log: f64,
    /// `alpha - 4KL'`.
    pub parity_codec_overhead: usize,
    /// Payload codeword length minus `d2_bits`.
    pub payload_codec_overhead: usize,
    pub pad: usize,
    /// Overhead the two codec calls would cost at `4K log2 n` each.
    pub target_codec_overhead: f64,
    /// Measured codec overhead (including pad) minus the target.
    pub codec_excess: f64,
    pub packing_loss: f64,
}

pub fn del_redundancy_report(p: &DelParams) -> DelRedundancyReport {
    let words = binomial(&(BigUint::from(1u8) << p.l), p.m as u64);
    let log2_words = log2_big(&words);
    let log2_d1_domain = log2_big(&p.d1_domain);
    let k = p.k as f64;
    let parity_bits = (4 * p.k * p.l_prime) as f64;
    let target = |n: f64| if n > 1.0 { 4.0 * k * n.log2() } else { 0.0 };
    let target_codec_overhead = target(parity_bits) + target(p.d2_bits as f64);
    let measured = p.parity_codec.overhead() + p.payload_codec.overhead() + p.pad();
    DelRedundancyReport {
        m: p.m,
        l: p.l,
        k: p.k,
        l_prime: p.l_prime,
        codec: p.codec.to_string(),
        log2_words,
        log2_d1_domain,
        d2_bits: p.d2_bits,
        r_achieved: log2_words - log2_d1_domain - p.d2_bits as f64,
        term_error_log: 4.0 * k * ((p.m * p.l) as f64).log2(),
        term_index_log: (12 * p.k + 2) as f64 * (p.m as f64).log2(),
        parity_codec_overhead: p.parity_codec.overhead(),
        payload_codec_overhead: p.payload_codec.overhead(),
        pad: p.pad(),
        target_codec_overhead,
        codec_excess: measured as f64 - target_codec_overhead,
        packing_loss: log2_d1_domain - crate::message::d1_packed_bits(&p.d1_domain) as f64,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::deletion_ball_word;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_message(p: &DelParams, rng: &mut impl Rng) -> Message {
        let d1 = rng.gen_range(1..=u64::try_from(&p.d1_domain).unwrap_or(u64::MAX));
        let d2 = BitString::new((0..p.d2_bits).map(|_| rng.gen_range(0..2)).collect()).unwrap();
        Message {
            d1: BigUint::from(d1),
            d2,
        }
    }

    fn params() -> DelParams {
        del_params(4, 72, 1, "vt1").unwrap()
    }

    fn single_insertions(w: &Word) -> Vec<Word> {
        let mut out = Vec::new();
        for (i, s) in w.strings().iter().enumerate() {
            for pos in 0..=s.len() {
                for b in 0..2 {
                    let mut strings = w.strings().to_vec();
                    strings[i].insert(pos, b);
                    out.push(Word::new(strings));
                }
            }
        }
        out
    }

    #[test]
    fn params_examples() {
        let p = params();
        assert_eq!(p.l_prime, 12);
        assert_eq!(p.p, BigUint::from(289u16));
        assert_eq!(p.alpha(), 54);
        assert_eq!(p.container, 186);
        assert_eq!(p.d2_bits, 178);
        assert_eq!(p.pad(), 0);
        assert!(p.d2_bits < p.container);
        assert!(matches!(
            del_params(4, 65, 1, "vt1"),
            Err(SlicedError::Infeasible(_))
        ));
        assert!(del_params(4, 72, 2, "brute4k2").is_err());
        assert!(del_params(4, 72, 1, "none").is_err());
    }

    #[test]
    fn container_lengths_equal_to_a_power_of_two_need_a_pad_bit() {
        // M = 2, K = 1: L' = 9 and alpha = 42, so container = 2(L - 9) - 42.
        // A 128-bit container holds a 127-bit VT codeword plus one pad bit.
        let p = del_params(2, 94, 1, "vt1").unwrap();
        assert_eq!(p.container, 128);
        assert_eq!(p.payload_codec.big_n, 127);
        assert_eq!(p.pad(), 1);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let msg = random_message(&p, &mut rng);
        let w = del_encode(&msg, &p).unwrap();
        for r in deletion_ball_word(&w, 1).unwrap() {
            assert_eq!(del_decode(&r, &p).unwrap(), msg);
        }
        for r in single_insertions(&w) {
            assert_eq!(del_decode_with(&r, &p, DelMode::Indels).unwrap(), msg);
        }
    }

    #[test]
    fn encode_structure() {
        let p = params();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10 {
            let msg = random_message(&p, &mut rng);
            let w = del_encode(&msg, &p).unwrap();
            assert_eq!(w.len(), 4);
            assert!(w.strings().iter().all(|s| s.len() == 72));
            let prefixes: Vec<BitString> = w.strings().iter().map(|s| s.prefix(12)).collect();
            let book = fds(&msg.d1, 12, 4, 1).unwrap();
            assert_eq!(prefixes, book.entries);
            book.validate().unwrap();
            assert_eq!(del_decode(&w, &p).unwrap(), msg);
            assert_eq!(del_decode_with(&w, &p, DelMode::Indels).unwrap(), msg);
        }
    }

    #[test]
    fn every_single_deletion_is_corrected() {
        let p = params();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..3 {
            let msg = random_message(&p, &mut rng);
            let w = del_encode(&msg, &p).unwrap();
            for r in deletion_ball_word(&w, 1).unwrap() {
                assert_eq!(r.len(), 4, "received strings stay distinct");
                assert_eq!(del_decode(&r, &p).unwrap(), msg);
                assert_eq!(del_decode_with(&r, &p, DelMode::Indels).unwrap(), msg);
            }
        }
    }

    #[test]
    fn every_single_insertion_is_corrected() {
        let p = params();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..2 {
            let msg = random_message(&p, &mut rng);
            let w = del_encode(&msg, &p).unwrap();
            for r in single_insertions(&w) {
                assert_eq!(del_decode_with(&r, &p, DelMode::Indels).unwrap(), msg);
            }
        }
    }

    #[test]
    fn tail_concatenation_stays_within_k() {
        let p = params();
        let msg = random_message(&p, &mut ChaCha8Rng::seed_from_u64(4));
        let w = del_encode(&msg, &p).unwrap();
        let mut cw = p.payload_codec.encode(&msg.d2).unwrap().into_vec();
        cw.resize(p.container, 0);
        let cw = BitString::from_raw(cw);
        for r in deletion_ball_word(&w, 1).unwrap() {
            let strings = r.strings();
            let book = fds(&msg.d1, 12, 4, 1).unwrap();
            let order = match_by_subsequence(strings, &book, &p).unwrap();
            let mut joined = Vec::new();
            for (i, &s) in order.iter().enumerate() {
                joined.extend_from_slice(&strings[s].as_slice()[p.tail_start(i)..]);
            }
            assert!(cw.deletion_distance(&BitString::from_raw(joined)) <= 1);
        }
    }

    #[test]
    fn rejects_malformed_and_far_words() {
        let p = params();
        let msg = random_message(&p, &mut ChaCha8Rng::seed_from_u64(5));
        let w = del_encode(&msg, &p).unwrap();
        let three = Word::new(w.strings()[..3].to_vec());
        assert!(matches!(
            del_decode(&three, &p),
            Err(SlicedError::Decode(DecodeFailure::MalformedWord(_)))
        ));
        let mut two_short = w.strings().to_vec();
        two_short[0].remove(40);
        two_short[1].remove(40);
        assert!(matches!(
            del_decode(&Word::new(two_short), &p),
            Err(SlicedError::Decode(DecodeFailure::MalformedWord(_)))
        ));
        let mut long = w.strings().to_vec();
        long[2].insert(0, 1);
        assert!(del_decode(&Word::new(long), &p).is_err());
        let zeros = Word::new((0..4u64).map(|v| BitString::from_u64(v, 72).unwrap()));
        assert!(matches!(
            del_decode(&zeros, &p),
            Err(SlicedError::Decode(DecodeFailure::AnchorNotFound))
        ));
    }

    #[test]
    fn k0_uses_the_identity_codec() {
        let p = del_params(3, 30, 0, "none").unwrap();
        assert_eq!(p.alpha(), 0);
        assert_eq!(p.d2_bits, 3 * (30 - p.l_prime));
        let msg = random_message(&p, &mut ChaCha8Rng::seed_from_u64(6));
        let w = del_encode(&msg, &p).unwrap();
        assert_eq!(del_decode(&w, &p).unwrap(), msg);
        let r = del_redundancy_report(&p);
        assert_eq!(r.term_error_log, 0.0);
        assert_eq!(r.codec_excess, 0.0);
    }

    #[test]
    fn report_itemizes_codec_overheads() {
        let p = params();
        let r = del_redundancy_report(&p);
        assert_eq!(r.parity_codec_overhead, 6);
        assert_eq!(r.payload_codec_overhead, 8);
        assert!((r.term_error_log - 4.0 * 288f64.log2()).abs() < 1e-12);
        assert!(r.r_achieved > r.term_error_log);
        assert!(r.codec_excess < 0.0, "VT beats 4K log n at K = 1");
    }
}
