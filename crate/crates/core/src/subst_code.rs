//! The `K`-substitution code over words of `M` strings of length `L`.
//!
//! Layout of an encoded word, strings listed by descending prefix `a_1 > ...
//! > a_M` (so `a_1` is all ones), `r = 2K ceil(log2 ML)`:
//!
//! * every string starts with its `L'`-bit index `a_i`;
//! * string 1 continues with `4KL'` bits of RS parity over the indicator
//!   vector of `{a_i}`, then payload;
//! * strings `2..M-1` carry payload after the index;
//! * string `M` carries payload up to `L - r`, then `r` bits of RS parity over
//!   the concatenation of everything before it.
//!
//! Payload (`d2`) fills the free positions in that order.

use num_bigint::BigUint;
use serde::Serialize;

use crate::bits::BitString;
use crate::combinatorics::{binomial, ceil_log2, gap_domain_size, log2_big};
use crate::error::{DecodeFailure, Result, SlicedError};
use crate::hamming_index::{fhs, fhs_inv, hamming_ball_size};
use crate::message::Message;
use crate::robust_index::{Codebook, Metric};
use crate::rs::{rs_correct, rs_correct_sparse, rs_redundancy, rs_redundancy_sparse, RsProfile};
use crate::word::{IndicatorVector, Word};

/// Largest index length the pipelines accept (indicator positions are `u64`).
pub const MAX_L_PRIME: usize = 62;

/// `ceil(3 log2 M) + 4K^2 + 2`.
pub fn index_len(m: usize, k: usize) -> usize {
    ceil_log2(&BigUint::from(m).pow(3)) + 4 * k * k + 2
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubstParams {
    pub m: usize,
    pub l: usize,
    pub k: usize,
    pub l_prime: usize,
    /// Radius-`2K` Hamming ball size, the gap of the index map.
    pub q: BigUint,
    pub d1_domain: BigUint,
    pub d2_bits: usize,
    /// `ceil(log2 ML)`.
    pub log_ml: usize,
    pub rs_indicator: RsProfile,
    pub rs_tail: RsProfile,
}

impl SubstParams {
    pub fn new(m: usize, l: usize, k: usize) -> Result<Self> {
        if m < 2 {
            return Err(SlicedError::InvalidInput(format!("need M >= 2, got {m}")));
        }
        let l_prime = index_len(m, k);
        if l_prime > MAX_L_PRIME {
            return Err(SlicedError::Unsupported(format!(
                "L' = {l_prime} exceeds {MAX_L_PRIME}"
            )));
        }
        let indicator_budget = 4 * k * l_prime;
        let fixed = l_prime + indicator_budget;
        // L' + 4KL' + 2K log2(4KL') <= L, as (4KL')^{2K} <= 2^{L - L' - 4KL'}.
        let holds = l >= fixed
            && BigUint::from(indicator_budget.max(1)).pow(2 * k as u32)
                <= BigUint::from(1u8) << (l - fixed);
        if !holds {
            return Err(SlicedError::Infeasible(format!(
                "L' + 4KL' + 2K log2(4KL') <= L fails for L' = {l_prime}, K = {k}, L = {l}"
            )));
        }
        let q = hamming_ball_size(l_prime, k);
        if &q * m * (m + 1) > BigUint::from(1u8) << l_prime {
            return Err(SlicedError::Infeasible(format!(
                "MQ(M+1) <= 2^L' fails: M = {m}, Q = {q}, L' = {l_prime}"
            )));
        }
        let log_ml = ceil_log2(&BigUint::from(m * l));
        let tail_budget = 2 * k * log_ml;
        if l < l_prime + tail_budget {
            return Err(SlicedError::Infeasible(format!(
                "string M cannot hold its index and 2K ceil(log2 ML) = {tail_budget} parity bits in L = {l}"
            )));
        }
        let d2 = (m * (l - l_prime)) as i64 - indicator_budget as i64 - tail_budget as i64;
        if d2 < 0 {
            return Err(SlicedError::Infeasible(format!(
                "payload length M(L-L') - 4KL' - 2K ceil(log2 ML) = {d2} < 0"
            )));
        }
        let rs_indicator = RsProfile::new(1u64 << l_prime, 2 * k, indicator_budget)?;
        let rs_tail = RsProfile::new((m * l - tail_budget) as u64, k, tail_budget)?;
        let d1_domain = gap_domain_size(l_prime, m, &q);
        Ok(Self {
            m,
            l,
            k,
            l_prime,
            q,
            d1_domain,
            d2_bits: d2 as usize,
            log_ml,
            rs_indicator,
            rs_tail,
        })
    }

    fn tail_budget(&self) -> usize {
        2 * self.k * self.log_ml
    }

    fn indicator_budget(&self) -> usize {
        4 * self.k * self.l_prime
    }

    /// `(string, start, end)` payload segments in fill order.
    fn payload_segments(&self) -> Vec<(usize, usize, usize)> {
        let mut out = vec![(0, self.l_prime + self.indicator_budget(), self.l)];
        for i in 1..self.m - 1 {
            out.push((i, self.l_prime, self.l));
        }
        out.push((self.m - 1, self.l_prime, self.l - self.tail_budget()));
        out
    }
}

pub fn subst_params(m: usize, l: usize, k: usize) -> Result<SubstParams> {
    SubstParams::new(m, l, k)
}

pub fn subst_encode(msg: &Message, p: &SubstParams) -> Result<Word> {
    msg.validate(&p.d1_domain, p.d2_bits)?;
    let book = fhs(&msg.d1, p.l_prime, p.m, p.k)?;
    let indicator = IndicatorVector::new(p.l_prime, &book.entries)?;
    let parity = rs_redundancy_sparse(indicator.support(), &p.rs_indicator)?;
    let mut strings: Vec<Vec<u8>> = book.entries.iter().map(|a| a.as_slice().to_vec()).collect();
    strings[0].extend_from_slice(parity.as_slice());
    let mut d2 = msg.d2.as_slice();
    for (i, start, end) in p.payload_segments() {
        debug_assert_eq!(strings[i].len(), start);
        let (head, rest) = d2.split_at(end - start);
        strings[i].extend_from_slice(head);
        d2 = rest;
    }
    let body: Vec<u8> = strings.concat();
    let tail = rs_redundancy(&BitString::from_raw(body), &p.rs_tail)?;
    strings[p.m - 1].extend_from_slice(tail.as_slice());
    Ok(Word::new(strings.into_iter().map(BitString::from_raw)))
}

fn fail<T>(f: DecodeFailure) -> Result<T> {
    Err(SlicedError::decode(f))
}

pub fn subst_decode(received: &Word, p: &SubstParams) -> Result<Message> {
    let strings = received.strings();
    if strings.len() != p.m {
        return fail(DecodeFailure::MalformedWord(format!(
            "{} strings instead of {}",
            strings.len(),
            p.m
        )));
    }
    if let Some(s) = strings.iter().find(|s| s.len() != p.l) {
        return fail(DecodeFailure::MalformedWord(format!(
            "string of length {} instead of {}",
            s.len(),
            p.l
        )));
    }

    // Step 1: the string whose index has at least L' - K ones came from a_1.
    let anchors: Vec<&BitString> = strings
        .iter()
        .filter(|s| s.prefix(p.l_prime).weight() + p.k >= p.l_prime)
        .collect();
    let anchor = match anchors.len() {
        1 => anchors[0],
        0 => return fail(DecodeFailure::AnchorNotFound),
        n => return fail(DecodeFailure::AnchorAmbiguous(n)),
    };

    // Step 2: correct the indicator vector of the received indices.
    let received_indices: Vec<BitString> = strings.iter().map(|s| s.prefix(p.l_prime)).collect();
    let noisy = IndicatorVector::new(p.l_prime, &received_indices)?;
    let parity = anchor.slice(p.l_prime, p.l_prime + p.indicator_budget());
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
        metric: Metric::Hamming,
    };
    let d1 = fhs_inv(&book)?;

    // Step 3: each received string belongs to the unique index within K.
    let mut order: Vec<Option<&BitString>> = vec![None; p.m];
    for (s, idx) in strings.iter().zip(&received_indices) {
        let mut hits = book
            .entries
            .iter()
            .enumerate()
            .filter(|(_, a)| crate::bits::hamming(a.as_slice(), idx.as_slice()) <= p.k);
        let i = match (hits.next(), hits.next()) {
            (Some((i, _)), None) => i,
            (None, _) => {
                return fail(DecodeFailure::Matching(format!(
                    "no index within {} of {idx}",
                    p.k
                )))
            }
            _ => {
                return fail(DecodeFailure::Matching(format!(
                    "several indices within {} of {idx}",
                    p.k
                )))
            }
        };
        if order[i].replace(s).is_some() {
            return fail(DecodeFailure::Matching(format!(
                "two strings claim index {}",
                book.entries[i]
            )));
        }
    }
    let ordered: Vec<&BitString> = order
        .into_iter()
        .map(|s| s.expect("M strings matched injectively"))
        .collect();

    // Step 4: correct the concatenation and read the payload back.
    let joined = BitString::concat(ordered.iter().copied());
    let fixed = rs_correct(&joined, &p.rs_tail)?;
    let mut d2 = Vec::with_capacity(p.d2_bits);
    for (i, start, end) in p.payload_segments() {
        d2.extend_from_slice(&fixed.as_slice()[i * p.l + start..i * p.l + end]);
    }
    let msg = Message {
        d1,
        d2: BitString::from_raw(d2),
    };

    // Never hand back a message whose codeword is not within K of the input.
    let again = subst_encode(&msg, p)?;
    let distance: usize = again
        .strings()
        .iter()
        .zip(&ordered)
        .map(|(x, y)| crate::bits::hamming(x.as_slice(), y.as_slice()))
        .sum();
    if distance > p.k {
        return fail(DecodeFailure::ReedSolomon(format!(
            "decoded codeword is {distance} substitutions away"
        )));
    }
    Ok(msg)
}

/// Achieved redundancy against the leading terms of the substitution bound.
#[derive(Clone, Debug, Serialize)]
pub struct SubstRedundancyReport {
    pub m: usize,
    pub l: usize,
    pub k: usize,
    pub l_prime: usize,
    /// `log2 C(2^L, M)`.
    pub log2_words: f64,
    pub log2_d1_domain: f64,
    pub d2_bits: usize,
    /// `log2 C(2^L, M) - log2 d1_domain - d2_bits`.
    pub r_achieved: f64,
    /// `2K log2(ML)`.
    pub term_error_log: f64,
    /// `(12K + 2) log2 M`.
    pub term_index_log: f64,
    /// Bits given up by packing `d1` into `floor(log2 d1_domain)` raw bits.
    pub packing_loss: f64,
}

pub fn redundancy_report(p: &SubstParams) -> SubstRedundancyReport {
    let words = binomial(&(BigUint::from(1u8) << p.l), p.m as u64);
    let log2_words = log2_big(&words);
    let log2_d1_domain = log2_big(&p.d1_domain);
    let ml = (p.m * p.l) as f64;
    SubstRedundancyReport {
        m: p.m,
        l: p.l,
        k: p.k,
        l_prime: p.l_prime,
        log2_words,
        log2_d1_domain,
        d2_bits: p.d2_bits,
        r_achieved: log2_words - log2_d1_domain - p.d2_bits as f64,
        term_error_log: 2.0 * p.k as f64 * ml.log2(),
        term_index_log: (12 * p.k + 2) as f64 * (p.m as f64).log2(),
        packing_loss: log2_d1_domain - crate::message::d1_packed_bits(&p.d1_domain) as f64,
    }
}

/// One `(M, K)` case of the index-length inequalities.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndexLenCase {
    pub m: usize,
    pub k: usize,
    pub l_prime: usize,
    /// `M^2 L'^{2K} <= 2^{L' - 1}`.
    pub chain_holds: bool,
    /// `M Q (M + 1) <= 2^{L'}`.
    pub gap_holds: bool,
}

/// Checks both inequalities for a given (possibly forced) `L'`.
pub fn index_len_case(m: usize, k: usize, l_prime: usize) -> IndexLenCase {
    let pow = |e: usize| BigUint::from(1u8) << e;
    let chain_holds = l_prime >= 1
        && BigUint::from(m * m) * BigUint::from(l_prime).pow(2 * k as u32) <= pow(l_prime - 1);
    let gap_holds = hamming_ball_size(l_prime, k) * m * (m + 1) <= pow(l_prime);
    IndexLenCase {
        m,
        k,
        l_prime,
        chain_holds,
        gap_holds,
    }
}

pub fn index_len_cases(ms: &[usize], ks: &[usize]) -> Vec<IndexLenCase> {
    ms.iter()
        .flat_map(|&m| {
            ks.iter()
                .map(move |&k| index_len_case(m, k, index_len(m, k)))
        })
        .collect()
}

/// True iff both inequalities hold for every `(M, K)` in range.
pub fn index_len_bound_check(ms: &[usize], ks: &[usize]) -> bool {
    index_len_cases(ms, ks)
        .iter()
        .all(|c| c.chain_holds && c.gap_holds)
}

/// `C(2^L' - MG + M - 1, M - 1) >= ceil((2^L' - MG)^{M-1} / (M-1)!)`.
pub fn counting_bound_holds(l_prime: usize, m: usize, gap: &BigUint) -> bool {
    let total = BigUint::from(1u8) << l_prime;
    let used = gap * m;
    if total <= used {
        return false;
    }
    let base = total - used;
    let fact: BigUint = (1..m as u64).map(BigUint::from).product();
    let lower = (base.pow(m as u32 - 1) + &fact - 1u8) / fact;
    gap_domain_size(l_prime, m, gap) >= lower
}
