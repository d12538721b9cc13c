//! Single-string `K`-deletion codes: the encoder/decoder pair used to protect
//! the indicator parity and the payload of the deletion pipeline.
//!
//! Three codecs are registered:
//!
//! * `none`: identity, `K = 0` only.
//! * `vt1`: systematic Varshamov-Tenengolts code for `K <= 1`. A codeword has
//!   length `N`, the smallest value with `N - ceil(log2(N+1)) = n`. Check bits
//!   sit at the 1-based positions `1, 2, 4, ...` that are `<= N`, message bits
//!   fill the remaining positions in order, and the check bits spell the
//!   binary expansion of the residue that makes `sum i*x_i = 0 mod (N+1)`.
//! * `brute{n}k{K}`: a code over exactly `n` message bits found by exhaustive
//!   search for the shortest length holding `2^n` codewords with pairwise
//!   disjoint `K`-deletion balls. Message value `v` maps to the `v`-th
//!   codeword in search order.
//!
//! Every decoder also accepts a mix of deletions and insertions totalling at
//! most `K`, and checks its output by re-encoding.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use crate::bits::{self, BitString};
use crate::error::{DecodeFailure, Result, SlicedError};

/// Node budget of the brute-force search at each candidate length.
pub const BRUTE_NODE_BUDGET: u64 = 20_000_000;
/// Longest codeword the brute-force search will consider.
pub const BRUTE_MAX_LEN: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DeletionCodec {
    None,
    Vt1,
    Brute { n: usize, k: usize },
}

impl FromStr for DeletionCodec {
    type Err = SlicedError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => return Ok(Self::None),
            "vt1" => return Ok(Self::Vt1),
            _ => {}
        }
        let parsed = s
            .strip_prefix("brute")
            .and_then(|rest| rest.split_once('k'))
            .and_then(|(n, k)| Some((n.parse().ok()?, k.parse().ok()?)));
        match parsed {
            Some((n, k)) => Ok(Self::Brute { n, k }),
            None => Err(SlicedError::Unsupported(format!("unknown codec {s:?}"))),
        }
    }
}

impl fmt::Display for DeletionCodec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::None => write!(f, "none"),
            Self::Vt1 => write!(f, "vt1"),
            Self::Brute { n, k } => write!(f, "brute{n}k{k}"),
        }
    }
}

/// Sizing of one codec instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DeletionCodecProfile {
    pub codec: DeletionCodec,
    pub n: usize,
    pub k: usize,
    pub big_n: usize,
}

impl DeletionCodecProfile {
    pub fn new(codec: DeletionCodec, n: usize, k: usize) -> Result<Self> {
        let big_n = codec.codeword_len(n, k)?;
        Ok(Self { codec, n, k, big_n })
    }

    pub fn overhead(&self) -> usize {
        self.big_n - self.n
    }

    pub fn encode(&self, msg: &BitString) -> Result<BitString> {
        self.codec.encode(msg, self.k)
    }

    pub fn decode(&self, received: &BitString) -> Result<BitString> {
        self.codec.decode(received, self.n, self.k)
    }
}

impl DeletionCodec {
    /// Errors unless the codec handles `n` message bits at radius `k`.
    pub fn check_support(&self, n: usize, k: usize) -> Result<()> {
        let ok = match *self {
            Self::None => k == 0,
            Self::Vt1 => k <= 1,
            Self::Brute { n: bn, k: bk } => bn == n && bk == k && k <= 2 && n <= 6,
        };
        if ok {
            Ok(())
        } else {
            Err(SlicedError::Unsupported(format!(
                "codec {self} does not support n = {n}, K = {k}"
            )))
        }
    }

    /// Codeword length `N` for `n` message bits.
    pub fn codeword_len(&self, n: usize, k: usize) -> Result<usize> {
        self.check_support(n, k)?;
        match self {
            Self::None => Ok(n),
            Self::Vt1 => Ok(vt_len(n)),
            Self::Brute { .. } => Ok(brute_code(n, k)?.big_n),
        }
    }

    pub fn encode(&self, msg: &BitString, k: usize) -> Result<BitString> {
        self.check_support(msg.len(), k)?;
        match self {
            Self::None => Ok(msg.clone()),
            Self::Vt1 => Ok(vt_encode(msg)),
            Self::Brute { .. } => {
                let code = brute_code(msg.len(), k)?;
                let v = msg.to_u64().expect("n <= 6") as usize;
                Ok(code.codewords[v].clone())
            }
        }
    }

    /// Recovers the `n`-bit message from a codeword hit by at most `k`
    /// deletions and insertions in total.
    pub fn decode(&self, received: &BitString, n: usize, k: usize) -> Result<BitString> {
        self.check_support(n, k)?;
        let fail = |msg: String| Err(SlicedError::decode(DecodeFailure::Codec(msg)));
        match self {
            Self::None => {
                if received.len() != n {
                    return fail(format!("expected {n} bits, got {}", received.len()));
                }
                Ok(received.clone())
            }
            Self::Vt1 => {
                let msg = vt_decode(received, n, k)?;
                Ok(msg)
            }
            Self::Brute { .. } => {
                let code = brute_code(n, k)?;
                let mut hits = code.codewords.iter().enumerate().filter(|(_, c)| {
                    bits::deletion_distance(c.as_slice(), received.as_slice()) <= k
                });
                match (hits.next(), hits.next()) {
                    (Some((v, _)), None) => BitString::from_u64(v as u64, n),
                    (None, _) => fail(format!("no codeword within distance {k}")),
                    (Some(_), Some(_)) => fail("several codewords within range".into()),
                }
            }
        }
    }
}

/// `N` of a `K`-deletion code over `n` bits for `codec` (e.g. `"vt1"`).
pub fn codec_overhead(codec: &str, n: usize, k: usize) -> Result<usize> {
    codec.parse::<DeletionCodec>()?.codeword_len(n, k)
}

pub fn codec_encode(codec: &str, msg: &BitString, k: usize) -> Result<BitString> {
    codec.parse::<DeletionCodec>()?.encode(msg, k)
}

pub fn codec_decode(codec: &str, received: &BitString, n: usize, k: usize) -> Result<BitString> {
    codec.parse::<DeletionCodec>()?.decode(received, n, k)
}

fn check_count(big_n: usize) -> usize {
    (usize::BITS - big_n.leading_zeros()) as usize
}

fn vt_len(n: usize) -> usize {
    if n == 0 {
        return 0;
    }
    let mut big_n = n;
    while big_n - check_count(big_n) < n {
        big_n += 1;
    }
    big_n
}

fn is_check_position(pos1: usize) -> bool {
    pos1.is_power_of_two()
}

fn vt_syndrome(x: &[u8]) -> usize {
    let modulus = x.len() + 1;
    x.iter()
        .enumerate()
        .filter(|(_, &b)| b == 1)
        .map(|(i, _)| i + 1)
        .sum::<usize>()
        % modulus
}

fn vt_encode(msg: &BitString) -> BitString {
    let big_n = vt_len(msg.len());
    let mut out = vec![0u8; big_n];
    let mut data = msg.as_slice().iter();
    for (i, slot) in out.iter_mut().enumerate() {
        if !is_check_position(i + 1) {
            *slot = *data.next().expect("sized by vt_len");
        }
    }
    let residue = (big_n + 1 - vt_syndrome(&out)) % (big_n + 1);
    let mut bit = 0;
    while (1usize << bit) <= big_n {
        out[(1 << bit) - 1] = ((residue >> bit) & 1) as u8;
        bit += 1;
    }
    BitString::from_raw(out)
}

fn vt_extract(x: &[u8]) -> BitString {
    BitString::from_raw(
        x.iter()
            .enumerate()
            .filter(|(i, _)| !is_check_position(i + 1))
            .map(|(_, &b)| b)
            .collect(),
    )
}

/// All length-`N` strings with zero syndrome at indel distance one from `y`.
fn vt_candidates(y: &[u8], big_n: usize) -> Vec<Vec<u8>> {
    let modulus = big_n + 1;
    let base: usize = y
        .iter()
        .enumerate()
        .filter(|(_, &b)| b == 1)
        .map(|(i, _)| i + 1)
        .sum();
    let mut ones_from = vec![0usize; y.len() + 1];
    for i in (0..y.len()).rev() {
        ones_from[i] = ones_from[i + 1] + y[i] as usize;
    }
    let mut out = Vec::new();
    if y.len() + 1 == big_n {
        for (p, &ones) in ones_from.iter().enumerate() {
            for b in 0..2u8 {
                let s = base + b as usize * (p + 1) + ones;
                if s.is_multiple_of(modulus) {
                    let mut c = y.to_vec();
                    c.insert(p, b);
                    out.push(c);
                }
            }
        }
    } else if y.len() == big_n + 1 {
        for (p, &bit) in y.iter().enumerate() {
            let s = base - bit as usize * (p + 1) - ones_from[p + 1];
            if s.is_multiple_of(modulus) {
                let mut c = y.to_vec();
                c.remove(p);
                out.push(c);
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

fn vt_decode(received: &BitString, n: usize, k: usize) -> Result<BitString> {
    let fail = |msg: String| Err(SlicedError::decode(DecodeFailure::Codec(msg)));
    let big_n = vt_len(n);
    let y = received.as_slice();
    let candidate = if y.len() == big_n {
        if vt_syndrome(y) != 0 {
            return fail("nonzero VT syndrome at full length".into());
        }
        y.to_vec()
    } else if k == 1 && (y.len() + 1 == big_n || y.len() == big_n + 1) {
        let mut found = vt_candidates(y, big_n);
        match found.len() {
            1 => found.pop().expect("one candidate"),
            0 => return fail("no VT codeword within one indel".into()),
            c => return fail(format!("{c} VT codewords within one indel")),
        }
    } else {
        return fail(format!("length {} is not within {k} of {big_n}", y.len()));
    };
    let msg = vt_extract(&candidate);
    if vt_encode(&msg).as_slice() != candidate.as_slice() {
        return fail("check bits disagree with the message".into());
    }
    Ok(msg)
}

/// A code found by [`DeletionCodec::Brute`]'s search.
#[derive(Debug)]
pub struct BruteCode {
    pub big_n: usize,
    pub codewords: Vec<BitString>,
    /// True when every shorter length was ruled out within the node budget.
    pub minimal: bool,
}

/// Runs (or fetches from cache) the search for `2^n` codewords at radius `k`.
pub fn brute_code(n: usize, k: usize) -> Result<Arc<BruteCode>> {
    type Cache = Mutex<HashMap<(usize, usize), Arc<BruteCode>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(code) = cache.lock().expect("cache lock").get(&(n, k)) {
        return Ok(code.clone());
    }
    let target = 1usize << n;
    let mut minimal = true;
    for big_n in n..=BRUTE_MAX_LEN {
        let (found, exhausted) = search_length(big_n, k, target);
        if let Some(idx) = found {
            let codewords = idx
                .into_iter()
                .map(|v| BitString::from_u64(v as u64, big_n).expect("fits"))
                .collect();
            let code = Arc::new(BruteCode {
                big_n,
                codewords,
                minimal,
            });
            cache
                .lock()
                .expect("cache lock")
                .insert((n, k), code.clone());
            return Ok(code);
        }
        minimal &= exhausted;
    }
    Err(SlicedError::Unsupported(format!(
        "no {k}-deletion code with {target} codewords up to length {BRUTE_MAX_LEN}"
    )))
}

type Bitset = Vec<u64>;

fn count(set: &Bitset) -> usize {
    set.iter().map(|w| w.count_ones() as usize).sum()
}

/// Depth-first search for `target` strings of length `big_n`, pairwise
/// sharing no subsequence of length `big_n - k`. Candidates are tried in
/// increasing order, so the first branch is the lexicographic greedy code.
/// Returns the code if found and whether the search finished within budget.
fn search_length(big_n: usize, k: usize, target: usize) -> (Option<Vec<usize>>, bool) {
    let v = 1usize << big_n;
    if target > v {
        return (None, true);
    }
    if big_n <= k {
        let found = (target == 1).then(|| vec![0]);
        return (found, true);
    }
    let words = v.div_ceil(64);
    let strings: Vec<Vec<u8>> = (0..v)
        .map(|x| {
            BitString::from_u64(x as u64, big_n)
                .expect("fits")
                .into_vec()
        })
        .collect();
    let mut compatible = vec![vec![0u64; words]; v];
    for i in 0..v {
        for j in i + 1..v {
            if bits::lcs(&strings[i], &strings[j]) + k < big_n {
                compatible[i][j / 64] |= 1 << (j % 64);
                compatible[j][i / 64] |= 1 << (i % 64);
            }
        }
    }
    let mut all = vec![u64::MAX; words];
    if !v.is_multiple_of(64) {
        all[words - 1] = (1u64 << (v % 64)) - 1;
    }
    let mut search = Search {
        compatible: &compatible,
        target,
        nodes: 0,
        chosen: Vec::new(),
    };
    let found = search.dfs(all);
    let exhausted = search.nodes <= BRUTE_NODE_BUDGET;
    (found.then_some(search.chosen), exhausted)
}

struct Search<'a> {
    compatible: &'a [Bitset],
    target: usize,
    nodes: u64,
    chosen: Vec<usize>,
}

impl Search<'_> {
    fn dfs(&mut self, mut cand: Bitset) -> bool {
        self.nodes += 1;
        if self.chosen.len() == self.target {
            return true;
        }
        while self.chosen.len() + count(&cand) >= self.target {
            if self.nodes > BRUTE_NODE_BUDGET {
                return false;
            }
            let Some(w) = cand.iter().position(|&x| x != 0) else {
                return false;
            };
            let v = w * 64 + cand[w].trailing_zeros() as usize;
            cand[w] &= cand[w] - 1;
            let next: Bitset = cand
                .iter()
                .zip(&self.compatible[v])
                .map(|(a, b)| a & b)
                .collect();
            self.chosen.push(v);
            if self.dfs(next) {
                return true;
            }
            self.chosen.pop();
        }
        false
    }
}
