//! Systematic Reed–Solomon parity over GF(2^w) for bit strings.
//!
//! Bits are packed MSB-first into `w`-bit symbols; the last message symbol is
//! zero padded at its tail. The codeword is the message symbols followed by
//! `2k` parity symbols, with generator roots `alpha^1 .. alpha^{2k}`. Parity
//! bits are written MSB-first and zero padded up to the profile's budget.
//!
//! Both directions work on the support of the message, so the 2^{L'}-bit
//! indicator vectors of the pipelines never need to be materialized.

use std::collections::BTreeMap;

use crate::bits::BitString;
use crate::error::{DecodeFailure, Result, SlicedError};
use crate::gf::Field;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RsProfile {
    pub n_bits: u64,
    pub k: usize,
    pub w: u32,
    pub n_symbols: u64,
    pub budget_bits: usize,
}

impl RsProfile {
    /// Smallest `w >= 2` with `w (2^w + 1) >= n_bits` whose field also holds
    /// the whole codeword, i.e. `ceil(n_bits / w) + 2k <= 2^w - 1`.
    pub fn new(n_bits: u64, k: usize, budget_bits: usize) -> Result<Self> {
        if n_bits == 0 {
            return Err(SlicedError::InvalidInput(
                "Reed-Solomon message must be nonempty".into(),
            ));
        }
        let w = (2..=32u32)
            .find(|&w| {
                let q = 1u64 << w;
                let n_symbols = n_bits.div_ceil(w as u64);
                (w as u64).saturating_mul(q + 1) >= n_bits && n_symbols + 2 * (k as u64) < q
            })
            .ok_or_else(|| {
                SlicedError::Unsupported(format!("no symbol width up to 32 fits {n_bits} bits"))
            })?;
        let parity_bits = 2 * k * w as usize;
        if parity_bits > budget_bits {
            return Err(SlicedError::Infeasible(format!(
                "Reed-Solomon parity needs 2k*w = {parity_bits} bits but the budget is {budget_bits}"
            )));
        }
        Ok(Self {
            n_bits,
            k,
            w,
            n_symbols: n_bits.div_ceil(w as u64),
            budget_bits,
        })
    }

    pub fn q(&self) -> u64 {
        1 << self.w
    }

    pub fn parity_bits(&self) -> usize {
        2 * self.k * self.w as usize
    }

    fn codeword_symbols(&self) -> u64 {
        self.n_symbols + 2 * self.k as u64
    }
}

/// Sparse message symbols keyed by symbol index.
fn pack_sparse(ones: impl IntoIterator<Item = u64>, p: &RsProfile) -> Result<BTreeMap<u64, u32>> {
    let w = p.w as u64;
    let mut syms = BTreeMap::new();
    for pos in ones {
        if pos >= p.n_bits {
            return Err(SlicedError::OutOfRange(format!(
                "bit {pos} beyond message length {}",
                p.n_bits
            )));
        }
        *syms.entry(pos / w).or_insert(0u32) |= 1 << (w - 1 - pos % w);
    }
    Ok(syms)
}

fn ones_of(bits: &[u8]) -> impl Iterator<Item = u64> + '_ {
    bits.iter()
        .enumerate()
        .filter(|(_, &b)| b == 1)
        .map(|(i, _)| i as u64)
}

fn symbols_to_bits(symbols: &[u32], w: u32, out: &mut Vec<u8>) {
    for &s in symbols {
        for i in (0..w).rev() {
            out.push((s >> i & 1) as u8);
        }
    }
}

fn generator(field: &Field, k: usize) -> Vec<u32> {
    let mut g = vec![1u32];
    for i in 1..=2 * k as u64 {
        let root = field.alpha_pow(i);
        let mut next = vec![0u32; g.len() + 1];
        for (d, &c) in g.iter().enumerate() {
            next[d + 1] ^= c;
            next[d] ^= field.mul(c, root);
        }
        g = next;
    }
    g
}

/// `a * b mod g` for polynomials of degree < deg g, low degree first.
fn mulmod(field: &Field, a: &[u32], b: &[u32], g: &[u32]) -> Vec<u32> {
    let n = g.len() - 1;
    let mut prod = vec![0u32; 2 * n];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] ^= field.mul(x, y);
        }
    }
    reduce(field, prod, g)
}

fn reduce(field: &Field, mut p: Vec<u32>, g: &[u32]) -> Vec<u32> {
    let n = g.len() - 1;
    for d in (n..p.len()).rev() {
        let c = p[d];
        if c != 0 {
            for (j, &gj) in g.iter().enumerate() {
                p[d - n + j] ^= field.mul(c, gj);
            }
        }
    }
    p.truncate(n);
    p.resize(n, 0);
    p
}

/// Remainder of `sum_j v_j x^{deg_j}` modulo the monic `g`.
fn remainder(field: &Field, terms: &BTreeMap<u64, u32>, p: &RsProfile, g: &[u32]) -> Vec<u32> {
    let n = 2 * p.k;
    let total = p.codeword_symbols();
    let degree = |j: u64| total - 1 - j;
    let dense_cost = p.n_symbols as usize * n;
    let sparse_cost = terms.len() * 64 * n * n;
    if sparse_cost < dense_cost {
        // x^{2^b} mod g, then one product per set exponent bit.
        let mut x_pow = vec![0u32; n];
        if n == 1 {
            x_pow[0] = g[0];
        } else {
            x_pow[1] = 1;
        }
        let mut powers = Vec::with_capacity(64);
        for _ in 0..64 {
            powers.push(x_pow.clone());
            x_pow = mulmod(field, &x_pow, &x_pow, g);
        }
        let mut rem = vec![0u32; n];
        for (&j, &v) in terms {
            let mut acc = vec![0u32; n];
            acc[0] = 1;
            let e = degree(j);
            for (b, pw) in powers.iter().enumerate() {
                if e >> b & 1 == 1 {
                    acc = mulmod(field, &acc, pw, g);
                }
            }
            for (r, a) in rem.iter_mut().zip(acc) {
                *r ^= field.mul(a, v);
            }
        }
        rem
    } else {
        // LFSR division of m(x) x^{2k} by g(x).
        let mut reg = vec![0u32; n];
        for j in 0..p.n_symbols {
            let m = terms.get(&j).copied().unwrap_or(0);
            let fb = m ^ reg[n - 1];
            for d in (1..n).rev() {
                reg[d] = reg[d - 1] ^ field.mul(fb, g[d]);
            }
            reg[0] = field.mul(fb, g[0]);
        }
        reg
    }
}

fn parity_from_terms(terms: &BTreeMap<u64, u32>, p: &RsProfile) -> Result<BitString> {
    let mut out = Vec::with_capacity(p.budget_bits);
    if p.k > 0 {
        let field = Field::get(p.w)?;
        let g = generator(&field, p.k);
        let rem = remainder(&field, terms, p, &g);
        let parity: Vec<u32> = rem.iter().rev().copied().collect();
        symbols_to_bits(&parity, p.w, &mut out);
    }
    out.resize(p.budget_bits, 0);
    Ok(BitString::from_raw(out))
}

/// Parity bits (padded to the budget) for `msg`.
pub fn rs_redundancy(msg: &BitString, p: &RsProfile) -> Result<BitString> {
    if msg.len() as u64 != p.n_bits {
        return Err(SlicedError::LengthMismatch {
            left: msg.len(),
            right: p.n_bits as usize,
        });
    }
    parity_from_terms(&pack_sparse(ones_of(msg.as_slice()), p)?, p)
}

/// As [`rs_redundancy`], for the message whose set bits are `ones`.
pub fn rs_redundancy_sparse(
    ones: impl IntoIterator<Item = u64>,
    p: &RsProfile,
) -> Result<BitString> {
    parity_from_terms(&pack_sparse(ones, p)?, p)
}

fn rs_fail(msg: impl Into<String>) -> SlicedError {
    SlicedError::decode(DecodeFailure::ReedSolomon(msg.into()))
}

fn syndromes(field: &Field, p: &RsProfile, msg: &BTreeMap<u64, u32>, parity: &[u32]) -> Vec<u32> {
    let total = p.codeword_symbols();
    let terms = msg
        .iter()
        .map(|(&j, &v)| (j, v))
        .chain(
            parity
                .iter()
                .enumerate()
                .map(|(t, &v)| (p.n_symbols + t as u64, v)),
        )
        .filter(|&(_, v)| v != 0);
    let mut s = vec![0u32; 2 * p.k];
    for (j, v) in terms {
        let deg = total - 1 - j;
        let x = field.alpha_pow(deg);
        let mut xi = x;
        for si in s.iter_mut() {
            *si ^= field.mul(v, xi);
            xi = field.mul(xi, x);
        }
    }
    s
}

fn berlekamp_massey(field: &Field, s: &[u32]) -> (Vec<u32>, usize) {
    let mut c = vec![1u32];
    let mut b = vec![1u32];
    let (mut l, mut m, mut bb) = (0usize, 1usize, 1u32);
    for n in 0..s.len() {
        let mut d = s[n];
        for i in 1..=l.min(c.len() - 1) {
            d ^= field.mul(c[i], s[n - i]);
        }
        if d == 0 {
            m += 1;
            continue;
        }
        let coef = field.mul(d, field.inv(bb));
        let t = c.clone();
        if c.len() < b.len() + m {
            c.resize(b.len() + m, 0);
        }
        for (i, &bi) in b.iter().enumerate() {
            c[i + m] ^= field.mul(coef, bi);
        }
        if 2 * l <= n {
            l = n + 1 - l;
            b = t;
            bb = d;
            m = 1;
        } else {
            m += 1;
        }
    }
    c.truncate(l + 1);
    (c, l)
}

fn poly_eval(field: &Field, poly: &[u32], x: u32) -> u32 {
    poly.iter().rev().fold(0, |acc, &c| field.mul(acc, x) ^ c)
}

/// Corrects up to `k` symbol errors in place; `msg` and `parity` are the
/// received symbols.
fn correct_symbols(p: &RsProfile, msg: &mut BTreeMap<u64, u32>, parity: &mut [u32]) -> Result<()> {
    if p.k == 0 {
        return Ok(());
    }
    let field = Field::get(p.w)?;
    let s = syndromes(&field, p, msg, parity);
    if s.iter().all(|&x| x == 0) {
        return Ok(());
    }
    let (lambda, l) = berlekamp_massey(&field, &s);
    if l > p.k {
        return Err(rs_fail(format!(
            "error locator degree {l} exceeds radius {}",
            p.k
        )));
    }
    let total = p.codeword_symbols();
    // Chien search: Lambda(alpha^{-deg}) for deg = 0 .. total-1.
    let steps: Vec<u32> = (0..lambda.len() as u64)
        .map(|i| field.inv(field.alpha_pow(i)))
        .collect();
    let mut terms = lambda.clone();
    let mut roots = Vec::new();
    for deg in 0..total {
        if terms.iter().fold(0, |a, &t| a ^ t) == 0 {
            roots.push(deg);
            if roots.len() > l {
                break;
            }
        }
        for (t, &st) in terms.iter_mut().zip(&steps) {
            *t = field.mul(*t, st);
        }
    }
    if roots.len() != l {
        return Err(rs_fail(format!(
            "found {} error locations for a degree-{l} locator",
            roots.len()
        )));
    }
    // Forney with first consecutive root alpha^1.
    let mut omega = vec![0u32; 2 * p.k];
    for (i, &si) in s.iter().enumerate() {
        for (j, &lj) in lambda.iter().enumerate() {
            if i + j < omega.len() {
                omega[i + j] ^= field.mul(si, lj);
            }
        }
    }
    let deriv: Vec<u32> = lambda
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| if i % 2 == 1 { c } else { 0 })
        .collect();
    for deg in roots {
        let x_inv = field.inv(field.alpha_pow(deg));
        let den = poly_eval(&field, &deriv, x_inv);
        if den == 0 {
            return Err(rs_fail("repeated error locator root"));
        }
        let mag = field.mul(poly_eval(&field, &omega, x_inv), field.inv(den));
        let j = total - 1 - deg;
        if j < p.n_symbols {
            let v = msg.entry(j).or_insert(0);
            *v ^= mag;
            if *v == 0 {
                msg.remove(&j);
            }
        } else {
            parity[(j - p.n_symbols) as usize] ^= mag;
        }
    }
    if syndromes(&field, p, msg, parity).iter().any(|&x| x != 0) {
        return Err(rs_fail("residual syndrome after correction"));
    }
    let pad = p.n_symbols * p.w as u64 - p.n_bits;
    if pad > 0 {
        if let Some(&last) = msg.get(&(p.n_symbols - 1)) {
            if last & ((1u32 << pad) - 1) != 0 {
                return Err(rs_fail("correction touches the padding of the last symbol"));
            }
        }
    }
    Ok(())
}

fn parity_symbols(parity: &BitString, p: &RsProfile) -> Result<Vec<u32>> {
    if parity.len() != p.budget_bits {
        return Err(SlicedError::LengthMismatch {
            left: parity.len(),
            right: p.budget_bits,
        });
    }
    let w = p.w as usize;
    Ok((0..2 * p.k)
        .map(|t| {
            parity.as_slice()[t * w..(t + 1) * w]
                .iter()
                .fold(0u32, |a, &b| a << 1 | b as u32)
        })
        .collect())
}

fn unpack(msg: &BTreeMap<u64, u32>, p: &RsProfile) -> Vec<u64> {
    let w = p.w as u64;
    let mut ones = Vec::new();
    for (&j, &v) in msg {
        for b in 0..w {
            if v >> (w - 1 - b) & 1 == 1 {
                ones.push(j * w + b);
            }
        }
    }
    ones
}

/// Corrects `received = message || padded parity` and returns the message.
pub fn rs_correct(received: &BitString, p: &RsProfile) -> Result<BitString> {
    let expected = p.n_bits as usize + p.budget_bits;
    if received.len() != expected {
        return Err(SlicedError::LengthMismatch {
            left: received.len(),
            right: expected,
        });
    }
    let (msg_bits, parity_bits) = received.as_slice().split_at(p.n_bits as usize);
    let ones = rs_correct_sparse(
        ones_of(msg_bits),
        &BitString::from_raw(parity_bits.to_vec()),
        p,
    )?;
    let mut out = vec![0u8; p.n_bits as usize];
    for pos in ones {
        out[pos as usize] = 1;
    }
    Ok(BitString::from_raw(out))
}

/// As [`rs_correct`], for a message given by its set bits; returns the set
/// bits of the corrected message in increasing order.
pub fn rs_correct_sparse(
    ones: impl IntoIterator<Item = u64>,
    parity: &BitString,
    p: &RsProfile,
) -> Result<Vec<u64>> {
    let mut msg = pack_sparse(ones, p)?;
    let mut par = parity_symbols(parity, p)?;
    correct_symbols(p, &mut msg, &mut par)?;
    Ok(unpack(&msg, p))
}
