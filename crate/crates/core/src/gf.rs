//! GF(2^w) arithmetic in polynomial basis, `2 <= w <= 32`.
//!
//! Widths up to [`TABLE_MAX_W`] use exp/log tables; wider fields multiply
//! carry-less and reduce by the modulus.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Result, SlicedError};

pub const TABLE_MAX_W: u32 = 20;

/// Primitive polynomial for each width `w`, including the `x^w` term.
/// Entry `i` is for `w = i + 2`.
pub const PRIMITIVE_POLYS: [u64; 31] = [
    0x7,
    0xB,
    0x13,
    0x25,
    0x43,
    0x83,
    0x11D,
    0x211,
    0x409,
    0x805,
    0x1053,
    0x201B,
    0x4443,
    0x8003,
    0x1100B,
    0x20009,
    0x40081,
    0x80027,
    0x100009,
    0x200005,
    0x400003,
    0x800021,
    0x1000087,
    0x2000009,
    0x4000047,
    0x8000027,
    0x10000009,
    0x20000005,
    0x40800007,
    0x80000009,
    0x100400007,
];

pub fn primitive_poly(w: u32) -> Result<u64> {
    if !(2..=32).contains(&w) {
        return Err(SlicedError::Unsupported(format!(
            "symbol width {w} outside [2, 32]"
        )));
    }
    Ok(PRIMITIVE_POLYS[(w - 2) as usize])
}

#[derive(Debug)]
pub struct Field {
    w: u32,
    poly: u64,
    order: u64,
    tables: Option<(Vec<u32>, Vec<u32>)>,
}

impl Field {
    fn build(w: u32) -> Result<Self> {
        let poly = primitive_poly(w)?;
        let order = (1u64 << w) - 1;
        let tables = (w <= TABLE_MAX_W).then(|| {
            let mut exp = vec![0u32; 2 * order as usize];
            let mut log = vec![0u32; 1 << w];
            let mut x: u64 = 1;
            for (i, e) in exp.iter_mut().take(order as usize).enumerate() {
                *e = x as u32;
                log[x as usize] = i as u32;
                x <<= 1;
                if x >> w & 1 == 1 {
                    x ^= poly;
                }
            }
            exp.copy_within(..order as usize, order as usize);
            (exp, log)
        });
        Ok(Self {
            w,
            poly,
            order,
            tables,
        })
    }

    /// Shared instance for width `w`.
    pub fn get(w: u32) -> Result<Arc<Field>> {
        static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Field>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().expect("field cache poisoned");
        if let Some(f) = guard.get(&w) {
            return Ok(f.clone());
        }
        let f = Arc::new(Self::build(w)?);
        guard.insert(w, f.clone());
        Ok(f)
    }

    pub fn width(&self) -> u32 {
        self.w
    }

    /// `2^w - 1`, the multiplicative order of the generator.
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        match &self.tables {
            Some((exp, log)) => exp[log[a as usize] as usize + log[b as usize] as usize],
            None => self.mul_slow(a, b),
        }
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        let (a, b) = (a as u64, b as u64);
        let mut prod: u64 = 0;
        for i in 0..self.w {
            if b >> i & 1 == 1 {
                prod ^= a << i;
            }
        }
        for i in (self.w..2 * self.w).rev() {
            if prod >> i & 1 == 1 {
                prod ^= self.poly << (i - self.w);
            }
        }
        prod as u32
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        if let (Some((exp, log)), true) = (&self.tables, a != 0) {
            return exp[((log[a as usize] as u64 * (e % self.order)) % self.order) as usize];
        }
        let (mut base, mut acc) = (a, 1u32);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `alpha^e` for the generator `alpha = x`.
    pub fn alpha_pow(&self, e: u64) -> u32 {
        match &self.tables {
            Some((exp, _)) => exp[(e % self.order) as usize],
            None => self.pow(2, e % self.order),
        }
    }

    pub fn inv(&self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero");
        match &self.tables {
            Some((exp, log)) => {
                exp[(self.order as usize - log[a as usize] as usize) % self.order as usize]
            }
            None => self.pow(a, self.order - 1),
        }
    }
}

/// Checks that `x` generates the multiplicative group of GF(2)[x]/(poly).
pub fn is_primitive(w: u32, poly: u64) -> bool {
    let field = Field {
        w,
        poly,
        order: (1u64 << w) - 1,
        tables: None,
    };
    let order = field.order;
    if field.pow(2, order) != 1 {
        return false;
    }
    prime_factors(order)
        .into_iter()
        .all(|p| field.pow(2, order / p) != 1)
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}
