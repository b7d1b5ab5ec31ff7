//! Arithmetic in F_{p^k}.
//!
//! Elements are encoded as integers in [0, q): the element sum c_i x^i (in the
//! generator basis) has code sum c_i p^i.  For k > 1 the modulus is fixed as the
//! lexicographically least monic irreducible of degree k, comparing coefficient
//! tuples (c_0, c_1, ...) with 0 < 1 < ... < p-1, so codes are reproducible
//! across runs and languages.  All q^2 products fit in small lookup tables.

use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest supported field size; the full multiplication table is materialized.
pub const FIELD_SIZE_BOUND: u64 = 256;

/// A finite field F_{p^k} with lookup-table arithmetic on element codes.
#[derive(Debug)]
pub struct FieldCtx {
    p: u32,
    k: u32,
    q: u32,
    /// Coefficients (c_0 .. c_k) of the modulus over F_p; `None` iff k == 1.
    modulus: Option<Vec<u32>>,
    add: Vec<u32>,
    mul: Vec<u32>,
    inv: Vec<u32>,
    neg: Vec<u32>,
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k
    }
}
impl Eq for FieldCtx {}

/// An element of F_q together with its field.
#[derive(Debug, Clone)]
pub struct FieldElem {
    pub ctx: Arc<FieldCtx>,
    pub code: u32,
}

impl PartialEq for FieldElem {
    fn eq(&self, other: &Self) -> bool {
        self.ctx == other.ctx && self.code == other.code
    }
}
impl Eq for FieldElem {}

impl FieldElem {
    pub fn add(&self, other: &FieldElem) -> FieldElem {
        FieldElem { ctx: self.ctx.clone(), code: self.ctx.add(self.code, other.code) }
    }
    pub fn mul(&self, other: &FieldElem) -> FieldElem {
        FieldElem { ctx: self.ctx.clone(), code: self.ctx.mul(self.code, other.code) }
    }
    pub fn neg(&self) -> FieldElem {
        FieldElem { ctx: self.ctx.clone(), code: self.ctx.neg(self.code) }
    }
    pub fn inv(&self) -> Result<FieldElem> {
        Ok(FieldElem { ctx: self.ctx.clone(), code: self.ctx.inv(self.code)? })
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

// ---- F_p polynomial helpers used only during context construction ----

fn fp_poly_trim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// Remainder of a by b over F_p; b must be nonzero with invertible lead.
fn fp_poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u32> = a.to_vec();
    fp_poly_trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = fp_inv(b[db], p);
    while r.len() > db {
        let da = r.len() - 1;
        let c = (r[da] * lead_inv) % p;
        for j in 0..=db {
            let idx = da - db + j;
            r[idx] = (r[idx] + p - (c * b[j]) % p) % p;
        }
        fp_poly_trim(&mut r);
        if r.is_empty() {
            break;
        }
    }
    r
}

fn fp_inv(a: u32, p: u32) -> u32 {
    // p is tiny; scan.
    (1..p).find(|&x| (x * a) % p == 1).expect("inverse in F_p")
}

/// Irreducibility over F_p by trial division by all monic divisors of degree <= k/2.
fn fp_poly_irreducible(f: &[u32], p: u32) -> bool {
    let k = f.len() - 1;
    for d in 1..=k / 2 {
        let count = (p as u64).pow(d as u32);
        for m in 0..count {
            let mut div = Vec::with_capacity(d + 1);
            let mut rest = m;
            for _ in 0..d {
                div.push((rest % p as u64) as u32);
                rest /= p as u64;
            }
            div.push(1); // monic
            if fp_poly_rem(f, &div, p).is_empty() {
                return false;
            }
        }
    }
    true
}

impl FieldCtx {
    /// Build F_{p^k}; for k > 1 the modulus is the lexicographically least
    /// monic irreducible of degree k under coefficient order (c_0, c_1, ...).
    pub fn new(p: u32, k: u32) -> Result<Arc<FieldCtx>> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if k == 0 {
            return Err(Error::BadDegree);
        }
        let q = (p as u64).checked_pow(k).filter(|&q| q <= FIELD_SIZE_BOUND);
        let q = match q {
            Some(q) => q as u32,
            None => return Err(Error::FieldTooLarge((p as u64).saturating_pow(k))),
        };

        let modulus = if k == 1 {
            None
        } else {
            let mut found = None;
            // (c_0, ..., c_{k-1}) in lexicographic order, c_0 compared first.
            let kk = k as usize;
            for m in 0..(q as u64) {
                let mut digs = vec![0u32; kk];
                let mut rest = m;
                for d in digs.iter_mut() {
                    *d = (rest % p as u64) as u32;
                    rest /= p as u64;
                }
                let mut coeffs = vec![0u32; kk + 1];
                for j in 0..kk {
                    // c_0 takes the most significant digit of m.
                    coeffs[j] = digs[kk - 1 - j];
                }
                coeffs[kk] = 1;
                if fp_poly_irreducible(&coeffs, p) {
                    found = Some(coeffs);
                    break;
                }
            }
            Some(found.expect("irreducible polynomial of every degree exists"))
        };

        let mut ctx = FieldCtx {
            p,
            k,
            q,
            modulus,
            add: Vec::new(),
            mul: Vec::new(),
            inv: Vec::new(),
            neg: Vec::new(),
        };
        ctx.build_tables();
        Ok(Arc::new(ctx))
    }

    fn digits(&self, code: u32) -> Vec<u32> {
        let mut v = Vec::with_capacity(self.k as usize);
        let mut rest = code;
        for _ in 0..self.k {
            v.push(rest % self.p);
            rest /= self.p;
        }
        v
    }

    fn code_of(&self, digits: &[u32]) -> u32 {
        let mut code = 0u32;
        for &d in digits.iter().rev() {
            code = code * self.p + d;
        }
        code
    }

    fn build_tables(&mut self) {
        let q = self.q as usize;
        self.add = vec![0; q * q];
        self.mul = vec![0; q * q];
        self.inv = vec![0; q];
        self.neg = vec![0; q];
        for a in 0..q as u32 {
            let da = self.digits(a);
            let negd: Vec<u32> = da.iter().map(|&c| (self.p - c) % self.p).collect();
            self.neg[a as usize] = self.code_of(&negd);
            for b in 0..q as u32 {
                let db = self.digits(b);
                let sum: Vec<u32> = da.iter().zip(&db).map(|(&x, &y)| (x + y) % self.p).collect();
                self.add[a as usize * q + b as usize] = self.code_of(&sum);

                // Convolve and reduce by the modulus.
                let mut prod = vec![0u32; 2 * self.k as usize];
                for (i, &x) in da.iter().enumerate() {
                    for (j, &y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % self.p;
                    }
                }
                let reduced = match &self.modulus {
                    Some(m) => {
                        let mut r = fp_poly_rem(&prod, m, self.p);
                        r.resize(self.k as usize, 0);
                        r
                    }
                    None => vec![prod[0]],
                };
                self.mul[a as usize * q + b as usize] = self.code_of(&reduced);
            }
        }
        for a in 1..q as u32 {
            self.inv[a as usize] =
                (1..q as u32).find(|&b| self.mul(a, b) == 1).expect("field inverse");
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn k(&self) -> u32 {
        self.k
    }
    pub fn q(&self) -> u32 {
        self.q
    }
    /// Modulus coefficients (c_0 .. c_k); `None` for prime fields.
    pub fn modulus(&self) -> Option<&[u32]> {
        self.modulus.as_deref()
    }

    pub fn elem(self: &Arc<Self>, code: u32) -> FieldElem {
        assert!(code < self.q);
        FieldElem { ctx: self.clone(), code }
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.add[a as usize * self.q as usize + b as usize]
    }
    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }
    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[a as usize * self.q as usize + b as usize]
    }
    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.neg[a as usize]
    }
    pub fn inv(&self, a: u32) -> Result<u32> {
        if a == 0 {
            return Err(Error::ZeroInverse);
        }
        Ok(self.inv[a as usize])
    }
    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }
    /// All q element codes in increasing order.
    pub fn enumerate(&self) -> impl Iterator<Item = u32> {
        0..self.q
    }
}
