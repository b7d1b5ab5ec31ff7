//! The finite quotient ring R_g = F_q[t]/(g).
//!
//! Elements are reduced polynomials of degree < n = deg(g), encoded as integer
//! codes sum coeff(i) * q^i, so enumeration order is the coefficient code
//! order used everywhere downstream (canonical coset keys, set outputs).

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::FieldCtx;
use crate::poly::{Factorization, Poly};

/// Largest supported ring size q^n.
pub const RING_SIZE_BOUND: u64 = 1 << 20;
/// Multiplication tables can be materialized up to this size.
pub const TABLE_BOUND: u64 = 2048;
/// Tables are built eagerly below this size; larger rings build them on the
/// first `ensure_tables` call.
const EAGER_TABLE_BOUND: u64 = 256;
/// Brute-force square-class enumeration is attempted up to this unit count.
const SQUARE_BRUTE_BOUND: u64 = 1 << 20;

/// Context for R_g: the modulus, its factorization, and cached arithmetic.
#[derive(Debug)]
pub struct RgCtx {
    pub field: Arc<FieldCtx>,
    g: Poly,
    n: usize,
    factorization: Factorization,
    size: u64,
    tables: std::sync::OnceLock<(Vec<u32>, Vec<u32>)>, // (mul, add)
    unit_bits: Vec<u64>,
    unit_count: u64,
}

impl PartialEq for RgCtx {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.g == other.g
    }
}
impl Eq for RgCtx {}

/// An element of R_g, held as a code with its context.
#[derive(Debug, Clone)]
pub struct RgElem {
    pub ctx: Arc<RgCtx>,
    pub code: u64,
}

impl PartialEq for RgElem {
    fn eq(&self, other: &Self) -> bool {
        self.ctx == other.ctx && self.code == other.code
    }
}
impl Eq for RgElem {}

impl RgElem {
    /// The reduced polynomial representative (degree < n).
    pub fn rep(&self) -> Poly {
        self.ctx.lift(self.code)
    }
}

impl std::fmt::Display for RgElem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.rep())
    }
}

impl RgCtx {
    pub fn new(field: &Arc<FieldCtx>, g: Poly) -> Result<Arc<RgCtx>> {
        if g.deg().unwrap_or(0) == 0 || !g.is_monic() {
            return Err(Error::BadModulus(g.to_string()));
        }
        let n = g.deg().unwrap();
        let q = field.q() as u64;
        let size = q
            .checked_pow(n as u32)
            .filter(|&s| s <= RING_SIZE_BOUND)
            .ok_or(Error::RingTooLarge(q.saturating_pow(n as u32)))?;
        let factorization = g.factor()?;

        let mut ctx = RgCtx {
            field: field.clone(),
            g,
            n,
            factorization,
            size,
            tables: std::sync::OnceLock::new(),
            unit_bits: vec![0; (size as usize + 63) / 64],
            unit_count: 0,
        };

        for a in 0..size {
            let lifted = Poly::from_code(field, a, n);
            let d = lifted.gcd(&ctx.g);
            if d.is_constant() && !d.is_zero() {
                ctx.unit_bits[(a / 64) as usize] |= 1 << (a % 64);
                ctx.unit_count += 1;
            }
        }

        if size <= EAGER_TABLE_BOUND {
            ctx.ensure_tables();
        }
        Ok(Arc::new(ctx))
    }

    /// Materialize lookup tables for add/mul (no-op above `TABLE_BOUND`).
    pub fn ensure_tables(&self) {
        if self.size > TABLE_BOUND || self.tables.get().is_some() {
            return;
        }
        self.tables.get_or_init(|| {
            let s = self.size as usize;
            let mut mul = vec![0u32; s * s];
            let mut add = vec![0u32; s * s];
            for a in 0..self.size {
                let pa = Poly::from_code(&self.field, a, self.n);
                for b in 0..=a {
                    let pb = Poly::from_code(&self.field, b, self.n);
                    let prod = pa.mul(&pb).rem(&self.g).expect("monic").code(self.n) as u32;
                    let sum = pa.add(&pb).code(self.n) as u32;
                    mul[a as usize * s + b as usize] = prod;
                    mul[b as usize * s + a as usize] = prod;
                    add[a as usize * s + b as usize] = sum;
                    add[b as usize * s + a as usize] = sum;
                }
            }
            (mul, add)
        });
    }

    pub fn g(&self) -> &Poly {
        &self.g
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn q(&self) -> u32 {
        self.field.q()
    }
    pub fn size(&self) -> u64 {
        self.size
    }
    pub fn factorization(&self) -> &Factorization {
        &self.factorization
    }

    pub fn elem(self: &Arc<Self>, code: u64) -> RgElem {
        assert!(code < self.size);
        RgElem { ctx: self.clone(), code }
    }

    pub fn lift(&self, code: u64) -> Poly {
        Poly::from_code(&self.field, code, self.n)
    }

    pub fn reduce(&self, p: &Poly) -> u64 {
        p.rem(&self.g).expect("monic modulus").code(self.n)
    }

    /// Embed a field constant.
    #[inline]
    pub fn embed(&self, c: u32) -> u64 {
        c as u64
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        if let Some((_, t)) = self.tables.get() {
            return t[a as usize * self.size as usize + b as usize] as u64;
        }
        let q = self.field.q() as u64;
        let (mut a, mut b) = (a, b);
        let mut out = 0u64;
        let mut place = 1u64;
        for _ in 0..self.n {
            let s = self.field.add((a % q) as u32, (b % q) as u32) as u64;
            out += s * place;
            place *= q;
            a /= q;
            b /= q;
        }
        out
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        let q = self.field.q() as u64;
        let mut a = a;
        let mut out = 0u64;
        let mut place = 1u64;
        for _ in 0..self.n {
            out += self.field.neg((a % q) as u32) as u64 * place;
            place *= q;
            a /= q;
        }
        out
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if let Some((t, _)) = self.tables.get() {
            return t[a as usize * self.size as usize + b as usize] as u64;
        }
        self.reduce(&self.lift(a).mul(&self.lift(b)))
    }

    /// Scale by a field constant.
    #[inline]
    pub fn scale(&self, a: u64, c: u32) -> u64 {
        self.mul(a, c as u64)
    }

    #[inline]
    pub fn is_unit(&self, a: u64) -> bool {
        self.unit_bits[(a / 64) as usize] >> (a % 64) & 1 == 1
    }

    pub fn inv(&self, a: u64) -> Result<u64> {
        if !self.is_unit(a) {
            return Err(Error::NonUnit);
        }
        let (d, u, _) = self.lift(a).xgcd(&self.g);
        debug_assert!(d.is_constant() && !d.is_zero());
        // u * a = d mod g with d a nonzero constant
        let c = self.field.inv(d.coeff(0))?;
        Ok(self.reduce(&u.scale(c)))
    }

    pub fn pow(&self, a: u64, mut e: u64) -> u64 {
        let mut base = a;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn enumerate(&self) -> impl Iterator<Item = u64> {
        0..self.size
    }

    pub fn enumerate_units(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.size).filter(move |&a| self.is_unit(a))
    }

    pub fn unit_count(&self) -> u64 {
        self.unit_count
    }

    /// |R_g^x| from the formula q^n prod (1 - 1/q^{d_i}).
    pub fn unit_group_order(&self) -> u64 {
        let q = self.field.q() as u64;
        let mut order = 1u64;
        let mut degsum = 0usize;
        for (p, _) in &self.factorization.factors {
            let d = p.deg().unwrap();
            order *= q.pow(d as u32) - 1;
            degsum += d;
        }
        order * q.pow((self.n - degsum) as u32)
    }

    /// The subgroup F_q^x * R_g^{x2} of units, in code order.
    pub fn square_class_subgroup(&self) -> Vec<u64> {
        let mut set = std::collections::HashSet::new();
        for u in self.enumerate_units() {
            let sq = self.mul(u, u);
            for c in 1..self.field.q() {
                set.insert(self.scale(sq, c));
            }
        }
        let mut v: Vec<u64> = set.into_iter().collect();
        v.sort_unstable();
        v
    }

    /// |R_g^x : F_q^x R_g^{x2}| by brute-force subgroup enumeration and by a
    /// closed form; the two routes must agree when both run.
    ///
    /// For q even the closed form is prod_i q^{d_i * floor(n_i/2)}.  For q odd
    /// each local factor has |R_i^x : R_i^{x2}| = 2, and lambda in F_q^x is a
    /// square in F_{q^{d_i}} iff d_i is even or lambda is a square in F_q, so
    /// the index is 2^{s-1} when some d_i is odd and 2^s when all d_i are even
    /// (s = number of distinct irreducible factors).  Note that this is 1 only
    /// for s = 1 with d_1 odd; it exceeds 1 for squarefree g with s >= 2.
    pub fn square_class_index(&self) -> Result<u64> {
        let q = self.field.q() as u64;
        let closed: u64 = if q % 2 == 1 {
            let s = self.factorization.factors.len() as u32;
            let any_odd_deg =
                self.factorization.factors.iter().any(|(p, _)| p.deg().unwrap() % 2 == 1);
            if any_odd_deg {
                2u64.pow(s - 1)
            } else {
                2u64.pow(s)
            }
        } else {
            self.factorization
                .factors
                .iter()
                .map(|(p, m)| q.pow((p.deg().unwrap() as u32) * (m / 2)))
                .product()
        };
        if self.unit_count <= SQUARE_BRUTE_BOUND {
            let sub = self.square_class_subgroup();
            let brute = self.unit_count / sub.len() as u64;
            if brute != closed {
                return Err(Error::Integrity(format!(
                    "square class index mismatch: brute {brute} vs closed form {closed}"
                )));
            }
        }
        Ok(closed)
    }

    /// Coset representatives of F_q^x R_g^{x2} in R_g^x, least code first.
    pub fn unit_square_class_reps(&self) -> Vec<u64> {
        let sub = self.square_class_subgroup();
        let mut covered = std::collections::HashSet::new();
        let mut reps = Vec::new();
        for u in self.enumerate_units() {
            if covered.contains(&u) {
                continue;
            }
            reps.push(u);
            for &x in &sub {
                covered.insert(self.mul(u, x));
            }
        }
        reps
    }

    /// S = {a in R_g^x | a^2 in F_q^x}, in code order.
    pub fn s_subgroup(&self) -> Vec<u64> {
        self.enumerate_units()
            .filter(|&a| {
                let sq = self.mul(a, a);
                sq < self.field.q() as u64 && sq != 0
            })
            .collect()
    }
}
