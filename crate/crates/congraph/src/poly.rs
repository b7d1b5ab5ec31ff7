//! Dense polynomials over F_q, deterministic factorization, and the text syntax
//! `c*t^e + ...` with coefficients written as integer codes.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::FieldCtx;

/// A polynomial over F_q.  `coeffs[i]` is the code of the t^i coefficient; no
/// trailing zeros, so the zero polynomial has an empty coefficient vector.
#[derive(Debug, Clone)]
pub struct Poly {
    pub ctx: Arc<FieldCtx>,
    coeffs: Vec<u32>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.ctx == other.ctx && self.coeffs == other.coeffs
    }
}
impl Eq for Poly {}

impl std::hash::Hash for Poly {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

/// f = unit * prod factors[i].0 ^ factors[i].1, factors monic irreducible,
/// sorted by (degree, coefficient code).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub unit: u32,
    pub factors: Vec<(Poly, u32)>,
}

impl Poly {
    pub fn zero(ctx: &Arc<FieldCtx>) -> Poly {
        Poly { ctx: ctx.clone(), coeffs: Vec::new() }
    }

    pub fn constant(ctx: &Arc<FieldCtx>, c: u32) -> Poly {
        let mut p = Poly { ctx: ctx.clone(), coeffs: vec![c] };
        p.trim();
        p
    }

    pub fn one(ctx: &Arc<FieldCtx>) -> Poly {
        Poly::constant(ctx, 1)
    }

    /// The variable t.
    pub fn t(ctx: &Arc<FieldCtx>) -> Poly {
        Poly { ctx: ctx.clone(), coeffs: vec![0, 1] }
    }

    pub fn monomial(ctx: &Arc<FieldCtx>, c: u32, e: usize) -> Poly {
        if c == 0 {
            return Poly::zero(ctx);
        }
        let mut coeffs = vec![0; e + 1];
        coeffs[e] = c;
        Poly { ctx: ctx.clone(), coeffs }
    }

    pub fn from_coeffs(ctx: &Arc<FieldCtx>, coeffs: Vec<u32>) -> Poly {
        let mut p = Poly { ctx: ctx.clone(), coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` stands for deg(0) = -infinity.
    pub fn deg(&self) -> Option<usize> {
        if self.coeffs.is_empty() { None } else { Some(self.coeffs.len() - 1) }
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    /// Coefficient of t^i (0 beyond the degree).
    pub fn coeff(&self, i: usize) -> u32 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn lead(&self) -> u32 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == 1
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let f = &self.ctx;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect();
        Poly::from_coeffs(f, coeffs)
    }

    pub fn neg(&self) -> Poly {
        let f = &self.ctx;
        Poly::from_coeffs(f, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.ctx);
        }
        let f = &self.ctx;
        let mut coeffs = vec![0u32; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = f.add(coeffs[i + j], f.mul(a, b));
            }
        }
        Poly::from_coeffs(f, coeffs)
    }

    pub fn scale(&self, c: u32) -> Poly {
        let f = &self.ctx;
        Poly::from_coeffs(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn divrem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let f = &self.ctx;
        let db = divisor.coeffs.len() - 1;
        let lead_inv = f.inv(divisor.lead())?;
        let mut rem = self.clone();
        let mut quot = vec![0u32; self.coeffs.len().saturating_sub(db)];
        while let Some(da) = rem.deg() {
            if da < db {
                break;
            }
            let c = f.mul(rem.lead(), lead_inv);
            quot[da - db] = c;
            for j in 0..=db {
                let v = f.sub(rem.coeffs[da - db + j], f.mul(c, divisor.coeffs[j]));
                rem.coeffs[da - db + j] = v;
            }
            rem.trim();
        }
        Ok((Poly::from_coeffs(f, quot), rem))
    }

    pub fn rem(&self, divisor: &Poly) -> Result<Poly> {
        Ok(self.divrem(divisor)?.1)
    }

    pub fn divides(&self, other: &Poly) -> bool {
        other.rem(self).map(|r| r.is_zero()).unwrap_or(false)
    }

    pub fn make_monic(&self) -> Poly {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        self.scale(self.ctx.inv(self.lead()).expect("nonzero lead"))
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.make_monic()
    }

    /// Extended gcd: returns (d, u, v) with u*self + v*other = d, d monic.
    pub fn xgcd(&self, other: &Poly) -> (Poly, Poly, Poly) {
        let f = &self.ctx;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut u0, mut u1) = (Poly::one(f), Poly::zero(f));
        let (mut v0, mut v1) = (Poly::zero(f), Poly::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1).expect("nonzero divisor");
            let u = u0.sub(&q.mul(&u1));
            let v = v0.sub(&q.mul(&v1));
            r0 = r1;
            r1 = r;
            u0 = u1;
            u1 = u;
            v0 = v1;
            v1 = v;
        }
        if r0.is_zero() {
            return (r0, u0, v0);
        }
        let c = f.inv(r0.lead()).expect("nonzero lead");
        (r0.scale(c), u0.scale(c), v0.scale(c))
    }

    pub fn derivative(&self) -> Poly {
        let f = &self.ctx;
        if self.coeffs.len() <= 1 {
            return Poly::zero(f);
        }
        let coeffs = self.coeffs[1..]
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                // multiply by (i+1) in the prime subfield
                let mut acc = 0u32;
                for _ in 0..(i as u32 + 1) % f.p() {
                    acc = f.add(acc, c);
                }
                acc
            })
            .collect();
        Poly::from_coeffs(f, coeffs)
    }

    pub fn eval(&self, x: u32) -> u32 {
        let f = &self.ctx;
        let mut acc = 0u32;
        for &c in self.coeffs.iter().rev() {
            acc = f.add(f.mul(acc, x), c);
        }
        acc
    }

    /// Substitute `other` for t (Horner); `compose(t + a)` shifts the argument.
    pub fn compose(&self, other: &Poly) -> Poly {
        let f = &self.ctx;
        let mut acc = Poly::zero(f);
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul(other).add(&Poly::constant(f, c));
        }
        acc
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(&self.ctx);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Integer code of a polynomial of degree < n: sum coeff(i) * q^i.
    pub fn code(&self, n: usize) -> u64 {
        debug_assert!(self.coeffs.len() <= n);
        let q = self.ctx.q() as u64;
        let mut code = 0u64;
        for i in (0..n).rev() {
            code = code * q + self.coeff(i) as u64;
        }
        code
    }

    pub fn from_code(ctx: &Arc<FieldCtx>, mut code: u64, n: usize) -> Poly {
        let q = ctx.q() as u64;
        let mut coeffs = Vec::with_capacity(n);
        for _ in 0..n {
            coeffs.push((code % q) as u32);
            code /= q;
        }
        Poly::from_coeffs(ctx, coeffs)
    }

    /// Monic polynomials of the given degree, in coefficient code order.
    pub fn enumerate_monic(ctx: &Arc<FieldCtx>, deg: usize) -> impl Iterator<Item = Poly> + '_ {
        let ctx = ctx.clone();
        let count = (ctx.q() as u64).pow(deg as u32);
        (0..count).map(move |m| {
            let mut p = Poly::from_code(&ctx, m, deg);
            p.coeffs.resize(deg + 1, 0);
            p.coeffs[deg] = 1;
            p
        })
    }

    /// Deterministic factorization by trial division with monic divisors
    /// enumerated by (degree, coefficient code).
    pub fn factor(&self) -> Result<Factorization> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let unit = self.lead();
        let mut rem = self.make_monic();
        let mut factors: Vec<(Poly, u32)> = Vec::new();
        let mut d = 1usize;
        while let Some(deg) = rem.deg() {
            if deg == 0 {
                break;
            }
            if d > deg / 2 {
                // what is left is irreducible
                factors.push((rem.clone(), 1));
                break;
            }
            for cand in Poly::enumerate_monic(&self.ctx, d) {
                let mut mult = 0u32;
                while cand.divides(&rem) {
                    rem = rem.divrem(&cand)?.0;
                    mult += 1;
                }
                if mult > 0 {
                    factors.push((cand, mult));
                }
            }
            d += 1;
        }
        factors.sort_by_key(|(p, _)| (p.deg().unwrap_or(0), p.code(p.coeffs.len())));
        Ok(Factorization { unit, factors })
    }

    /// True iff gcd(f, f') is constant; a vanishing derivative of a nonconstant
    /// f means f is a p-th power up to constants, hence not squarefree.
    pub fn is_squarefree(&self) -> Result<bool> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if self.is_constant() {
            return Ok(true);
        }
        let d = self.derivative();
        if d.is_zero() {
            return Ok(false);
        }
        Ok(self.gcd(&d).is_constant())
    }

    /// Parse the syntax `c*t^e + ...`; whitespace is ignored.
    pub fn parse(ctx: &Arc<FieldCtx>, text: &str) -> Result<Poly> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut acc = Poly::zero(ctx);
        for term in s.split('+') {
            if term.is_empty() {
                return Err(Error::Parse(format!("empty term in '{text}'")));
            }
            let (coeff_s, var_s) = match term.split_once('*') {
                Some((c, v)) => (Some(c), Some(v)),
                None => {
                    if term.starts_with('t') {
                        (None, Some(term))
                    } else {
                        (Some(term), None)
                    }
                }
            };
            let c = match coeff_s {
                Some(cs) => {
                    let v: u32 = cs
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad coefficient '{cs}'")))?;
                    if v >= ctx.q() {
                        return Err(Error::Parse(format!(
                            "coefficient code {v} out of range for q={}",
                            ctx.q()
                        )));
                    }
                    v
                }
                None => 1,
            };
            let e = match var_s {
                None => 0,
                Some("t") => 1,
                Some(vs) => {
                    let es = vs
                        .strip_prefix("t^")
                        .ok_or_else(|| Error::Parse(format!("bad term '{term}'")))?;
                    es.parse::<usize>().map_err(|_| Error::Parse(format!("bad exponent '{es}'")))?
                }
            };
            acc = acc.add(&Poly::monomial(ctx, c, e));
        }
        Ok(acc)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match (c, e) {
                (c, 0) => write!(f, "{c}")?,
                (1, 1) => write!(f, "t")?,
                (1, e) => write!(f, "t^{e}")?,
                (c, 1) => write!(f, "{c}*t")?,
                (c, e) => write!(f, "{c}*t^{e}")?,
            }
        }
        Ok(())
    }
}

impl Factorization {
    /// Re-multiply unit and factors; used by tests and context validation.
    pub fn product(&self, ctx: &Arc<FieldCtx>) -> Poly {
        let mut acc = Poly::constant(ctx, self.unit);
        for (p, m) in &self.factors {
            acc = acc.mul(&p.pow(*m));
        }
        acc
    }
}
