//! 2x2 matrix groups over R_g in three variants, the level subgroups H_i,
//! canonical coset keys, subgroup closure, and the constructive lift back to
//! SL2(F_q[t]).
//!
//! Variants:
//! - `Sl2`: H = SL2(R_g), trivial scalar subgroup.
//! - `PglBar`: the true PGL2(F_q[t]) quotient (SL2(R_g) ⋊ F)/Z with
//!   F = diag(a, 1), a in F_q^x, and Z = F_q^x I.
//! - `PglM`: Morgenstern's PGL2(R_g) = GL2(R_g)/Z~ with Z~ = R_g^x I.
//!
//! Matrices are four ring-element codes; equality in the PGL variants is
//! equality modulo scalars, realized by `canonical_scale`.

use std::collections::HashSet;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::ring::RgCtx;
use crate::snf::{snf_2x2, PolyMat2};

/// Row-major [[a, b], [c, d]] with entries as R_g codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat2 {
    pub e: [u64; 4],
}

impl Mat2 {
    pub fn new(a: u64, b: u64, c: u64, d: u64) -> Mat2 {
        Mat2 { e: [a, b, c, d] }
    }
    pub const IDENTITY: Mat2 = Mat2 { e: [1, 0, 0, 1] };
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Sl2,
    PglBar,
    PglM,
}

impl Variant {
    pub fn name(&self) -> &'static str {
        match self {
            Variant::Sl2 => "sl2",
            Variant::PglBar => "pgl-bar",
            Variant::PglM => "pgl-m",
        }
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Variant> {
        match s {
            "sl2" => Ok(Variant::Sl2),
            "pgl-bar" => Ok(Variant::PglBar),
            "pgl-m" => Ok(Variant::PglM),
            other => Err(Error::Parse(format!("unknown variant '{other}'"))),
        }
    }
}

/// A coset h*H_i identified by its level and the minimal encoding over the
/// coset (after canonical scaling in the PGL variants).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CosetKey {
    pub level: usize,
    pub key: u128,
}

/// Above this unit-group size, canonical scaling on local rings switches from
/// lexicographic minimization to valuation-based normalization.
const SCALE_LEXMIN_BOUND: usize = 64;

/// Default cap for `group_closure`.
pub const CLOSURE_CAP_DEFAULT: usize = 1 << 24;

/// Local-ring data for the fast canonical scaling path: per-code pi-adic
/// valuations and inverses of unit parts, precomputed once.
#[derive(Debug)]
struct LocalScale {
    /// val[e] = max k with pi^k | lift(e); val[0] = n.
    val: Vec<u8>,
    /// norm[e] = inverse of the unit u with lift(e) = u * pi^val[e]; 0 at e=0.
    norm: Vec<u64>,
}

impl LocalScale {
    fn build(ring: &RgCtx, pi: &Poly) -> LocalScale {
        let size = ring.size() as usize;
        let mut val = vec![ring.n() as u8; size];
        let mut norm = vec![0u64; size];
        for e in 1..size as u64 {
            let mut lifted = ring.lift(e);
            let mut v = 0u8;
            loop {
                let (quo, rem) = lifted.divrem(pi).expect("pi nonzero");
                if !rem.is_zero() {
                    break;
                }
                lifted = quo;
                v += 1;
            }
            val[e as usize] = v;
            let u = ring.reduce(&lifted);
            norm[e as usize] = ring.inv(u).expect("unit part invertible");
        }
        LocalScale { val, norm }
    }
}

/// Matrix-group context: ring, variant, scalar subgroup, cached level data.
#[derive(Debug)]
pub struct GroupCtx {
    pub ring: Arc<RgCtx>,
    pub variant: Variant,
    /// Scalar subgroup codes (excluding 1 makes no difference; kept complete).
    scalars: Vec<u64>,
    local: Option<LocalScale>,
    subgroups: Vec<OnceLock<Arc<Vec<Mat2>>>>,
    subgroup_sets: Vec<OnceLock<Arc<HashSet<u128>>>>,
}

impl GroupCtx {
    pub fn new(ring: &Arc<RgCtx>, variant: Variant) -> Arc<GroupCtx> {
        ring.ensure_tables();
        let scalars: Vec<u64> = match variant {
            Variant::Sl2 => vec![1],
            Variant::PglBar => (1..ring.q() as u64).collect(),
            Variant::PglM => ring.enumerate_units().collect(),
        };
        let local = if variant == Variant::PglM
            && scalars.len() > SCALE_LEXMIN_BOUND
            && ring.factorization().factors.len() == 1
        {
            Some(LocalScale::build(ring, &ring.factorization().factors[0].0))
        } else {
            None
        };
        let n = ring.n().max(1);
        Arc::new(GroupCtx {
            ring: ring.clone(),
            variant,
            scalars,
            local,
            subgroups: (0..n).map(|_| OnceLock::new()).collect(),
            subgroup_sets: (0..n).map(|_| OnceLock::new()).collect(),
        })
    }

    pub fn n(&self) -> usize {
        self.ring.n()
    }
    pub fn q(&self) -> u32 {
        self.ring.q()
    }

    // ---- basic matrix operations ----

    #[inline]
    pub fn mul(&self, x: &Mat2, y: &Mat2) -> Mat2 {
        let r = &self.ring;
        let [a, b, c, d] = x.e;
        let [e, f, g, h] = y.e;
        Mat2::new(
            r.add(r.mul(a, e), r.mul(b, g)),
            r.add(r.mul(a, f), r.mul(b, h)),
            r.add(r.mul(c, e), r.mul(d, g)),
            r.add(r.mul(c, f), r.mul(d, h)),
        )
    }

    #[inline]
    pub fn det(&self, m: &Mat2) -> u64 {
        let r = &self.ring;
        r.sub(r.mul(m.e[0], m.e[3]), r.mul(m.e[1], m.e[2]))
    }

    /// Scale every entry by a ring element.
    #[inline]
    pub fn scale(&self, m: &Mat2, lambda: u64) -> Mat2 {
        let r = &self.ring;
        Mat2::new(
            r.mul(lambda, m.e[0]),
            r.mul(lambda, m.e[1]),
            r.mul(lambda, m.e[2]),
            r.mul(lambda, m.e[3]),
        )
    }

    /// Determinant-valid for this variant?
    pub fn is_valid(&self, m: &Mat2) -> bool {
        let d = self.det(m);
        match self.variant {
            Variant::Sl2 => d == 1,
            Variant::PglBar => d != 0 && d < self.q() as u64,
            Variant::PglM => self.ring.is_unit(d),
        }
    }

    pub fn check_valid(&self, m: &Mat2) -> Result<()> {
        if self.is_valid(m) {
            Ok(())
        } else {
            Err(Error::BadDeterminant {
                det: self.ring.lift(self.det(m)).to_string(),
                variant: self.variant.name().into(),
            })
        }
    }

    /// Inverse via adjugate over determinant.
    pub fn inv(&self, m: &Mat2) -> Result<Mat2> {
        let r = &self.ring;
        let d = self.det(m);
        let dinv = r.inv(d).map_err(|_| Error::Singular)?;
        let [a, b, c, dd] = m.e;
        Ok(Mat2::new(
            r.mul(dinv, dd),
            r.mul(dinv, r.neg(b)),
            r.mul(dinv, r.neg(c)),
            r.mul(dinv, a),
        ))
    }

    /// Fixed-width integer encoding; byte form is the base-p digit string of
    /// the four entries row-major, most significant digit first, so integer
    /// order and byte-lexicographic order coincide.
    #[inline]
    pub fn encode(&self, m: &Mat2) -> u128 {
        let s = self.ring.size() as u128;
        ((m.e[0] as u128 * s + m.e[1] as u128) * s + m.e[2] as u128) * s + m.e[3] as u128
    }

    pub fn decode(&self, code: u128) -> Mat2 {
        let s = self.ring.size() as u128;
        let d = (code % s) as u64;
        let c = ((code / s) % s) as u64;
        let b = ((code / (s * s)) % s) as u64;
        let a = (code / (s * s * s)) as u64;
        Mat2::new(a, b, c, d)
    }

    /// Key bytes for export: base-p digits of the four entries, row major,
    /// most significant digit first.
    pub fn key_bytes(&self, key: u128) -> Vec<u8> {
        let m = self.decode(key);
        let p = self.ring.field.p() as u64;
        let digits_per_entry = self.ring.n() * self.ring.field.k() as usize;
        let mut out = Vec::with_capacity(4 * digits_per_entry);
        for &e in &m.e {
            let mut digs = vec![0u8; digits_per_entry];
            let mut rest = e;
            for d in digs.iter_mut().rev() {
                *d = (rest % p) as u8;
                rest /= p;
            }
            out.extend_from_slice(&digs);
        }
        out
    }

    /// Representative of the scalar class of m with the least encoding (or the
    /// valuation-normalized representative on large local rings; both choices
    /// are constant and injective on scalar classes, so they induce the same
    /// coset partition).
    pub fn canonical_scale(&self, m: &Mat2) -> Mat2 {
        match self.variant {
            Variant::Sl2 => *m,
            _ => {
                if let Some(local) = &self.local {
                    return self.canonical_scale_local(m, local);
                }
                self.canonical_scale_lexmin(m)
            }
        }
    }

    pub fn canonical_scale_lexmin(&self, m: &Mat2) -> Mat2 {
        let mut best = *m;
        let mut best_code = self.encode(m);
        for &lambda in &self.scalars {
            if lambda == 1 {
                continue;
            }
            let cand = self.scale(m, lambda);
            let code = self.encode(&cand);
            if code < best_code {
                best = cand;
                best_code = code;
            }
        }
        best
    }

    /// Local rings: normalize by the first entry of minimal pi-valuation.
    /// Valuations are invariant under unit scaling, so the chosen entry (and
    /// the result) is the same for every representative of the scalar class.
    fn canonical_scale_local(&self, m: &Mat2, local: &LocalScale) -> Mat2 {
        let mut best_v = u8::MAX;
        let mut lambda = 0u64;
        for &e in &m.e {
            if e != 0 && local.val[e as usize] < best_v {
                best_v = local.val[e as usize];
                lambda = local.norm[e as usize];
                if best_v == 0 {
                    break;
                }
            }
        }
        if lambda == 0 {
            return *m; // zero matrix (not variant-valid, but total)
        }
        self.scale(m, lambda)
    }

    // ---- level subgroups ----

    fn level_check(&self, i: usize) -> Result<()> {
        if i >= self.n() {
            return Err(Error::LevelOutOfRange { level: i, max: self.n() });
        }
        Ok(())
    }

    /// Elements of H_i (canonical-scaled and deduplicated for PGL variants),
    /// sorted by encoding.  Level 0 is SL2(F_q) embedded as constants; level
    /// i >= 1 is upper triangular (a, b; 0, a^{-1}) with a in F_q^x and b over
    /// residues of polynomials of degree <= i.
    pub fn subgroup_elements(&self, i: usize) -> Result<Arc<Vec<Mat2>>> {
        self.level_check(i)?;
        Ok(self.subgroups[i]
            .get_or_init(|| {
                let sl2: Vec<Mat2> = if i == 0 {
                    self.enumerate_sl2_constants()
                } else {
                    let q = self.q() as u64;
                    let f = &self.ring.field;
                    let count = q.pow(i as u32 + 1);
                    let mut v = Vec::with_capacity(((q - 1) * count) as usize);
                    for a in 1..self.q() {
                        let ainv = f.inv(a).expect("nonzero") as u64;
                        for b in 0..count {
                            v.push(Mat2::new(a as u64, b, 0, ainv));
                        }
                    }
                    v
                };
                let out = match self.variant {
                    Variant::Sl2 => {
                        let mut v = sl2;
                        v.sort_unstable_by_key(|m| self.encode(m));
                        v
                    }
                    _ => {
                        let mut set: HashSet<Mat2> = HashSet::new();
                        for h in &sl2 {
                            for c in 1..self.q() as u64 {
                                let hf = self.mul(h, &Mat2::new(c, 0, 0, 1));
                                set.insert(self.canonical_scale(&hf));
                            }
                        }
                        let mut v: Vec<Mat2> = set.into_iter().collect();
                        v.sort_unstable_by_key(|m| self.encode(m));
                        v
                    }
                };
                Arc::new(out)
            })
            .clone())
    }

    /// Encodings of H_i for membership tests.
    pub fn subgroup_set(&self, i: usize) -> Result<Arc<HashSet<u128>>> {
        self.level_check(i)?;
        let elems = self.subgroup_elements(i)?;
        Ok(self.subgroup_sets[i]
            .get_or_init(|| Arc::new(elems.iter().map(|m| self.encode(m)).collect()))
            .clone())
    }

    fn enumerate_sl2_constants(&self) -> Vec<Mat2> {
        let f = &self.ring.field;
        let q = f.q();
        let mut v = Vec::new();
        for a in 0..q {
            for b in 0..q {
                for c in 0..q {
                    if a != 0 {
                        // d = (1 + b c) / a
                        let d = f.mul(f.add(1, f.mul(b, c)), f.inv(a).expect("nonzero"));
                        v.push(Mat2::new(a as u64, b as u64, c as u64, d as u64));
                    } else if f.mul(b, c) == f.neg(1) {
                        for d in 0..q {
                            v.push(Mat2::new(0, b as u64, c as u64, d as u64));
                        }
                    }
                }
            }
        }
        v
    }

    /// Canonical key of the coset h*H_i: minimum encoding over the coset.
    pub fn canonical_coset_key(&self, h: &Mat2, i: usize) -> Result<CosetKey> {
        self.check_valid(h)?;
        let elems = self.subgroup_elements(i)?;
        Ok(CosetKey { level: i, key: self.coset_key_unchecked(h, &elems, i) })
    }

    #[inline]
    pub fn coset_key_unchecked(&self, h: &Mat2, elems: &[Mat2], level: usize) -> u128 {
        let _ = level;
        let mut best = u128::MAX;
        for x in elems {
            let prod = self.mul(h, x);
            let code = self.encode(&self.canonical_scale(&prod));
            if code < best {
                best = code;
            }
        }
        best
    }

    /// Representatives of H_i / (H_i ∩ H_j): right-multiplying a coset h*H_i by
    /// these produces each level-j neighbor coset exactly once.
    pub fn transversal(&self, i: usize, j: usize) -> Result<Vec<Mat2>> {
        self.level_check(i)?;
        let elems = self.subgroup_elements(i)?;
        let other = self.subgroup_set(j)?;
        self.transversal_sets(&elems, &other)
    }

    /// Representatives of A / (A ∩ B) for a subgroup element list A and a
    /// subgroup membership set B (encodings of canonical-scaled elements).
    pub fn transversal_sets(&self, elems: &[Mat2], other: &HashSet<u128>) -> Result<Vec<Mat2>> {
        let mut reps: Vec<Mat2> = Vec::new();
        'outer: for x in elems.iter() {
            for r in &reps {
                let rinv = self.inv(r)?;
                let m = self.canonical_scale(&self.mul(&rinv, x));
                if other.contains(&self.encode(&m)) {
                    continue 'outer;
                }
            }
            reps.push(*x);
        }
        Ok(reps)
    }

    /// The cusp subgroup U: upper triangular (a, b; 0, a^{-1}) with a in F_q^x
    /// and b over all of R_g (for the PGL variants, times F modulo scalars).
    /// Coincides with H_{n-1} when n >= 2; strictly smaller than H_0 at n = 1.
    pub fn u_subgroup_elements(&self) -> Arc<Vec<Mat2>> {
        if self.n() >= 2 {
            return self.subgroup_elements(self.n() - 1).expect("level in range");
        }
        let q = self.q() as u64;
        let f = &self.ring.field;
        let mut sl2 = Vec::new();
        for a in 1..self.q() {
            let ainv = f.inv(a).expect("nonzero") as u64;
            for b in 0..self.ring.size() {
                sl2.push(Mat2::new(a as u64, b, 0, ainv));
            }
        }
        let mut v: Vec<Mat2> = match self.variant {
            Variant::Sl2 => sl2,
            _ => {
                let mut set: HashSet<Mat2> = HashSet::new();
                for h in &sl2 {
                    for c in 1..q {
                        let hf = self.mul(h, &Mat2::new(c, 0, 0, 1));
                        set.insert(self.canonical_scale(&hf));
                    }
                }
                set.into_iter().collect()
            }
        };
        v.sort_unstable_by_key(|m| self.encode(m));
        Arc::new(v)
    }

    // ---- order formulas ----

    /// |H| = q^{3n} * prod over distinct irreducible factor degrees d_i of
    /// (1 - q^{-2 d_i}); the same for all three variants.
    pub fn group_order(&self) -> u128 {
        let q = self.q() as u128;
        let n = self.n() as u32;
        let d_sum: u32 = self
            .ring
            .factorization()
            .factors
            .iter()
            .map(|(f, _)| f.deg().expect("irreducible factor nonzero") as u32)
            .sum();
        let mut order = q.pow(3 * n - 2 * d_sum);
        for (f, _) in &self.ring.factorization().factors {
            let d = f.deg().expect("nonzero") as u32;
            order *= q.pow(2 * d) - 1;
        }
        order
    }

    /// |H_0| = q(q^2 - 1); |H_i| = (q-1) q^{i+1} for 1 <= i <= n-1.
    pub fn subgroup_order(&self, i: usize) -> u128 {
        let q = self.q() as u128;
        if i == 0 {
            q * (q * q - 1)
        } else {
            (q - 1) * q.pow(i as u32 + 1)
        }
    }

    /// |L_i| = |H| / |H_i| for i < n; |H| / ((q-1) q^n) on the rays i >= n.
    pub fn level_size(&self, i: usize) -> u128 {
        let q = self.q() as u128;
        if i < self.n() {
            self.group_order() / self.subgroup_order(i)
        } else {
            self.group_order() / ((q - 1) * q.pow(self.n() as u32))
        }
    }

    /// Number of cusps: |H| / ((q-1) q^n), which equals |L_{n-1}| for n >= 2.
    pub fn cusp_count(&self) -> u128 {
        let q = self.q() as u128;
        self.group_order() / ((q - 1) * q.pow(self.n() as u32))
    }

    /// Breadth-first closure of the generated subgroup (modulo scalars for the
    /// PGL variants).  Generators must be closed under inversion, which holds
    /// for unions of the level subgroups.  Errors with `ClosureOverflow` once
    /// more than `cap` elements appear.
    pub fn group_closure(&self, generators: &[Mat2], cap: usize) -> Result<Vec<Mat2>> {
        let mut seen: HashSet<u128> = HashSet::new();
        let start = self.canonical_scale(&Mat2::IDENTITY);
        seen.insert(self.encode(&start));
        let mut frontier = vec![start];
        let gens: Vec<Mat2> = generators.iter().map(|g| self.canonical_scale(g)).collect();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for m in &frontier {
                for g in &gens {
                    for prod in [self.mul(m, g), self.mul(g, m)] {
                        let c = self.canonical_scale(&prod);
                        let code = self.encode(&c);
                        if seen.insert(code) {
                            if seen.len() > cap {
                                return Err(Error::ClosureOverflow(cap));
                            }
                            next.push(c);
                        }
                    }
                }
            }
            frontier = next;
        }
        let mut out: Vec<Mat2> = seen.into_iter().map(|c| self.decode(c)).collect();
        out.sort_unstable();
        Ok(out)
    }

    /// Generators of ⟨H_0, H_1⟩ for this variant.
    pub fn h01_generators(&self) -> Result<Vec<Mat2>> {
        let mut gens: Vec<Mat2> = self.subgroup_elements(0)?.as_ref().clone();
        if self.n() >= 2 {
            gens.extend(self.subgroup_elements(1)?.iter().copied());
        }
        Ok(gens)
    }

    /// Compact inverse-closed generating set of ⟨H_0, H_1⟩: elementary
    /// matrices E12(c), E21(c) generate H_0 = SL2(F_q); E12(c t) and the
    /// diagonal torus fill out H_1; the PGL variants add F = diag(c, 1).
    /// Much smaller than the full element lists, same closure.
    pub fn h01_small_generators(&self) -> Vec<Mat2> {
        let q = self.q() as u64;
        let f = &self.ring.field;
        let mut gens = Vec::new();
        for c in 1..q {
            gens.push(Mat2::new(1, c, 0, 1));
            gens.push(Mat2::new(1, 0, c, 1));
            if self.n() >= 2 {
                gens.push(Mat2::new(1, c * q, 0, 1)); // upper entry c*t
            }
        }
        for a in 2..self.q() {
            gens.push(Mat2::new(a as u64, 0, 0, f.inv(a).expect("nonzero") as u64));
        }
        if self.variant != Variant::Sl2 {
            for c in 2..q {
                gens.push(Mat2::new(c, 0, 0, 1));
            }
        }
        gens
    }

    /// Generators of the full group H / H-bar / H-tilde: elementary matrices
    /// over a spanning set of R_g, plus determinant representatives for the
    /// PGL variants.
    pub fn full_group_generators(&self) -> Vec<Mat2> {
        let q = self.q() as u64;
        let mut gens = Vec::new();
        for j in 0..self.n() {
            for c in 1..q {
                let r = c * q.pow(j as u32); // code of c * t^j
                gens.push(Mat2::new(1, r, 0, 1));
                gens.push(Mat2::new(1, 0, r, 1));
            }
        }
        match self.variant {
            Variant::Sl2 => {}
            Variant::PglBar => {
                for c in 2..q {
                    gens.push(Mat2::new(c, 0, 0, 1));
                }
            }
            Variant::PglM => {
                for u in self.ring.enumerate_units() {
                    if u != 1 {
                        gens.push(Mat2::new(u, 0, 0, 1));
                    }
                }
            }
        }
        gens
    }

    /// T = {a in S | diag(a^{-1}, a) lies in the given SL2 closure}.
    pub fn t_subgroup(&self, closure: &HashSet<u128>) -> Vec<u64> {
        debug_assert_eq!(self.variant, Variant::Sl2);
        self.ring
            .s_subgroup()
            .into_iter()
            .filter(|&a| {
                let ainv = self.ring.inv(a).expect("unit");
                closure.contains(&self.encode(&Mat2::new(ainv, 0, 0, a)))
            })
            .collect()
    }

    // ---- lift to SL2(F_q[t]) ----

    /// Constructive section of SL2(F_q[t]) -> SL2(R_g): returns A with
    /// det(A) = 1 exactly in F_q[t] and A ≡ a_bar mod g.
    pub fn sl2_lift(&self, a_bar: &Mat2) -> Result<PolyMat2> {
        let r = &self.ring;
        if self.det(a_bar) != 1 {
            return Err(Error::BadDeterminant {
                det: r.lift(self.det(a_bar)).to_string(),
                variant: "sl2".into(),
            });
        }
        let f = &r.field;
        let lift = PolyMat2::new(
            r.lift(a_bar.e[0]),
            r.lift(a_bar.e[1]),
            r.lift(a_bar.e[2]),
            r.lift(a_bar.e[3]),
        );
        let (u, d, v) = snf_2x2(&lift);
        let (a, dd) = (d.e[0].clone(), d.e[3].clone());
        // B has det 1 identically and B ≡ diag(a, d) mod g since a*d ≡ 1.
        let one = Poly::one(f);
        let ad = a.mul(&dd);
        let two_d = dd.add(&dd);
        let b = PolyMat2::new(
            a.clone(),
            ad.sub(&one),
            one.sub(&ad),
            two_d.sub(&ad.mul(&dd)),
        );
        let result = u.inv_det1().mul(&b).mul(&v.inv_det1());
        debug_assert_eq!(result.det(), Poly::one(f));
        Ok(result)
    }

    /// Reduce a polynomial matrix into R_g codes.
    pub fn reduce_poly_mat(&self, m: &PolyMat2) -> Mat2 {
        Mat2::new(
            self.ring.reduce(&m.e[0]),
            self.ring.reduce(&m.e[1]),
            self.ring.reduce(&m.e[2]),
            self.ring.reduce(&m.e[3]),
        )
    }

    // ---- text form ----

    /// Parse `[[a,b],[c,d]]` with entries in polynomial syntax.
    pub fn parse_mat2(&self, text: &str) -> Result<Mat2> {
        let entries = parse_matrix_entries(text)?;
        let mut codes = [0u64; 4];
        for (slot, s) in codes.iter_mut().zip(entries.iter()) {
            let p = Poly::parse(&self.ring.field, s)?;
            *slot = self.ring.reduce(&p);
        }
        Ok(Mat2 { e: codes })
    }

    pub fn format_mat2(&self, m: &Mat2) -> String {
        format!(
            "[[{},{}],[{},{}]]",
            self.ring.lift(m.e[0]),
            self.ring.lift(m.e[1]),
            self.ring.lift(m.e[2]),
            self.ring.lift(m.e[3])
        )
    }
}

/// Split `[[a,b],[c,d]]` into the four entry strings.
pub fn parse_matrix_entries(text: &str) -> Result<Vec<String>> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let inner = s
        .strip_prefix("[[")
        .and_then(|s| s.strip_suffix("]]"))
        .ok_or_else(|| Error::Parse(format!("matrix must look like [[a,b],[c,d]]: '{text}'")))?;
    let rows: Vec<&str> = inner.split("],[").collect();
    if rows.len() != 2 {
        return Err(Error::Parse(format!("expected 2 rows in '{text}'")));
    }
    let mut out = Vec::with_capacity(4);
    for row in rows {
        let cols: Vec<&str> = row.split(',').collect();
        if cols.len() != 2 {
            return Err(Error::Parse(format!("expected 2 entries per row in '{text}'")));
        }
        out.extend(cols.into_iter().map(String::from));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldCtx;
    use rand::{seq::SliceRandom, Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn group(p: u32, k: u32, g: &str, variant: Variant) -> Arc<GroupCtx> {
        let f = FieldCtx::new(p, k).unwrap();
        let g = Poly::parse(&f, g).unwrap();
        GroupCtx::new(&RgCtx::new(&f, g).unwrap(), variant)
    }

    #[test]
    fn matrix_ops() {
        let gc = group(2, 1, "t^2", Variant::Sl2);
        let id = Mat2::IDENTITY;
        assert_eq!(gc.inv(&id).unwrap(), id);
        // [[1,t],[0,1]] is an involution mod t^2
        let m = Mat2::new(1, 2, 0, 1);
        assert_eq!(gc.inv(&m).unwrap(), m);
        assert_eq!(gc.mul(&m, &m), id);

        let gc3 = group(3, 1, "t", Variant::PglBar);
        let two_id = Mat2::new(2, 0, 0, 2);
        assert_eq!(gc3.canonical_scale(&two_id), id);
    }

    #[test]
    fn subgroup_sizes() {
        // |H_0| = q(q^2-1); |H_i| = (q-1) q^{i+1} for 1 <= i <= n-1.
        for (p, k, g) in [(2u32, 1u32, "t^2"), (2, 1, "t^3"), (3, 1, "t^2"), (2, 2, "t^2")] {
            for variant in [Variant::Sl2, Variant::PglBar, Variant::PglM] {
                let gc = group(p, k, g, variant);
                let q = gc.q() as usize;
                assert_eq!(gc.subgroup_elements(0).unwrap().len(), q * (q * q - 1));
                for i in 1..gc.n() {
                    assert_eq!(
                        gc.subgroup_elements(i).unwrap().len(),
                        (q - 1) * q.pow(i as u32 + 1),
                        "level {i} size mismatch for {} q={q}",
                        variant.name()
                    );
                }
                assert!(gc.subgroup_elements(gc.n()).is_err());
            }
        }
        let gc = group(2, 1, "t^2", Variant::Sl2);
        assert_eq!(gc.subgroup_elements(0).unwrap().len(), 6);
        assert_eq!(gc.subgroup_elements(1).unwrap().len(), 4);
        let gc = group(3, 1, "t", Variant::Sl2);
        assert_eq!(gc.subgroup_elements(0).unwrap().len(), 24);
    }

    #[test]
    fn coset_key_examples() {
        let gc = group(2, 1, "t^2", Variant::Sl2);
        let h = Mat2::new(1, 0, 2, 1); // [[1,0],[t,1]]
        let x = Mat2::new(1, 1, 0, 1);
        let hx = gc.mul(&h, &x);
        assert_eq!(
            gc.canonical_coset_key(&h, 1).unwrap(),
            gc.canonical_coset_key(&hx, 1).unwrap()
        );
        let id = Mat2::IDENTITY;
        assert_ne!(
            gc.canonical_coset_key(&h, 1).unwrap(),
            gc.canonical_coset_key(&id, 1).unwrap()
        );
        // key of the identity coset is the least element of H_i itself
        let elems = gc.subgroup_elements(1).unwrap();
        let least = elems.iter().map(|m| gc.encode(m)).min().unwrap();
        assert_eq!(gc.canonical_coset_key(&id, 1).unwrap().key, least);
    }

    #[test]
    fn coset_key_well_defined_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (p, k, g) in [(2u32, 1u32, "t^2"), (2, 1, "t^3"), (3, 1, "t^2")] {
            for variant in [Variant::Sl2, Variant::PglBar, Variant::PglM] {
                let gc = group(p, k, g, variant);
                let h0 = gc.subgroup_elements(0).unwrap();
                for i in 0..gc.n() {
                    let hi = gc.subgroup_elements(i).unwrap();
                    for _ in 0..50 {
                        // random variant-valid h as a product of subgroup elements
                        let mut h = *h0.choose(&mut rng).unwrap();
                        for _ in 0..3 {
                            let lvl = rng.gen_range(0..gc.n());
                            let x = *gc
                                .subgroup_elements(lvl)
                                .unwrap()
                                .choose(&mut rng)
                                .unwrap();
                            h = gc.mul(&h, &x);
                        }
                        let x = *hi.choose(&mut rng).unwrap();
                        let hx = gc.mul(&h, &x);
                        assert_eq!(
                            gc.canonical_coset_key(&h, i).unwrap(),
                            gc.canonical_coset_key(&hx, i).unwrap(),
                            "key not constant on coset, {} level {i}",
                            variant.name()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn coset_key_separates_exhaustive() {
        // For q=2, g=t^2 (SL2): distinct cosets of H_1 get distinct keys.
        let gc = group(2, 1, "t^2", Variant::Sl2);
        let all = gc.group_closure(&gc.full_group_generators(), 1 << 16).unwrap();
        assert_eq!(all.len(), 48); // |SL2(R)| = q^{3n} Pi(q) = 64 * 3/4
        let h1 = gc.subgroup_elements(1).unwrap();
        let h1set = gc.subgroup_set(1).unwrap();
        for a in &all {
            for b in &all {
                let same_key = gc.coset_key_unchecked(a, &h1, 1) == gc.coset_key_unchecked(b, &h1, 1);
                let ainv = gc.inv(a).unwrap();
                let same_coset = h1set.contains(&gc.encode(&gc.mul(&ainv, b)));
                assert_eq!(same_key, same_coset);
            }
        }
    }

    #[test]
    fn closure_examples() {
        // q=2, g=t^2: <H_0, H_1> is the whole group (C = 1).
        let gc = group(2, 1, "t^2", Variant::Sl2);
        let closure = gc.group_closure(&gc.h01_generators().unwrap(), 1 << 16).unwrap();
        assert_eq!(closure.len(), 48);

        // q=2, g=t^3: index 4 in |H| = 384.
        let gc = group(2, 1, "t^3", Variant::Sl2);
        let closure = gc.group_closure(&gc.h01_generators().unwrap(), 1 << 16).unwrap();
        assert_eq!(closure.len(), 96);

        // trivial generator set
        let only_id = gc.group_closure(&[Mat2::IDENTITY], 16).unwrap();
        assert_eq!(only_id, vec![Mat2::IDENTITY]);

        // cap overflow is an explicit signal
        assert!(matches!(
            gc.group_closure(&gc.h01_generators().unwrap(), 10),
            Err(Error::ClosureOverflow(10))
        ));
    }

    #[test]
    fn full_group_sizes() {
        // |H| = q^{3n} Pi(q) for all three variants.
        for (p, k, g, expect) in [
            (2u32, 1u32, "t^2", 48usize),
            (2, 1, "t^3", 384),
            (3, 1, "t^2", 648),
            (2, 1, "t^2+t", 36), // (q^2-1)^... = 6*6 by CRT
        ] {
            for variant in [Variant::Sl2, Variant::PglBar, Variant::PglM] {
                let gc = group(p, k, g, variant);
                let full = gc.group_closure(&gc.full_group_generators(), 1 << 20).unwrap();
                assert_eq!(full.len(), expect, "{} q={p}^{k} g={g}", variant.name());
                assert_eq!(gc.group_order(), expect as u128);
            }
        }
    }

    #[test]
    fn order_formula_examples() {
        let gc = group(2, 1, "t", Variant::Sl2);
        assert_eq!(gc.group_order(), 6);
        assert_eq!(gc.cusp_count(), 3); // q+1 rays on the single vertex
        assert_eq!(gc.level_size(0), 1);
        assert_eq!(gc.level_size(5), 3);

        let gc = group(2, 1, "t^2", Variant::Sl2);
        assert_eq!(gc.cusp_count(), 12); // (q+1) q^{2(n-1)}
        assert_eq!(gc.level_size(0), 8);
        assert_eq!(gc.level_size(1), 12);

        let gc = group(2, 1, "t^3", Variant::Sl2);
        assert_eq!(
            (gc.level_size(0), gc.level_size(1), gc.level_size(2)),
            (64, 96, 48)
        );
        assert_eq!(gc.level_size(7), 48); // constant along the rays

        let gc = group(3, 1, "t^2", Variant::PglM);
        assert_eq!((gc.level_size(0), gc.level_size(1)), (27, 36));
    }

    #[test]
    fn u_subgroup_sizes() {
        for (p, k, g) in [(2u32, 1u32, "t"), (3, 1, "t"), (2, 2, "t"), (2, 1, "t^2")] {
            for variant in [Variant::Sl2, Variant::PglBar, Variant::PglM] {
                let gc = group(p, k, g, variant);
                let q = gc.q() as usize;
                let expect = (q - 1) * q.pow(gc.n() as u32);
                assert_eq!(gc.u_subgroup_elements().len(), expect);
            }
        }
    }

    #[test]
    fn small_generators_same_closure() {
        for (p, k, g) in [(2u32, 1u32, "t^2"), (2, 1, "t^3"), (3, 1, "t^2"), (2, 2, "t^2")] {
            for variant in [Variant::Sl2, Variant::PglBar, Variant::PglM] {
                let gc = group(p, k, g, variant);
                let full = gc.group_closure(&gc.h01_generators().unwrap(), 1 << 20).unwrap();
                let small = gc.group_closure(&gc.h01_small_generators(), 1 << 20).unwrap();
                assert_eq!(full, small, "{} q={p}^{k} g={g}", variant.name());
            }
        }
    }

    #[test]
    fn t_subgroup_examples() {
        let gc = group(3, 1, "t^2", Variant::Sl2);
        let closure = gc.group_closure(&gc.h01_generators().unwrap(), 1 << 20).unwrap();
        let set: HashSet<u128> = closure.iter().map(|m| gc.encode(m)).collect();
        assert_eq!(gc.t_subgroup(&set), vec![1, 2]); // T = S = F_3^x

        let gc = group(2, 1, "t^2", Variant::Sl2);
        let closure = gc.group_closure(&gc.h01_generators().unwrap(), 1 << 16).unwrap();
        let set: HashSet<u128> = closure.iter().map(|m| gc.encode(m)).collect();
        assert_eq!(gc.t_subgroup(&set), vec![1, 3]); // T = S = {1, 1+t}

        let gc = group(2, 1, "t", Variant::Sl2);
        let closure = gc.group_closure(&gc.subgroup_elements(0).unwrap(), 1 << 16).unwrap();
        let set: HashSet<u128> = closure.iter().map(|m| gc.encode(m)).collect();
        assert_eq!(gc.t_subgroup(&set), vec![1]);
    }

    #[test]
    fn sl2_lift_examples() {
        let gc = group(2, 1, "t^2", Variant::Sl2);
        // [[0,1],[-1,0]] = [[0,1],[1,0]] in char 2; det = -1 = 1
        let w = Mat2::new(0, 1, 1, 0);
        let lifted = gc.sl2_lift(&w).unwrap();
        assert_eq!(lifted.det(), Poly::one(&gc.ring.field));
        assert_eq!(gc.reduce_poly_mat(&lifted), w);

        let id = gc.sl2_lift(&Mat2::IDENTITY).unwrap();
        assert_eq!(gc.reduce_poly_mat(&id), Mat2::IDENTITY);
        assert_eq!(id.det(), Poly::one(&gc.ring.field));

        // [[1+t,1],[t,1]] has det (1+t) - t = 1
        let m = Mat2::new(3, 1, 2, 1);
        assert_eq!(gc.det(&m), 1);
        let lifted = gc.sl2_lift(&m).unwrap();
        assert_eq!(lifted.det(), Poly::one(&gc.ring.field));
        assert_eq!(gc.reduce_poly_mat(&lifted), m);

        // det t^2 = 0 is rejected
        assert!(gc.sl2_lift(&Mat2::new(2, 0, 0, 2)).is_err());
    }

    #[test]
    fn sl2_lift_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for (p, k, g) in [(2u32, 1u32, "t^2"), (2, 1, "t^3"), (3, 1, "t^2"), (2, 2, "t^2")] {
            let gc = group(p, k, g, Variant::Sl2);
            let full = gc.group_closure(&gc.full_group_generators(), 1 << 20).unwrap();
            for _ in 0..200 {
                let m = *full.choose(&mut rng).unwrap();
                let lifted = gc.sl2_lift(&m).unwrap();
                assert_eq!(lifted.det(), Poly::one(&gc.ring.field));
                assert_eq!(gc.reduce_poly_mat(&lifted), m);
            }
        }
    }

    #[test]
    fn pgl_bar_edge_group_identity() {
        // H_i F ∩ H_{i+1} F = (H_i ∩ H_{i+1}) F as canonical-scaled sets.
        for (p, g) in [(2u32, "t^2"), (3, "t^2")] {
            let sl2 = group(p, 1, g, Variant::Sl2);
            let bar = group(p, 1, g, Variant::PglBar);
            let h0: HashSet<u128> =
                bar.subgroup_elements(0).unwrap().iter().map(|m| bar.encode(m)).collect();
            let h1: HashSet<u128> =
                bar.subgroup_elements(1).unwrap().iter().map(|m| bar.encode(m)).collect();
            let lhs: HashSet<u128> = h0.intersection(&h1).copied().collect();
            // (H_0 ∩ H_1) F, canonical-scaled
            let s0 = sl2.subgroup_set(0).unwrap();
            let mut rhs = HashSet::new();
            for m in sl2.subgroup_elements(1).unwrap().iter() {
                if s0.contains(&sl2.encode(m)) {
                    for c in 1..sl2.q() as u64 {
                        let mf = bar.mul(m, &Mat2::new(c, 0, 0, 1));
                        rhs.insert(bar.encode(&bar.canonical_scale(&mf)));
                    }
                }
            }
            assert_eq!(lhs, rhs, "edge-group identity failed for q={p}");
        }
    }

    #[test]
    fn canonical_scale_modes_agree_on_scalar_classes() {
        // Valuation normalization and lexicographic minimization pick one
        // representative per scalar class; classes must coincide.
        let gc = group(2, 1, "t^3", Variant::PglM);
        let local = LocalScale::build(&gc.ring, &Poly::t(&gc.ring.field));
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..500 {
            let m = Mat2::new(
                rng.gen_range(0..8),
                rng.gen_range(0..8),
                rng.gen_range(0..8),
                rng.gen_range(0..8),
            );
            if !gc.ring.is_unit(gc.det(&m)) {
                continue;
            }
            let a = gc.canonical_scale_lexmin(&m);
            let b = gc.canonical_scale_local(&m, &local);
            // same class: b = lambda * a for a unit lambda; canonical forms of
            // both must agree with their own mode applied twice
            assert_eq!(gc.canonical_scale_lexmin(&b), a);
            assert_eq!(gc.canonical_scale_local(&a, &local), b);
        }
    }

    #[test]
    fn matrix_text_round_trip() {
        let gc = group(2, 1, "t^2", Variant::Sl2);
        let m = gc.parse_mat2("[[1+t, 1], [t, 1]]").unwrap();
        assert_eq!(m, Mat2::new(3, 1, 2, 1));
        let printed = gc.format_mat2(&m);
        assert_eq!(gc.parse_mat2(&printed).unwrap(), m);
        assert!(gc.parse_mat2("[[1,2],[3]]").is_err());
        assert!(gc.parse_mat2("nonsense").is_err());
    }
}
