//! 2x2 matrices over F_q[t] and their Smith normal form using only
//! determinant-1 row and column operations, which is what the constructive
//! lift from SL2(R_g) to SL2(F_q[t]) needs.

use std::fmt;
use std::sync::Arc;

use crate::field::FieldCtx;
use crate::poly::Poly;

/// Row-major 2x2 polynomial matrix [[a, b], [c, d]].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMat2 {
    pub e: [Poly; 4],
}

impl PolyMat2 {
    pub fn new(a: Poly, b: Poly, c: Poly, d: Poly) -> PolyMat2 {
        PolyMat2 { e: [a, b, c, d] }
    }

    pub fn identity(ctx: &Arc<FieldCtx>) -> PolyMat2 {
        PolyMat2::new(Poly::one(ctx), Poly::zero(ctx), Poly::zero(ctx), Poly::one(ctx))
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.e[0].ctx
    }

    pub fn mul(&self, other: &PolyMat2) -> PolyMat2 {
        let [a, b, c, d] = &self.e;
        let [e, f, g, h] = &other.e;
        PolyMat2::new(
            a.mul(e).add(&b.mul(g)),
            a.mul(f).add(&b.mul(h)),
            c.mul(e).add(&d.mul(g)),
            c.mul(f).add(&d.mul(h)),
        )
    }

    pub fn det(&self) -> Poly {
        let [a, b, c, d] = &self.e;
        a.mul(d).sub(&b.mul(c))
    }

    /// Inverse of a determinant-1 matrix (the adjugate).
    pub fn inv_det1(&self) -> PolyMat2 {
        let [a, b, c, d] = &self.e;
        debug_assert!(self.det() == Poly::one(self.ctx()));
        PolyMat2::new(d.clone(), b.neg(), c.neg(), a.clone())
    }

    /// Entrywise reduction mod g.
    pub fn reduce_mod(&self, g: &Poly) -> PolyMat2 {
        PolyMat2 {
            e: [
                self.e[0].rem(g).expect("nonzero modulus"),
                self.e[1].rem(g).expect("nonzero modulus"),
                self.e[2].rem(g).expect("nonzero modulus"),
                self.e[3].rem(g).expect("nonzero modulus"),
            ],
        }
    }

    fn row_add(&mut self, dst: usize, src: usize, f: &Poly) {
        // R_dst += f * R_src
        for j in 0..2 {
            self.e[dst * 2 + j] = self.e[dst * 2 + j].add(&f.mul(&self.e[src * 2 + j]));
        }
    }

    fn col_add(&mut self, dst: usize, src: usize, f: &Poly) {
        for i in 0..2 {
            self.e[i * 2 + dst] = self.e[i * 2 + dst].add(&f.mul(&self.e[i * 2 + src]));
        }
    }

    /// (R0, R1) <- (R1, -R0); determinant 1.
    fn swap_rows_signed(&mut self) {
        let [a, b, c, d] = self.e.clone();
        self.e = [c, d, a.neg(), b.neg()];
    }

    fn swap_cols_signed(&mut self) {
        let [a, b, c, d] = self.e.clone();
        self.e = [b, a.neg(), d, c.neg()];
    }

    /// R0 *= u, R1 *= u^{-1} for a constant unit u; determinant 1.
    fn scale_rows(&mut self, u: u32) {
        let f = self.ctx().clone();
        let uinv = f.inv(u).expect("unit");
        self.e[0] = self.e[0].scale(u);
        self.e[1] = self.e[1].scale(u);
        self.e[2] = self.e[2].scale(uinv);
        self.e[3] = self.e[3].scale(uinv);
    }
}

impl fmt::Display for PolyMat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.e[0], self.e[1], self.e[2], self.e[3])
    }
}

/// Smith normal form of a 2x2 matrix over F_q[t]: returns (U, D, V) with
/// U*A*V = D = diag(d1, d2), d1 | d2, d1 monic or zero, det(U) = det(V) = 1.
///
/// Pivot ties are broken by the lowest-degree nonzero entry in row-major scan.
pub fn snf_2x2(a: &PolyMat2) -> (PolyMat2, PolyMat2, PolyMat2) {
    let ctx = a.ctx().clone();
    let mut m = a.clone();
    let mut u = PolyMat2::identity(&ctx);
    let mut v = PolyMat2::identity(&ctx);

    // Helper closures can't borrow both m and u mutably, so operations are
    // mirrored by hand below.
    loop {
        // Find the nonzero entry of least degree (row-major tie break).
        let mut pivot: Option<(usize, usize)> = None; // (index, degree)
        for idx in 0..4 {
            if let Some(d) = m.e[idx].deg() {
                if pivot.map_or(true, |(_, pd)| d < pd) {
                    pivot = Some((idx, d));
                }
            }
        }
        let Some((pidx, _)) = pivot else {
            break; // zero matrix
        };
        // Move the pivot to (0,0) with signed swaps.
        if pidx >= 2 {
            m.swap_rows_signed();
            u.swap_rows_signed();
        }
        if pidx % 2 == 1 {
            m.swap_cols_signed();
            v.swap_cols_signed();
        }

        // Kill (0,1) and (1,0) by Euclidean steps.
        let piv = m.e[0].clone();
        let qb = m.e[1].divrem(&piv).expect("pivot nonzero").0;
        m.col_add(1, 0, &qb.neg());
        v.col_add(1, 0, &qb.neg());
        let qc = m.e[2].divrem(&piv).expect("pivot nonzero").0;
        m.row_add(1, 0, &qc.neg());
        u.row_add(1, 0, &qc.neg());

        if m.e[1].is_zero() && m.e[2].is_zero() {
            // Ensure divisibility d1 | d2.
            if !m.e[0].divides(&m.e[3]) {
                m.col_add(0, 1, &Poly::one(&ctx));
                v.col_add(0, 1, &Poly::one(&ctx));
                continue;
            }
            break;
        }
        // A remainder with smaller degree appeared; iterate.
    }

    // Make d1 monic via a determinant-1 row scaling.
    if !m.e[0].is_zero() && !m.e[0].is_monic() {
        let lead = m.e[0].lead();
        let c = ctx.inv(lead).expect("nonzero lead");
        m.scale_rows(c);
        u.scale_rows(c);
    }
    (u, m, v)
}
