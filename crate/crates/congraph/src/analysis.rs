//! Exact closed-form order formulas, component-count tables with conjectured
//! values, the S/T index identity, connectivity and parity checks, and the
//! neighborhood-expansion bound refutation.  Everything is exact integer or
//! rational arithmetic; no floating point.

use std::collections::HashSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::graph::{build_graph, BuildMode, LevelledGraph};
use crate::matgroup::{GroupCtx, Variant};
use crate::ring::RgCtx;

/// Closure computations are attempted only when the whole group could fit.
const CLOSURE_FEASIBLE: u128 = 1 << 22;

/// Brute-force matrix enumeration cap: ring size to the fourth power.
const BRUTE_FORCE_CAP: u128 = 1 << 24;

// ---- closed-form orders ----

/// Exact order data for the groups over R_g.
#[derive(Debug, Clone)]
pub struct FormulaReport {
    pub q: u32,
    pub g: String,
    pub n: usize,
    /// Pi(q) = prod over distinct irreducible factor degrees d_i of (1 - q^{-2 d_i}).
    pub pi_q: BigRational,
    pub gl2_order: BigInt,
    pub sl2_order: BigInt,
    pub unit_group_order: BigInt,
    /// Core level sizes |L_0|, ..., |L_{n-1}|.
    pub level_sizes: Vec<BigInt>,
    /// |L_i| for every ray position i >= n.
    pub ray_level_size: BigInt,
    pub cusp_count: BigInt,
}

impl FormulaReport {
    pub fn to_json(&self) -> Value {
        json!({
            "q": self.q,
            "g": self.g,
            "n": self.n,
            "pi_q": self.pi_q.to_string(),
            "gl2_order": self.gl2_order.to_string(),
            "sl2_order": self.sl2_order.to_string(),
            "unit_group_order": self.unit_group_order.to_string(),
            "level_sizes": self.level_sizes.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            "ray_level_size": self.ray_level_size.to_string(),
            "cusp_count": self.cusp_count.to_string(),
        })
    }
}

pub fn formula_report(ring: &Arc<RgCtx>) -> FormulaReport {
    let ctx = GroupCtx::new(ring, Variant::Sl2);
    let q = BigInt::from(ring.q());
    let mut pi_q = BigRational::one();
    for (f, _) in &ring.factorization().factors {
        let d = f.deg().expect("nonzero") as u32;
        let q2d = q.pow(2 * d);
        pi_q *= BigRational::new(&q2d - 1, q2d);
    }
    let sl2_order = BigInt::from(ctx.group_order());
    FormulaReport {
        q: ring.q(),
        g: ring.g().to_string(),
        n: ring.n(),
        pi_q,
        gl2_order: &sl2_order * BigInt::from(ring.unit_count()),
        sl2_order: sl2_order.clone(),
        unit_group_order: BigInt::from(ring.unit_count()),
        level_sizes: (0..ring.n()).map(|i| BigInt::from(ctx.level_size(i))).collect(),
        ray_level_size: BigInt::from(ctx.level_size(ring.n())),
        cusp_count: BigInt::from(ctx.cusp_count()),
    }
}

/// Independent oracle: enumerate all 2x2 matrices over R_g and count the
/// invertible ones, the det-1 ones, and the units.  `None` above the cap.
pub fn brute_force_orders(ring: &Arc<RgCtx>) -> Option<(u128, u128, u128)> {
    let size = ring.size() as u128;
    if size.checked_pow(4).is_none_or(|s| s > BRUTE_FORCE_CAP) {
        return None;
    }
    ring.ensure_tables();
    let (mut gl2, mut sl2) = (0u128, 0u128);
    for a in 0..ring.size() {
        for d in 0..ring.size() {
            let ad = ring.mul(a, d);
            for b in 0..ring.size() {
                for c in 0..ring.size() {
                    let det = ring.sub(ad, ring.mul(b, c));
                    if ring.is_unit(det) {
                        gl2 += 1;
                    }
                    if det == 1 {
                        sl2 += 1;
                    }
                }
            }
        }
    }
    let units = (0..ring.size()).filter(|&x| ring.is_unit(x)).count() as u128;
    Some((gl2, sl2, units))
}

// ---- component counts C and C-tilde ----

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Closure,
    Graph,
    Both,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Closure => "closure",
            Method::Graph => "graph",
            Method::Both => "both",
        }
    }
}

/// |H : <H_0, H_1>| for the given variant, with the closure elements retained
/// when that path ran.
pub struct IndexComputation {
    pub index: u128,
    pub method: Method,
    pub closure: Option<Vec<crate::matgroup::Mat2>>,
}

/// Compute the 0-1 component count via subgroup-closure index and/or the
/// identity-component quotient on the levels-0,1 graph.  The two independent
/// paths must agree whenever both complete.
pub fn h01_index(ring: &Arc<RgCtx>, variant: Variant, budget: usize) -> Result<IndexComputation> {
    let ctx = GroupCtx::new(ring, variant);
    let order = ctx.group_order();
    let mut closure = None;
    let mut from_closure = None;
    if order <= CLOSURE_FEASIBLE.min(budget as u128) {
        match ctx.group_closure(&ctx.h01_small_generators(), budget) {
            Ok(elems) => {
                let index = order / elems.len() as u128;
                if order % elems.len() as u128 != 0 {
                    return Err(Error::Integrity(format!(
                        "|H| = {order} not divisible by closure size {}",
                        elems.len()
                    )));
                }
                from_closure = Some(index);
                closure = Some(elems);
            }
            Err(Error::ClosureOverflow(_)) => {}
            Err(e) => return Err(e),
        }
    }
    let max_level = if ring.n() >= 2 { Some(1) } else { Some(0) };
    let from_graph = match build_graph(&ctx, BuildMode::Identity, budget, max_level) {
        Ok(g) => Some(g.component_count_total()?),
        Err(Error::BudgetExceeded(_)) => None,
        Err(e) => return Err(e),
    };
    match (from_closure, from_graph) {
        (Some(a), Some(b)) => {
            if a != b {
                return Err(Error::Integrity(format!(
                    "closure index {a} != graph component count {b}"
                )));
            }
            Ok(IndexComputation { index: a, method: Method::Both, closure })
        }
        (Some(a), None) => Ok(IndexComputation { index: a, method: Method::Closure, closure }),
        (None, Some(b)) => Ok(IndexComputation { index: b, method: Method::Graph, closure }),
        (None, None) => Err(Error::BudgetExceeded(budget)),
    }
}

// ---- component-count table and conjectured values ----

/// Conjectured C for g = t^n; `None` where the prediction does not apply.
pub fn conjectured_c(q: u32, n: usize) -> Option<u128> {
    if q == 2 {
        (n > 2).then(|| (q as u128).pow(((3 * n - 5) / 2) as u32))
    } else {
        Some(1)
    }
}

/// Conjectured C-tilde for g = t^n; `None` where the prediction does not apply.
pub fn conjectured_c_tilde(q: u32, n: usize) -> Option<u128> {
    if q % 2 == 1 {
        Some(1)
    } else if q == 2 {
        (n > 2).then(|| (q as u128).pow(((3 * n - 5) / 2 + (n + 1) / 4) as u32))
    } else {
        (n > 1).then(|| (q as u128).pow((n / 2) as u32))
    }
}

#[derive(Debug, Clone)]
pub struct Table1Row {
    pub q: u32,
    pub n: usize,
    pub c: Option<u128>,
    pub c_method: Option<Method>,
    pub c_tilde: Option<u128>,
    pub ct_method: Option<Method>,
    pub conjecture_c: Option<u128>,
    pub conjecture_c_tilde: Option<u128>,
}

impl Table1Row {
    pub fn complete(&self) -> bool {
        self.c.is_some() && self.c_tilde.is_some()
    }
    pub fn c_matches(&self) -> Option<bool> {
        Some(self.c? == self.conjecture_c?)
    }
    pub fn ct_matches(&self) -> Option<bool> {
        Some(self.c_tilde? == self.conjecture_c_tilde?)
    }
    pub fn to_json(&self) -> Value {
        json!({
            "q": self.q,
            "n": self.n,
            "c": self.c.map(|v| v.to_string()),
            "c_method": self.c_method.map(|m| m.name()),
            "c_tilde": self.c_tilde.map(|v| v.to_string()),
            "ct_method": self.ct_method.map(|m| m.name()),
            "conjecture_c": self.conjecture_c.map(|v| v.to_string()),
            "conjecture_c_tilde": self.conjecture_c_tilde.map(|v| v.to_string()),
            "c_matches": self.c_matches(),
            "ct_matches": self.ct_matches(),
        })
    }
}

/// One row of the component-count table for g = t^n over F_q (q = p^k).
/// Rows whose computations exceed the budget come back incomplete, never
/// extrapolated.
pub fn table1_row(ring: &Arc<RgCtx>, budget: usize) -> Result<Table1Row> {
    let q = ring.q();
    let n = ring.n();
    let mut row = Table1Row {
        q,
        n,
        c: None,
        c_method: None,
        c_tilde: None,
        ct_method: None,
        conjecture_c: conjectured_c(q, n),
        conjecture_c_tilde: conjectured_c_tilde(q, n),
    };
    match h01_index(ring, Variant::Sl2, budget) {
        Ok(r) => {
            row.c = Some(r.index);
            row.c_method = Some(r.method);
        }
        Err(Error::BudgetExceeded(_)) => {}
        Err(e) => return Err(e),
    }
    match h01_index(ring, Variant::PglM, budget) {
        Ok(r) => {
            row.c_tilde = Some(r.index);
            row.ct_method = Some(r.method);
        }
        Err(Error::BudgetExceeded(_)) => {}
        Err(e) => return Err(e),
    }
    Ok(row)
}

/// Format a value as q^e when it is a perfect power of q.
fn pow_format(q: u32, v: Option<u128>) -> String {
    let Some(v) = v else { return "-".into() };
    if v == 1 {
        return "1".into();
    }
    let (mut rest, mut e) = (v, 0u32);
    while rest % q as u128 == 0 {
        rest /= q as u128;
        e += 1;
    }
    if rest == 1 {
        format!("{q}^{e}")
    } else {
        v.to_string()
    }
}

/// Aligned-column text table of component counts with conjecture flags.
pub fn format_table1(rows: &[Table1Row]) -> String {
    let mut cols: Vec<[String; 5]> = vec![[
        "q".into(),
        "n".into(),
        "C".into(),
        "C~".into(),
        "conjecture".into(),
    ]];
    for r in rows {
        let flag = if !r.complete() {
            "incomplete"
        } else if r.c_matches() == Some(false) || r.ct_matches() == Some(false) {
            "MISMATCH"
        } else if r.c_matches().is_none() && r.ct_matches().is_none() {
            "not covered"
        } else {
            "consistent"
        };
        cols.push([
            r.q.to_string(),
            r.n.to_string(),
            pow_format(r.q, r.c),
            pow_format(r.q, r.c_tilde),
            flag.into(),
        ]);
    }
    let widths: Vec<usize> = (0..5)
        .map(|i| cols.iter().map(|row| row[i].len()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in &cols {
        let line: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(cell, w)| format!("{cell:>w$}"))
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}

// ---- S/T identity and parity properties ----

#[derive(Debug, Clone)]
pub struct StIdentityReport {
    pub q: u32,
    pub g: String,
    pub c: Option<u128>,
    pub c_tilde: Option<u128>,
    pub square_class_index: u64,
    pub s_size: usize,
    /// None when the SL2 closure was out of budget.
    pub t_size: Option<usize>,
    /// C * |R^x : F_q^x R^x2| == C~ * |S : T|; None while partial.
    pub holds: Option<bool>,
}

impl StIdentityReport {
    pub fn to_json(&self) -> Value {
        json!({
            "q": self.q,
            "g": self.g,
            "c": self.c.map(|v| v.to_string()),
            "c_tilde": self.c_tilde.map(|v| v.to_string()),
            "square_class_index": self.square_class_index,
            "s_size": self.s_size,
            "t_size": self.t_size,
            "holds": self.holds,
        })
    }
}

/// Check C * |R^x : F_q^x R^x2| = C~ * |S : T| with all four quantities
/// computed independently.
pub fn st_identity_check(ring: &Arc<RgCtx>, budget: usize) -> Result<StIdentityReport> {
    let sl2 = h01_index(ring, Variant::Sl2, budget)?;
    let pgl = h01_index(ring, Variant::PglM, budget)?;
    let square_class_index = ring.square_class_index()?;
    let s = ring.s_subgroup();
    let t_size = sl2.closure.as_ref().map(|elems| {
        let ctx = GroupCtx::new(ring, Variant::Sl2);
        let set: HashSet<u128> = elems.iter().map(|m| ctx.encode(m)).collect();
        ctx.t_subgroup(&set).len()
    });
    let holds = t_size.map(|t| {
        let st_index = (s.len() / t) as u128;
        sl2.index * square_class_index as u128 == pgl.index * st_index
    });
    Ok(StIdentityReport {
        q: ring.q(),
        g: ring.g().to_string(),
        c: Some(sl2.index),
        c_tilde: Some(pgl.index),
        square_class_index,
        s_size: s.len(),
        t_size,
        holds,
    })
}

#[derive(Debug, Clone)]
pub struct ConnectivityReport {
    pub q: u32,
    pub g: String,
    pub squarefree: bool,
    pub c: u128,
    pub c_tilde: u128,
    /// Components of the full core graphs X_g and X~_g.
    pub x_components: u128,
    pub x_tilde_components: u128,
    pub square_class_index: u64,
    /// X_g connected (expected always).
    pub x_connected: bool,
    /// X~ component count equals the unit square-class index (expected always).
    pub x_tilde_matches_index: bool,
    /// C = C~ when q is odd and g = t^n; C~ > C when q even, g non-squarefree.
    pub parity_ok: bool,
}

impl ConnectivityReport {
    pub fn to_json(&self) -> Value {
        json!({
            "q": self.q,
            "g": self.g,
            "squarefree": self.squarefree,
            "c": self.c.to_string(),
            "c_tilde": self.c_tilde.to_string(),
            "x_components": self.x_components.to_string(),
            "x_tilde_components": self.x_tilde_components.to_string(),
            "square_class_index": self.square_class_index,
            "x_connected": self.x_connected,
            "x_tilde_matches_index": self.x_tilde_matches_index,
            "parity_ok": self.parity_ok,
        })
    }
}

/// Connectivity and parity facts for one configuration.
pub fn connectivity_report(ring: &Arc<RgCtx>, budget: usize) -> Result<ConnectivityReport> {
    let c = h01_index(ring, Variant::Sl2, budget)?.index;
    let c_tilde = h01_index(ring, Variant::PglM, budget)?.index;
    let x_components = build_graph(&GroupCtx::new(ring, Variant::Sl2), BuildMode::Identity, budget, None)?
        .component_count_total()?;
    let x_tilde_components =
        build_graph(&GroupCtx::new(ring, Variant::PglM), BuildMode::Identity, budget, None)?
            .component_count_total()?;
    let square_class_index = ring.square_class_index()?;
    let squarefree = ring.g().is_squarefree()?;
    let q = ring.q();
    let is_tn = ring.factorization().factors.len() == 1
        && ring.factorization().factors[0].0.deg() == Some(1);
    let parity_ok = if q % 2 == 1 && is_tn {
        c == c_tilde
    } else if q % 2 == 0 && !squarefree {
        c_tilde > c
    } else {
        true
    };
    Ok(ConnectivityReport {
        q,
        g: ring.g().to_string(),
        squarefree,
        c,
        c_tilde,
        x_components,
        x_tilde_components,
        square_class_index,
        x_connected: x_components == 1,
        x_tilde_matches_index: x_tilde_components == square_class_index as u128,
        parity_ok,
    })
}

// ---- neighborhood-expansion bound ----

#[derive(Debug, Clone)]
pub struct BoundReport {
    pub s_size: usize,
    pub n0_size: usize,
    pub lhs: BigRational,
    pub rhs: BigRational,
    /// None when S is empty (vacuous).
    pub holds: Option<bool>,
}

impl BoundReport {
    pub fn violated(&self) -> bool {
        self.holds == Some(false)
    }
    pub fn to_json(&self) -> Value {
        json!({
            "s_size": self.s_size,
            "n0_size": self.n0_size,
            "lhs": self.lhs.to_string(),
            "rhs": self.rhs.to_string(),
            "holds": self.holds,
        })
    }
}

/// Exact check of the claimed expansion bound
/// |N_0(S)|/|S| >= q |L_1| / ((q-3)|S| + 4 |L_1|) on a complete levels-0,1
/// graph; taking S to be one component's level-1 vertices of a disconnected
/// graph exhibits the violation.
pub fn bound_check(graph01: &LevelledGraph, s: &[usize]) -> Result<BoundReport> {
    if !graph01.is_complete() || graph01.max_level < 1 {
        return Err(Error::Integrity("bound check needs the complete levels 0-1".into()));
    }
    let n0 = graph01.neighborhood_n0(s)?;
    if s.is_empty() {
        return Ok(BoundReport {
            s_size: 0,
            n0_size: 0,
            lhs: BigRational::one(),
            rhs: BigRational::one(),
            holds: None,
        });
    }
    let q = BigInt::from(graph01.ctx.q());
    let l1 = BigInt::from(graph01.level_ids(1)?.len());
    let s_len = BigInt::from(s.len());
    let lhs = BigRational::new(BigInt::from(n0.len()), s_len.clone());
    let rhs = BigRational::new(&q * &l1, (&q - 3) * &s_len + 4 * &l1);
    let holds = Some(lhs >= rhs);
    Ok(BoundReport { s_size: s.len(), n0_size: n0.len(), lhs, rhs, holds })
}

/// Level-1 vertex ids of one component of a levels-0,1 graph.
pub fn component_level1(graph01: &LevelledGraph, label: u32) -> Result<Vec<usize>> {
    let level1 = graph01.level_ids(1)?;
    Ok(level1.filter(|&v| graph01.components[v] == label).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldCtx;
    use crate::poly::Poly;

    const BUDGET: usize = 1 << 22;

    fn ring(p: u32, k: u32, g: &str) -> Arc<RgCtx> {
        let f = FieldCtx::new(p, k).unwrap();
        RgCtx::new(&f, Poly::parse(&f, g).unwrap()).unwrap()
    }

    #[test]
    fn formula_examples() {
        let r = formula_report(&ring(2, 1, "t^2"));
        assert_eq!(r.gl2_order, BigInt::from(96));
        assert_eq!(r.sl2_order, BigInt::from(48));
        assert_eq!(r.unit_group_order, BigInt::from(2));
        assert_eq!(r.pi_q, BigRational::new(3.into(), 4.into()));

        let r = formula_report(&ring(2, 1, "t^3"));
        let sizes: Vec<BigInt> = [64, 96, 48].map(BigInt::from).into();
        assert_eq!(r.level_sizes, sizes);
        assert_eq!(r.ray_level_size, BigInt::from(48));

        let r = formula_report(&ring(2, 1, "t"));
        assert_eq!(r.level_sizes, vec![BigInt::from(1)]);
        assert_eq!(r.ray_level_size, BigInt::from(3));
        assert_eq!(r.cusp_count, BigInt::from(3));
    }

    #[test]
    fn brute_force_orders_agree() {
        for (p, k, g) in [(2u32, 1u32, "t^2"), (2, 1, "t^3"), (3, 1, "t^2"), (2, 2, "t^2"), (2, 1, "t^2+t")] {
            let ring = ring(p, k, g);
            let (gl2, sl2, units) = brute_force_orders(&ring).unwrap();
            let r = formula_report(&ring);
            assert_eq!(BigInt::from(gl2), r.gl2_order, "q={p}^{k} g={g}");
            assert_eq!(BigInt::from(sl2), r.sl2_order);
            assert_eq!(BigInt::from(units), r.unit_group_order);
        }
        // above the cap: declined, not attempted
        assert!(brute_force_orders(&ring(3, 1, "t^4")).is_none());
    }

    #[test]
    fn table_rows_match_published_values() {
        for (p, k, n, c, ct) in [
            (2u32, 1u32, 2usize, 1u128, 2u128),
            (2, 1, 3, 4, 8),
            (2, 1, 4, 8, 16),
            (2, 2, 2, 1, 4),
            (2, 2, 3, 1, 4),
        ] {
            let row = table1_row(&ring(p, k, &format!("t^{n}")), BUDGET).unwrap();
            assert_eq!((row.c, row.c_tilde), (Some(c), Some(ct)), "q={}^{k} n={n}", p);
            assert_eq!(row.c_matches(), row.conjecture_c.map(|v| v == c));
            assert_eq!(row.ct_matches(), row.conjecture_c_tilde.map(|v| v == ct));
        }
    }

    #[test]
    fn conjecture_values() {
        assert_eq!(conjectured_c(2, 3), Some(4));
        assert_eq!(conjectured_c(2, 7), Some(256));
        assert_eq!(conjectured_c(2, 2), None);
        assert_eq!(conjectured_c(4, 2), Some(1));
        assert_eq!(conjectured_c_tilde(2, 7), Some(1024));
        assert_eq!(conjectured_c_tilde(4, 2), Some(4));
        assert_eq!(conjectured_c_tilde(8, 3), Some(8));
        assert_eq!(conjectured_c_tilde(3, 2), Some(1));
    }

    #[test]
    fn table_formatting() {
        let rows = [
            table1_row(&ring(2, 1, "t^2"), BUDGET).unwrap(),
            table1_row(&ring(2, 1, "t^3"), BUDGET).unwrap(),
        ];
        let text = format_table1(&rows);
        assert!(text.contains("2^2"), "{text}");
        assert!(text.contains("2^3"), "{text}");
        assert!(text.contains("consistent"), "{text}");
        assert!(text.contains("not covered"), "{text}"); // n=2 has no prediction
    }

    #[test]
    fn st_identity_cases() {
        // q=2, t^2: 1 * 2 = 2 * 1.
        let r = st_identity_check(&ring(2, 1, "t^2"), BUDGET).unwrap();
        assert_eq!((r.c, r.c_tilde), (Some(1), Some(2)));
        assert_eq!(r.square_class_index, 2);
        assert_eq!((r.s_size, r.t_size), (2, Some(2)));
        assert_eq!(r.holds, Some(true));
        // q=3, t^2: 1 * 1 = 1 * 1 with C = C~.
        let r = st_identity_check(&ring(3, 1, "t^2"), BUDGET).unwrap();
        assert_eq!(r.c, r.c_tilde);
        assert_eq!(r.holds, Some(true));
        // q=4, t^2: index 4 forces |S : T| = 1.
        let r = st_identity_check(&ring(2, 2, "t^2"), BUDGET).unwrap();
        assert_eq!((r.c, r.c_tilde), (Some(1), Some(4)));
        assert_eq!(r.square_class_index, 4);
        assert_eq!(r.holds, Some(true));
        // g = t^2 (t+1) at q=2: C = C~ = 2 even though g is non-squarefree in
        // even characteristic.  The torsion element a with a^2 = 1 needed to
        // make T nontrivial lifts to t^2+t+1, and E12 of a degree-2 element
        // never enters <H_0, H_1>, so T = {1} and |S : T| = 2 absorbs the
        // square-class index.  Verified against the closure both ways.
        let r = st_identity_check(&ring(2, 1, "t^3+t^2"), BUDGET).unwrap();
        assert_eq!((r.c, r.c_tilde), (Some(2), Some(2)));
        assert_eq!((r.square_class_index, r.t_size), (2, Some(1)));
        assert_eq!(r.holds, Some(true));
        // g = t^2 (t^2+t+1) at q=2: here the strict inequality does hold.
        let r = st_identity_check(&ring(2, 1, "t^4+t^3+t^2"), BUDGET).unwrap();
        assert_eq!((r.c, r.c_tilde), (Some(1), Some(2)));
        assert_eq!(r.holds, Some(true));
    }

    #[test]
    fn connectivity_cases() {
        let r = connectivity_report(&ring(2, 1, "t^2+t"), BUDGET).unwrap();
        assert!(r.squarefree && r.x_tilde_components == 1);
        assert!(r.x_connected && r.x_tilde_matches_index && r.parity_ok);

        let r = connectivity_report(&ring(2, 1, "t^2"), BUDGET).unwrap();
        assert_eq!(r.x_tilde_components, 2);
        assert!(r.x_connected && r.x_tilde_matches_index && r.parity_ok);

        let r = connectivity_report(&ring(3, 1, "t^2"), BUDGET).unwrap();
        assert_eq!((r.c, r.c_tilde), (1, 1));
        assert!(r.x_connected && r.x_tilde_matches_index && r.parity_ok);

        // q even, g = t^2(t+1): C~ = C here, so the expected strict
        // inequality for non-squarefree g fails and the report flags it.
        let r = connectivity_report(&ring(2, 1, "t^3+t^2"), BUDGET).unwrap();
        assert!(!r.squarefree);
        assert_eq!((r.c, r.c_tilde), (2, 2));
        assert!(!r.parity_ok);
        assert!(r.x_connected && r.x_tilde_matches_index);
    }

    #[test]
    fn bound_refutation_q4() {
        let ctx = GroupCtx::new(&ring(2, 2, "t^2"), Variant::PglM);
        let g = build_graph(&ctx, BuildMode::Full, BUDGET, None).unwrap();
        let d01 = g.subgraph_01().unwrap();
        // One component's level-1 vertices: 4/5 < 16/17, bound VIOLATED.
        let s = component_level1(&d01, 0).unwrap();
        let r = bound_check(&d01, &s).unwrap();
        assert_eq!(r.lhs, BigRational::new(4.into(), 5.into()));
        assert_eq!(r.rhs, BigRational::new(16.into(), 17.into()));
        assert!(r.violated());
        // S = all of L_1: exact equality.
        let all: Vec<usize> = d01.level_ids(1).unwrap().collect();
        let r = bound_check(&d01, &all).unwrap();
        assert_eq!(r.lhs, r.rhs);
        assert_eq!(r.holds, Some(true));
        // empty S is vacuous
        assert!(bound_check(&d01, &[]).unwrap().holds.is_none());
    }
}
