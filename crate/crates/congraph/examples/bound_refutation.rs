//! The claimed neighborhood-expansion bound
//!     |N_0(S)| / |S| >= q |L_1| / ((q-3)|S| + 4 |L_1|)
//! fails on the level 0-1 subgraph of Morgenstern's PGL2 graph at q = 4,
//! g = t^2: that subgraph is disconnected, and taking S to be the level-1
//! vertices of a single component gives 4/5 on the left against 16/17 on
//! the right.  All arithmetic is exact.

use congraph::analysis::{bound_check, component_level1};
use congraph::field::FieldCtx;
use congraph::graph::{build_graph, BuildMode};
use congraph::matgroup::{GroupCtx, Variant};
use congraph::poly::Poly;
use congraph::ring::RgCtx;

fn main() {
    let field = FieldCtx::new(2, 2).unwrap();
    let g = Poly::parse(&field, "t^2").unwrap();
    let ring = RgCtx::new(&field, g).unwrap();
    let ctx = GroupCtx::new(&ring, Variant::PglM);

    let graph = build_graph(&ctx, BuildMode::Full, 1 << 20, None).unwrap();
    let d01 = graph.subgraph_01().unwrap();
    println!(
        "q = 4, g = t^2: the 0-1 subgraph has {} components",
        d01.component_count
    );

    let s = component_level1(&d01, 0).unwrap();
    let r = bound_check(&d01, &s).unwrap();
    println!(
        "S = level-1 of one component: |S| = {}, |N_0(S)| = {}",
        r.s_size, r.n0_size
    );
    println!(
        "{} >= {} is {} -> bound {}",
        r.lhs,
        r.rhs,
        r.holds.unwrap(),
        if r.violated() { "VIOLATED" } else { "holds" }
    );

    // the equality case S = L_1 always holds with lhs = rhs = q/(q+1)
    let all: Vec<usize> = d01.level_ids(1).unwrap().collect();
    let r = bound_check(&d01, &all).unwrap();
    println!("S = L_1: {} vs {} (exact equality)", r.lhs, r.rhs);
}
