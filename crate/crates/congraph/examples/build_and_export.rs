//! Build the levelled coset graph X_g for SL2(F_q[t]) at level g = t^2 over
//! F_2, print its level structure, and emit DOT and JSON serializations.

use congraph::export::{dot_string, json_string};
use congraph::field::FieldCtx;
use congraph::graph::{build_graph, BuildMode};
use congraph::matgroup::{GroupCtx, Variant};
use congraph::poly::Poly;
use congraph::ring::RgCtx;

fn main() {
    let field = FieldCtx::new(2, 1).unwrap();
    let g = Poly::parse(&field, "t^2").unwrap();
    let ring = RgCtx::new(&field, g).unwrap();
    let ctx = GroupCtx::new(&ring, Variant::Sl2);

    let graph = build_graph(&ctx, BuildMode::Full, 1 << 20, None).unwrap();
    println!("q = {}, g = {}", ctx.q(), ring.g());
    println!("level sizes: {:?}", graph.level_sizes());
    println!("edges: {}", graph.edge_count());
    println!("components: {}", graph.component_count);
    println!("cusps attached at the top level: {}", ctx.cusp_count());

    for a in graph.cusp_annotations().unwrap().iter().take(3) {
        println!("cusp rep {} via witness {}", a.cusp_key, a.witness);
    }

    println!("\n--- DOT ---\n{}", dot_string(&graph, true));
    println!("--- JSON ---\n{}", json_string(&graph).unwrap());
}
