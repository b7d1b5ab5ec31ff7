//! Compare the three graph variants up to level-respecting isomorphism.
//!
//! X_g (from SL2) and the true PGL2(F_q[t]) quotient X-bar_g are always
//! isomorphic.  Morgenstern's X-tilde_g differs exactly when the unit
//! square-class index |R^x : F_q^x R^x2| exceeds 1: for q = 2, g = t^2 it is
//! disconnected and NON-ISO, while for odd q and g = t^n the index is 1 and
//! an explicit certificate exists.

use congraph::field::FieldCtx;
use congraph::graph::{build_graph, BuildMode};
use congraph::iso::{iso_check, verify_certificate, AbstractGraph};
use congraph::matgroup::{GroupCtx, Variant};
use congraph::poly::Poly;
use congraph::ring::RgCtx;

fn graph(p: u32, g: &str, variant: Variant) -> AbstractGraph {
    let field = FieldCtx::new(p, 1).unwrap();
    let g = Poly::parse(&field, g).unwrap();
    let ctx = GroupCtx::new(&RgCtx::new(&field, g).unwrap(), variant);
    (&build_graph(&ctx, BuildMode::Full, 1 << 20, None).unwrap()).into()
}

fn report(label: &str, a: &AbstractGraph, b: &AbstractGraph) {
    match iso_check(a, b, 1 << 16).unwrap() {
        Some(map) => {
            assert!(verify_certificate(a, b, &map));
            println!("{label}: ISO (certificate verified, {} vertices)", map.len());
        }
        None => println!("{label}: NON-ISO"),
    }
}

fn main() {
    for (p, g) in [(2u32, "t^2"), (3, "t^2")] {
        let x = graph(p, g, Variant::Sl2);
        let x_bar = graph(p, g, Variant::PglBar);
        let x_tilde = graph(p, g, Variant::PglM);
        report(&format!("q={p} g={g}  X vs X-bar"), &x, &x_bar);
        report(&format!("q={p} g={g}  X vs X-tilde"), &x, &x_tilde);
    }
}
