//! Reproduce the component counts C = |H : <H_0, H_1>| of the level 0-1
//! subgraphs for g = t^n, together with the PGL2 analogue C~, and compare
//! them against the conjectured closed forms.

use congraph::analysis::{format_table1, table1_row};
use congraph::field::FieldCtx;
use congraph::poly::Poly;
use congraph::ring::RgCtx;

fn main() {
    let mut rows = Vec::new();
    for (p, k, ns) in [(2u32, 1u32, 2..=5), (2, 2, 2..=3), (3, 1, 2..=3)] {
        let field = FieldCtx::new(p, k).unwrap();
        for n in ns {
            let g = Poly::t(&field).pow(n);
            let ring = RgCtx::new(&field, g).unwrap();
            rows.push(table1_row(&ring, 1 << 24).unwrap());
        }
    }
    print!("{}", format_table1(&rows));
}
