//! Reduction SL2(F_q[t]) -> SL2(R_g) is surjective: lift matrices through a
//! det-1 Smith normal form and verify the results exactly.

use congraph::field::FieldCtx;
use congraph::matgroup::{GroupCtx, Variant};
use congraph::poly::Poly;
use congraph::ring::RgCtx;

fn main() {
    let field = FieldCtx::new(3, 1).unwrap();
    let g = Poly::parse(&field, "t^2").unwrap();
    let ring = RgCtx::new(&field, g).unwrap();
    let ctx = GroupCtx::new(&ring, Variant::Sl2);

    for text in ["[[1,0],[0,1]]", "[[0,1],[2,0]]", "[[t+1,1],[t,1]]", "[[2*t,1],[2,t]]"] {
        let m = ctx.parse_mat2(text).unwrap();
        ctx.check_valid(&m).unwrap();
        let lift = ctx.sl2_lift(&m).unwrap();
        assert_eq!(lift.det(), Poly::one(&field));
        assert_eq!(ctx.reduce_poly_mat(&lift), m);
        println!("{} over R_g lifts to {} over F_q[t]", ctx.format_mat2(&m), lift);
    }
}
