// Piecewise-linear maps: composition, inverses, fixed points.

use regroup::maps::{Bound, Piece};
use regroup::{q, GroupDescriptor, GroupMap, Homeo, PLMap};

pub fn run_example() -> regroup::Result<()> {
    let g = GroupDescriptor::dyadic();
    let f = Homeo::Pl(PLMap::new(
        g.clone(),
        vec![
            Piece::new(Bound::NegInf, Bound::Finite(q("0")), q("-2"), q("0")),
            Piece::new(Bound::Finite(q("0")), Bound::PosInf, q("-1/2"), q("0")),
        ],
    )?);
    println!("f = {}", serde_json::to_string(&f)?);
    println!("f(3) = {}, f(-3) = {}", f.image(&q("3"))?, f.image(&q("-3"))?);
    println!("monotonicity: {:?}, involution: {}", f.monotonicity(), f.is_involution());

    let ff = f.compose(&f)?;
    assert!(ff.is_identity());

    let s = Homeo::affine(&g, q("2"), q("1"))?;
    let back = s.invert();
    assert_eq!(back.image(&s.image(&q("3/4"))?)?, q("3/4"));
    println!("fixed points of 2x+1: {:?}", s.fixed_points()?);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
