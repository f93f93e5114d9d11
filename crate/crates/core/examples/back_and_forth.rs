// Order-isomorphic matching of [e, ∞) with [0, ∞) in a dense group.

use regroup::involution::back_and_forth::{simplest_between, BackAndForthState};
use regroup::{normalize, q, GroupDescriptor, HPolicy, Homeo, Window};

pub fn run_example() -> regroup::Result<()> {
    let g = GroupDescriptor::dyadic();
    println!("simplest in (1/3, 2/5): {}", simplest_between(&g, &q("1/3"), Some(&q("2/5")))?);

    let state = BackAndForthState::new(g.clone(), q("3/2"))?;
    let state = state.extend_forth(&q("2"))?.extend_forth(&q("7/4"))?.extend_back(&q("5"))?;
    for (x, y) in state.pairs() {
        println!("  {x} -> {y}");
    }

    let f = Homeo::affine(&g, q("-1"), q("3"))?;
    let w = Window::with_exponent(q("-1"), q("4"), 2)?;
    let nf = normalize(&f, &w, HPolicy::BackAndForth)?;
    println!("3 - x: h is {}, inversion check {:?}", nf.h.form(), nf.inversion_check().status);
    assert!(nf.passed());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
