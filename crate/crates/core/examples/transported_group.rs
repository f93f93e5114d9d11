// A group law moved along a bijection, checked on a window.

use regroup::{q, GroupDescriptor, Homeo, TransportedGroup, Window};

pub fn run_example() -> regroup::Result<()> {
    let z = GroupDescriptor::integers();
    // h(x) = x - 1 gives x ⊕ y = x + y - 1 with neutral element 1.
    let t = TransportedGroup::new(Homeo::affine(&z, q("1"), q("-1"))?)?;
    println!("neutral {}, 3 ⊕ 4 = {}, ⊖3 = {}", t.neutral(), t.add(&q("3"), &q("4"))?, t.neg(&q("3"))?);

    let w = Window::symmetric(10);
    let axioms = t.verify_axioms(&w)?;
    for c in &axioms.checks {
        println!("{:>14}: {:?} ({} checked)", c.law, c.status, c.checked);
    }
    assert!(axioms.passed());
    assert!(t.verify_isomorphism(&w)?.passed());

    // The native shift by 1 becomes the transported shift by h⁻¹(1) = 2.
    println!("shift constant for c = 1: {}", t.shift_constant(&q("1"))?);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
