// An involution with one fixed point is the inversion of some group law.

use regroup::{normalize, q, GroupDescriptor, HPolicy, Homeo, Window};

pub fn run_example() -> regroup::Result<()> {
    let z = GroupDescriptor::integers();
    let f = Homeo::affine(&z, q("-1"), q("2"))?;
    let nf = normalize(&f, &Window::symmetric(20), HPolicy::Canonical)?;
    println!("f = 2 - x: fixed point {}, h is {}", nf.e, nf.h.form());
    println!("5 ⊕ 7 = {}, ⊖5 = {} = f(5)", nf.transported.add(&q("5"), &q("7"))?, nf.transported.neg(&q("5"))?);
    for c in &nf.checks.checks {
        println!("  {:?} {} ({} checked)", c.status, c.law, c.checked);
    }
    assert!(nf.passed());

    // A table involution: negation with 6 ↔ 7 and -6 ↔ -7 swapped.
    let scrambled: Homeo = serde_json::from_str(regroup::corpus::get("maps/scrambled_negation_z.json").unwrap())?;
    let nf = normalize(&scrambled, &Window::symmetric(10), HPolicy::Canonical)?;
    println!("scrambled negation: h is {}, A sample {:?}", nf.h.form(), nf.a_sample);
    assert!(nf.passed());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
