// A fixed-point-free bijection of Z whose orbit count grows with the window,
// so no group law on Z makes it a shift.

use regroup::dynamics::{bijection_check, periodic_point_scan};
use regroup::maps::PartitionScheme;
use regroup::{example_map, q, shift_obstruction, GroupMap, Homeo, Verdict, Window};

pub fn run_example() -> regroup::Result<()> {
    let f = example_map(PartitionScheme::madic(2));
    let orbit: Vec<String> = std::iter::successors(Some(q("2")), |x| f.image(x).ok()).take(6).map(|x| x.to_string()).collect();
    println!("orbit of 2: {}", orbit.join(" -> "));

    let w = Window::symmetric(256);
    assert!(bijection_check(&f, &w)?.passed());
    assert!(periodic_point_scan(&f, &w, 64)?.passed());

    let report = shift_obstruction(&f, &[16, 64, 256, 1024])?;
    for row in &report.growth {
        println!("[-{0}, {0}]: {1} orbits", row.half_width, row.orbit_count_lower_bound);
    }
    println!("verdict: {}", report.label());
    assert_eq!(report.verdict, Verdict::UnboundedEvidence);

    let shift = Homeo::shift(&regroup::GroupDescriptor::integers(), q("3"))?;
    println!("x + 3: {}", shift_obstruction(&shift, &[16, 64, 256])?.label());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
