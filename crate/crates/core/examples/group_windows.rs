// Group descriptors and the finite windows every check runs on.

use regroup::{q, GroupDescriptor, Window};

pub fn run_example() -> regroup::Result<()> {
    let even = GroupDescriptor::cyclic(q("2"))?;
    let w = Window::symmetric(6);
    println!("2Z on [-6, 6]: {:?}", even.enumerate_window(&w)?.iter().map(|x| x.to_string()).collect::<Vec<_>>());

    // Dense groups need a resolution: denominators up to 2^k for Z[1/2].
    let dyadic = GroupDescriptor::dyadic();
    let w = Window::with_exponent(q("0"), q("1"), 2)?;
    let xs: Vec<String> = dyadic.enumerate_window(&w)?.iter().map(|x| x.to_string()).collect();
    println!("Z[1/2] on [0, 1] at k = 2: {xs:?}");
    assert_eq!(xs.len(), 5);

    let w = Window::with_max_denominator(q("0"), q("1"), 3)?;
    let xs = GroupDescriptor::Rationals.enumerate_window(&w)?;
    println!("Q on [0, 1] with denominators up to 3: {} points", xs.len());

    assert!(dyadic.contains(&q("5/8")));
    assert!(!dyadic.contains(&q("1/3")));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
