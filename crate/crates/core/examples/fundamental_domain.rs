// Conjugating an increasing fixed-point-free map to x + 1.

use regroup::{monotone_to_shift, q, three_piece_map, GroupMap, Window};

pub fn run_example() -> regroup::Result<()> {
    let f = three_piece_map();
    let w = Window::with_exponent(q("-4"), q("4"), 5)?;
    let attempt = monotone_to_shift(&f, &w)?;
    assert!(attempt.succeeded());
    let [x0, x1] = attempt.fundamental_domain.clone().unwrap();
    println!("fundamental domain [{x0}, {x1}), shift {}", attempt.shift);

    let t = attempt.t.as_ref().unwrap();
    for x in ["-3/2", "0", "1/4", "3"].map(q) {
        println!("t({x}) = {}, t(f({x})) = {}", t.image(&x)?, t.image(&f.image(&x)?)?);
    }
    let check = attempt.check.as_ref().unwrap();
    println!("{}: {:?} at {} points", check.law, check.status, check.checked);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
