// Exact rationals: parsing, canonical form and p-adic valuations.

use regroup::{q, Rational, Valuation};

pub fn run_example() -> regroup::Result<()> {
    let x: Rational = "6/-4".parse()?;
    assert_eq!(x, q("-3/2"));
    println!("6/-4 = {x}, floor {}, ceil {}", x.floor(), x.ceil());

    let sum = q("1/3") + q("1/6");
    println!("1/3 + 1/6 = {sum}");

    for s in ["12", "-40", "0", "7"] {
        let v = match q(s).valuation(2)? {
            Valuation::Finite(v) => v.to_string(),
            Valuation::Infinite => "inf".to_string(),
        };
        println!("v_2({s}) = {v}");
    }
    assert!("1/0".parse::<Rational>().is_err());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
