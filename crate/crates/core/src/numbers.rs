//! Exact rational scalars.
//!
//! [`Rational`] wraps an arbitrary-precision fraction that is always kept in
//! lowest terms with a positive denominator, so derived equality, ordering
//! and hashing are structural.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

/// The exponent of the largest power of a base dividing an integer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(u64),
    /// Valuation of zero.
    Infinite,
}

impl Rational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Rational(BigRational::new(numer.into(), denom)))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    /// Always positive.
    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn ceil(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    pub fn recip(&self) -> Option<Self> {
        (!self.is_zero()).then(|| Rational(self.0.recip()))
    }

    pub fn checked_div(&self, other: &Rational) -> Option<Self> {
        (!other.is_zero()).then(|| Rational(&self.0 / &other.0))
    }

    /// `base^exp` for a possibly negative exponent.
    pub fn power(base: &Rational, exp: i32) -> Self {
        let mut acc = Rational::one();
        let factor = if exp < 0 {
            base.recip().expect("negative power of zero")
        } else {
            base.clone()
        };
        for _ in 0..exp.unsigned_abs() {
            acc = &acc * &factor;
        }
        acc
    }

    pub fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.numer().to_i64()
        } else {
            None
        }
    }

    /// Largest `k` with `base^k` dividing this integer; [`Valuation::Infinite`] for zero.
    pub fn valuation(&self, base: u32) -> Result<Valuation> {
        if base < 2 {
            return Err(Error::InvalidBase(base));
        }
        if !self.is_integer() {
            return Err(Error::NotAnInteger(self.clone()));
        }
        Ok(integer_valuation(self.numer(), base))
    }
}

pub(crate) fn integer_valuation(n: &BigInt, base: u32) -> Valuation {
    if n.is_zero() {
        return Valuation::Infinite;
    }
    let base = BigInt::from(base);
    let mut n = n.clone();
    let mut k = 0;
    loop {
        let (q, r) = n.div_rem(&base);
        if !r.is_zero() {
            return Valuation::Finite(k);
        }
        n = q;
        k += 1;
    }
}

/// Removes from `n` every prime factor it shares with `m`.
pub(crate) fn strip_common_primes(n: &BigInt, m: u32) -> BigInt {
    let m = BigInt::from(m);
    let mut n = n.abs();
    loop {
        let g = n.gcd(&m);
        if g.is_one() {
            return n;
        }
        while (&n % &g).is_zero() {
            n /= &g;
        }
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational::from_integer(n)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom().is_one() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::ParseRational(s.to_string());
        let t = s.trim();
        let (p, q) = match t.split_once('/') {
            Some((p, q)) => (p.trim(), Some(q.trim())),
            None => (t, None),
        };
        let numer = BigInt::from_str(p).map_err(|_| bad())?;
        match q {
            None => Ok(Rational::from_integer(numer)),
            Some(q) => {
                let denom = BigInt::from_str(q).map_err(|_| bad())?;
                Rational::new(numer, denom)
            }
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

struct RationalVisitor;

impl<'de> Visitor<'de> for RationalVisitor {
    type Value = Rational;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("a rational as \"p/q\", \"p\" or an integer")
    }

    fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Rational, E> {
        v.parse().map_err(E::custom)
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Rational, E> {
        Ok(Rational::from(v))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Rational, E> {
        Ok(Rational::from_integer(v))
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        deserializer.deserialize_any(RationalVisitor)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }

        impl<'a> $trait<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }

        impl<'a> $trait<Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }

        impl<'a, 'b> $trait<&'b Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'b Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
// Division by zero panics, as for the underlying fraction type.
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

/// Shorthand for parsing a literal in tests and examples. Panics on bad input.
pub fn q(s: &str) -> Rational {
    s.parse().unwrap_or_else(|e| panic!("bad rational literal {s:?}: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn sums() {
        assert_eq!(q("1/2") + q("1/3"), q("5/6"));
        assert_eq!(q("7/9") + Rational::zero(), q("7/9"));
        assert_eq!(q("1/3") + q("-1/3"), Rational::zero());
    }

    #[test]
    fn negation_and_canonical_form() {
        assert_eq!(-q("3/4"), q("-3/4"));
        let r = Rational::new(6, -8).unwrap();
        assert_eq!(r.numer(), &BigInt::from(-3));
        assert_eq!(r.denom(), &BigInt::from(4));
        assert_eq!(r.to_string(), "-3/4");
        assert_eq!(q("10/5").to_string(), "2");
    }

    #[test]
    fn parse_rejects_zero_denominator() {
        assert!(matches!("1/0".parse::<Rational>(), Err(Error::ZeroDenominator)));
        assert!("x/2".parse::<Rational>().is_err());
        assert!("".parse::<Rational>().is_err());
    }

    #[test]
    fn valuations() {
        assert_eq!(q("12").valuation(2).unwrap(), Valuation::Finite(2));
        assert_eq!(q("0").valuation(2).unwrap(), Valuation::Infinite);
        assert_eq!(q("-81").valuation(3).unwrap(), Valuation::Finite(4));
        assert_eq!(q("7").valuation(2).unwrap(), Valuation::Finite(0));
        assert!(matches!(q("1/2").valuation(2), Err(Error::NotAnInteger(_))));
        assert!(matches!(q("4").valuation(1), Err(Error::InvalidBase(1))));
    }

    #[test]
    fn json_text_form() {
        let r: Rational = serde_json::from_str("\"-6/4\"").unwrap();
        assert_eq!(serde_json::to_string(&r).unwrap(), "\"-3/2\"");
        let n: Rational = serde_json::from_str("5").unwrap();
        assert_eq!(n, q("5"));
    }

    #[test]
    fn strip_primes() {
        assert_eq!(strip_common_primes(&BigInt::from(24), 2), BigInt::from(3));
        assert_eq!(strip_common_primes(&BigInt::from(36), 6), BigInt::from(1));
        assert_eq!(strip_common_primes(&BigInt::from(-10), 3), BigInt::from(10));
    }

    fn small() -> impl Strategy<Value = Rational> {
        (-50i64..50, 1i64..20).prop_map(|(p, q)| Rational::new(p, q).unwrap())
    }

    proptest! {
        #[test]
        fn field_axioms(a in small(), b in small(), c in small()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &(-&a), Rational::zero());
        }

        #[test]
        fn order_matches_sign_of_difference(a in small(), b in small()) {
            let d = &a - &b;
            let expected = if d.is_zero() {
                std::cmp::Ordering::Equal
            } else if d.is_positive() {
                std::cmp::Ordering::Greater
            } else {
                std::cmp::Ordering::Less
            };
            prop_assert_eq!(a.cmp(&b), expected);
        }

        #[test]
        fn text_round_trip(a in small()) {
            prop_assert_eq!(a.to_string().parse::<Rational>().unwrap(), a);
        }
    }
}
