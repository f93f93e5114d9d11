//! The computable subgroups of the reals supported by the crate, their
//! elements, and finite windows onto them.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Pow};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numbers::{strip_common_primes, Rational};

/// A subgroup of `(R, +)` with decidable membership.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", try_from = "RawGroup")]
pub enum GroupDescriptor {
    /// `a·Z` for a positive rational step `a`. Discrete.
    #[serde(rename = "cyclic")]
    Cyclic { step: Rational },
    /// `Z[1/m]`, the rationals whose denominator divides a power of `m`. Dense.
    #[serde(rename = "madic")]
    MAdic { base: u32 },
    /// All of `Q`. Dense.
    #[serde(rename = "rationals")]
    Rationals,
}

#[derive(Deserialize)]
#[serde(tag = "kind")]
enum RawGroup {
    #[serde(rename = "cyclic")]
    Cyclic { step: Rational },
    #[serde(rename = "madic")]
    MAdic { base: u32 },
    #[serde(rename = "rationals")]
    Rationals,
}

impl TryFrom<RawGroup> for GroupDescriptor {
    type Error = Error;

    fn try_from(raw: RawGroup) -> Result<Self> {
        match raw {
            RawGroup::Cyclic { step } => GroupDescriptor::cyclic(step),
            RawGroup::MAdic { base } => GroupDescriptor::madic(base),
            RawGroup::Rationals => Ok(GroupDescriptor::Rationals),
        }
    }
}

impl GroupDescriptor {
    pub fn cyclic(step: Rational) -> Result<Self> {
        if !step.is_positive() {
            return Err(Error::InvalidDescriptor(format!("cyclic step must be positive, got {step}")));
        }
        Ok(GroupDescriptor::Cyclic { step })
    }

    pub fn integers() -> Self {
        GroupDescriptor::Cyclic { step: Rational::one() }
    }

    pub fn madic(base: u32) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidDescriptor(format!("m-adic base must be at least 2, got {base}")));
        }
        Ok(GroupDescriptor::MAdic { base })
    }

    pub fn dyadic() -> Self {
        GroupDescriptor::MAdic { base: 2 }
    }

    pub fn is_dense(&self) -> bool {
        !matches!(self, GroupDescriptor::Cyclic { .. })
    }

    /// The lattice step of a discrete group.
    pub fn step(&self) -> Option<&Rational> {
        match self {
            GroupDescriptor::Cyclic { step } => Some(step),
            _ => None,
        }
    }

    /// A canonical positive element: the step of `a·Z`, otherwise 1.
    pub fn generator(&self) -> Rational {
        self.step().cloned().unwrap_or_else(Rational::one)
    }

    pub fn contains(&self, x: &Rational) -> bool {
        match self {
            GroupDescriptor::Cyclic { step } => (x / step).is_integer(),
            GroupDescriptor::MAdic { base } => strip_common_primes(x.denom(), *base).is_one(),
            GroupDescriptor::Rationals => true,
        }
    }

    pub fn check(&self, x: &Rational) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::NotAMember { value: x.clone(), group: self.to_string() })
        }
    }

    pub(crate) fn same_as(&self, other: &GroupDescriptor) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::DescriptorMismatch { left: self.to_string(), right: other.to_string() })
        }
    }

    /// Every element of the group inside the window, strictly increasing.
    pub fn enumerate_window(&self, w: &Window) -> Result<Vec<Rational>> {
        match self {
            GroupDescriptor::Cyclic { step } => {
                let first = (&w.lo / step).ceil();
                let last = (&w.hi / step).floor();
                Ok(int_range(&first, &last).map(|n| Rational::from(n) * step).collect())
            }
            GroupDescriptor::MAdic { base } => {
                let k = match w.resolution {
                    Some(Resolution::Exponent(k)) => k,
                    _ => return Err(Error::InvalidWindow(format!("{self} needs a denom_exp resolution"))),
                };
                let scale = Rational::from_integer(Pow::pow(BigInt::from(*base), k));
                let first = (&w.lo * &scale).ceil();
                let last = (&w.hi * &scale).floor();
                Ok(int_range(&first, &last).map(|n| Rational::from(n) / &scale).collect())
            }
            GroupDescriptor::Rationals => {
                let max_denom = match w.resolution {
                    Some(Resolution::MaxDenominator(q)) => q,
                    _ => return Err(Error::InvalidWindow("rationals need a max_denom resolution".into())),
                };
                let mut out = BTreeSet::new();
                for q in 1..=max_denom {
                    let qr = Rational::from(i64::from(q));
                    let first = (&w.lo * &qr).ceil();
                    let last = (&w.hi * &qr).floor();
                    for p in int_range(&first, &last) {
                        out.insert(Rational::new(p, q).expect("q >= 1"));
                    }
                }
                Ok(out.into_iter().collect())
            }
        }
    }
}

fn int_range(first: &BigInt, last: &BigInt) -> impl Iterator<Item = BigInt> {
    let last = last.clone();
    std::iter::successors(Some(first.clone()), |n| Some(n + 1)).take_while(move |n| *n <= last)
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupDescriptor::Cyclic { step } if step.is_integer() && step.numer().is_one() => write!(f, "Z"),
            GroupDescriptor::Cyclic { step } => write!(f, "({step})Z"),
            GroupDescriptor::MAdic { base } => write!(f, "Z[1/{base}]"),
            GroupDescriptor::Rationals => write!(f, "Q"),
        }
    }
}

impl fmt::Debug for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A rational certified to lie in its group.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement {
    value: Rational,
    group: GroupDescriptor,
}

impl GroupElement {
    pub fn new(group: &GroupDescriptor, value: Rational) -> Result<Self> {
        group.check(&value)?;
        Ok(GroupElement { value, group: group.clone() })
    }

    pub(crate) fn trusted(group: &GroupDescriptor, value: Rational) -> Self {
        debug_assert!(group.contains(&value));
        GroupElement { value, group: group.clone() }
    }

    pub fn neutral(group: &GroupDescriptor) -> Self {
        GroupElement { value: Rational::zero(), group: group.clone() }
    }

    pub fn value(&self) -> &Rational {
        &self.value
    }

    pub fn group(&self) -> &GroupDescriptor {
        &self.group
    }

    pub fn into_value(self) -> Rational {
        self.value
    }

    pub fn native_add(&self, other: &GroupElement) -> Result<GroupElement> {
        self.group.same_as(&other.group)?;
        Ok(GroupElement::trusted(&self.group, &self.value + &other.value))
    }

    pub fn native_neg(&self) -> GroupElement {
        GroupElement::trusted(&self.group, -&self.value)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}", self.value, self.group)
    }
}

/// Truncation parameter for dense groups.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Resolution {
    /// Denominators dividing `m^k` in `Z[1/m]`.
    Exponent(u32),
    /// Denominators at most `q` in `Q`.
    MaxDenominator(u32),
}

/// A closed interval `[lo, hi]`, with a resolution when the group is dense.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawWindow", into = "RawWindow")]
pub struct Window {
    pub lo: Rational,
    pub hi: Rational,
    pub resolution: Option<Resolution>,
}

#[derive(Clone, Serialize, Deserialize)]
struct RawWindow {
    lo: Rational,
    hi: Rational,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    denom_exp: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    max_denom: Option<u32>,
}

impl TryFrom<RawWindow> for Window {
    type Error = Error;

    fn try_from(raw: RawWindow) -> Result<Self> {
        let resolution = match (raw.denom_exp, raw.max_denom) {
            (Some(_), Some(_)) => {
                return Err(Error::InvalidWindow("give either denom_exp or max_denom, not both".into()))
            }
            (Some(k), None) => Some(Resolution::Exponent(k)),
            (None, Some(q)) => Some(Resolution::MaxDenominator(q)),
            (None, None) => None,
        };
        Window::build(raw.lo, raw.hi, resolution)
    }
}

impl From<Window> for RawWindow {
    fn from(w: Window) -> Self {
        let (denom_exp, max_denom) = match w.resolution {
            Some(Resolution::Exponent(k)) => (Some(k), None),
            Some(Resolution::MaxDenominator(q)) => (None, Some(q)),
            None => (None, None),
        };
        RawWindow { lo: w.lo, hi: w.hi, denom_exp, max_denom }
    }
}

impl Window {
    fn build(lo: Rational, hi: Rational, resolution: Option<Resolution>) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidWindow(format!("lo {lo} exceeds hi {hi}")));
        }
        if resolution == Some(Resolution::MaxDenominator(0)) {
            return Err(Error::InvalidWindow("max_denom must be at least 1".into()));
        }
        Ok(Window { lo, hi, resolution })
    }

    /// A window for a discrete group.
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        Window::build(lo, hi, None)
    }

    /// A window on `Z[1/m]` at resolution `m^-k`.
    pub fn with_exponent(lo: Rational, hi: Rational, k: u32) -> Result<Self> {
        Window::build(lo, hi, Some(Resolution::Exponent(k)))
    }

    /// A window on `Q` with denominators up to `max_denom`.
    pub fn with_max_denominator(lo: Rational, hi: Rational, max_denom: u32) -> Result<Self> {
        Window::build(lo, hi, Some(Resolution::MaxDenominator(max_denom)))
    }

    /// `[-n, n]` with no resolution.
    pub fn symmetric(n: i64) -> Self {
        Window { lo: Rational::from(-n.abs()), hi: Rational::from(n.abs()), resolution: None }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)?;
        match self.resolution {
            Some(Resolution::Exponent(k)) => write!(f, " k={k}"),
            Some(Resolution::MaxDenominator(q)) => write!(f, " denom<={q}"),
            None => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numbers::q;

    #[test]
    fn membership() {
        assert!(GroupDescriptor::dyadic().contains(&q("3/4")));
        assert!(!GroupDescriptor::dyadic().contains(&q("1/3")));
        let half = GroupDescriptor::cyclic(q("1/2")).unwrap();
        assert!(half.contains(&q("5/2")));
        assert!(!half.contains(&q("1/3")));
        assert!(GroupDescriptor::madic(6).unwrap().contains(&q("5/12")));
        assert!(!GroupDescriptor::madic(6).unwrap().contains(&q("1/5")));
        assert!(GroupDescriptor::Rationals.contains(&q("22/7")));
    }

    #[test]
    fn rejects_bad_descriptors() {
        assert!(GroupDescriptor::cyclic(q("0")).is_err());
        assert!(GroupDescriptor::cyclic(q("-1")).is_err());
        assert!(GroupDescriptor::madic(1).is_err());
        assert!(serde_json::from_str::<GroupDescriptor>(r#"{"kind":"madic","base":0}"#).is_err());
    }

    #[test]
    fn descriptor_json() {
        let g: GroupDescriptor = serde_json::from_str(r#"{"kind":"cyclic","step":"1/2"}"#).unwrap();
        assert_eq!(g, GroupDescriptor::cyclic(q("1/2")).unwrap());
        let g: GroupDescriptor = serde_json::from_str(r#"{"kind":"madic","base":2}"#).unwrap();
        assert_eq!(g, GroupDescriptor::dyadic());
        let g: GroupDescriptor = serde_json::from_str(r#"{"kind":"rationals"}"#).unwrap();
        assert_eq!(g, GroupDescriptor::Rationals);
        assert_eq!(serde_json::to_string(&GroupDescriptor::dyadic()).unwrap(), r#"{"kind":"madic","base":2}"#);
    }

    #[test]
    fn dyadic_window() {
        let w = Window::with_exponent(q("0"), q("1"), 3).unwrap();
        let xs = GroupDescriptor::dyadic().enumerate_window(&w).unwrap();
        assert_eq!(xs.len(), 9);
        assert_eq!(xs[1], q("1/8"));
        assert_eq!(xs[8], q("1"));
    }

    #[test]
    fn integer_window() {
        let xs = GroupDescriptor::integers().enumerate_window(&Window::symmetric(2)).unwrap();
        assert_eq!(xs, vec![q("-2"), q("-1"), q("0"), q("1"), q("2")]);
    }

    #[test]
    fn rational_window_matches_brute_force() {
        // Brute force: every p/q with 1 <= q <= 3 in [0, 1], deduplicated and sorted.
        let mut expected: Vec<(i64, i64)> = Vec::new();
        for den in 1..=3i64 {
            for num in 0..=den {
                expected.push((num, den));
            }
        }
        let mut expected: Vec<Rational> = expected.into_iter().map(|(a, b)| Rational::new(a, b).unwrap()).collect();
        expected.sort();
        expected.dedup();
        let w = Window::with_max_denominator(q("0"), q("1"), 3).unwrap();
        let got = GroupDescriptor::Rationals.enumerate_window(&w).unwrap();
        assert_eq!(got, expected);
        assert_eq!(got, vec![q("0"), q("1/3"), q("1/2"), q("2/3"), q("1")]);
    }

    #[test]
    fn dense_window_needs_resolution() {
        let w = Window::symmetric(1);
        assert!(GroupDescriptor::dyadic().enumerate_window(&w).is_err());
        assert!(GroupDescriptor::Rationals.enumerate_window(&w).is_err());
        assert!(Window::new(q("2"), q("1")).is_err());
    }

    #[test]
    fn window_json() {
        let w: Window = serde_json::from_str(r#"{"lo":"-4","hi":"4","denom_exp":3}"#).unwrap();
        assert_eq!(w, Window::with_exponent(q("-4"), q("4"), 3).unwrap());
        assert_eq!(serde_json::to_string(&w).unwrap(), r#"{"lo":"-4","hi":"4","denom_exp":3}"#);
        assert!(serde_json::from_str::<Window>(r#"{"lo":"1","hi":"0"}"#).is_err());
    }

    #[test]
    fn native_operations() {
        let g = GroupDescriptor::dyadic();
        let a = GroupElement::new(&g, q("1/2")).unwrap();
        let b = GroupElement::new(&g, q("1/4")).unwrap();
        assert_eq!(a.native_add(&b).unwrap().value(), &q("3/4"));
        let z = GroupDescriptor::integers();
        assert_eq!(GroupElement::new(&z, q("5")).unwrap().native_neg().value(), &q("-5"));
        assert!(GroupElement::neutral(&g).value().is_zero());
        let c = GroupElement::new(&z, q("1")).unwrap();
        assert!(matches!(a.native_add(&c), Err(Error::DescriptorMismatch { .. })));
        assert!(GroupElement::new(&z, q("1/2")).is_err());
    }

    #[test]
    fn window_closure() {
        for (g, w) in [
            (GroupDescriptor::dyadic(), Window::with_exponent(q("-1"), q("1"), 3).unwrap()),
            (GroupDescriptor::cyclic(q("1/3")).unwrap(), Window::symmetric(2)),
            (GroupDescriptor::Rationals, Window::with_max_denominator(q("-1"), q("1"), 4).unwrap()),
        ] {
            let xs = g.enumerate_window(&w).unwrap();
            assert!(xs.windows(2).all(|p| p[0] < p[1]));
            assert_eq!(xs, g.enumerate_window(&w).unwrap());
            for x in &xs {
                assert!(g.contains(&-x));
                for y in &xs {
                    assert!(g.contains(&(x + y)));
                }
            }
        }
    }
}
