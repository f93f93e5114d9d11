//! Order isomorphisms between `G∩[e,∞)` and `G∩[0,∞)` for dense `G`, grown
//! one point at a time.

use std::collections::BTreeMap;
use std::ops::Bound::{Excluded, Unbounded};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::groups::GroupDescriptor;
use crate::numbers::{strip_common_primes, Rational};

/// A finite strictly increasing matching from `G∩[e,∞)` to `G∩[0,∞)`.
///
/// `(e, 0)` is always matched and is the least pair. Every new pair is placed
/// in the gap its neighbours leave open, choosing the simplest admissible
/// element, so the state only depends on the requests made and their order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BackAndForthState {
    group: GroupDescriptor,
    e: Rational,
    forth: BTreeMap<Rational, Rational>,
    back: BTreeMap<Rational, Rational>,
}

/// Sort key of [`simplest_between`]: denominator, then `|numerator|`, then
/// positive before negative.
pub fn simplicity(x: &Rational) -> (BigInt, BigInt, bool) {
    (x.denom().clone(), x.numer().abs(), x.is_negative())
}

fn admissible_denominator(group: &GroupDescriptor, d: &BigInt) -> bool {
    match group {
        GroupDescriptor::Rationals => true,
        GroupDescriptor::MAdic { base } => strip_common_primes(d, *base).is_one(),
        GroupDescriptor::Cyclic { .. } => false,
    }
}

/// The simplest element of a dense group in the open interval `(lo, hi)`,
/// with `hi = None` for `+∞`.
pub fn simplest_between(group: &GroupDescriptor, lo: &Rational, hi: Option<&Rational>) -> Result<Rational> {
    if !group.is_dense() {
        return Err(Error::Unsupported(format!("back-and-forth needs a dense group, got {group}")));
    }
    if hi.is_some_and(|hi| hi <= lo) {
        return Err(Error::Precondition(format!("empty interval ({lo}, {})", hi.unwrap())));
    }
    let mut d = BigInt::one();
    loop {
        if admissible_denominator(group, &d) {
            let dq = Rational::from(d.clone());
            let n_min: BigInt = (lo * &dq).floor() + 1;
            let n_max: Option<BigInt> = hi.map(|hi| (hi * &dq).ceil() - 1);
            if n_max.as_ref().is_none_or(|n_max| &n_min <= n_max) {
                let n = if n_min.is_positive() {
                    n_min
                } else {
                    match n_max {
                        Some(n_max) if n_max.is_negative() => n_max,
                        _ => BigInt::zero(),
                    }
                };
                return Rational::new(n, d);
            }
        }
        d += 1;
    }
}

impl BackAndForthState {
    pub fn new(group: GroupDescriptor, e: Rational) -> Result<Self> {
        if !group.is_dense() {
            return Err(Error::Unsupported(format!("back-and-forth needs a dense group, got {group}")));
        }
        group.check(&e)?;
        let forth = BTreeMap::from([(e.clone(), Rational::zero())]);
        let back = BTreeMap::from([(Rational::zero(), e.clone())]);
        Ok(BackAndForthState { group, e, forth, back })
    }

    pub fn group(&self) -> &GroupDescriptor {
        &self.group
    }

    pub fn fixed_point(&self) -> &Rational {
        &self.e
    }

    pub fn len(&self) -> usize {
        self.forth.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forth.is_empty()
    }

    /// Matched pairs in increasing order.
    pub fn pairs(&self) -> impl Iterator<Item = (&Rational, &Rational)> {
        self.forth.iter()
    }

    pub fn forward(&self, x: &Rational) -> Option<&Rational> {
        self.forth.get(x)
    }

    pub fn backward(&self, y: &Rational) -> Option<&Rational> {
        self.back.get(y)
    }

    /// Matches a source point `x ≥ e`.
    pub fn extend_forth(mut self, x: &Rational) -> Result<Self> {
        self.group.check(x)?;
        if x < &self.e {
            return Err(Error::OutsideMatchedDomain(x.clone()));
        }
        if self.forth.contains_key(x) {
            return Ok(self);
        }
        let (_, below) = self.forth.range(..x.clone()).next_back().expect("(e, 0) lies below every x > e");
        let above = self.forth.range((Excluded(x.clone()), Unbounded)).next().map(|(_, y)| y);
        let y = simplest_between(&self.group, below, above)?;
        self.forth.insert(x.clone(), y.clone());
        self.back.insert(y, x.clone());
        Ok(self)
    }

    /// Matches a target point `y ≥ 0`.
    pub fn extend_back(mut self, y: &Rational) -> Result<Self> {
        self.group.check(y)?;
        if y.is_negative() {
            return Err(Error::OutsideMatchedDomain(y.clone()));
        }
        if self.back.contains_key(y) {
            return Ok(self);
        }
        let (_, below) = self.back.range(..y.clone()).next_back().expect("(e, 0) lies below every y > 0");
        let above = self.back.range((Excluded(y.clone()), Unbounded)).next().map(|(_, x)| x);
        let x = simplest_between(&self.group, below, above)?;
        self.back.insert(y.clone(), x.clone());
        self.forth.insert(x, y.clone());
        Ok(self)
    }

    /// Matches every source point, simplest first.
    pub fn extend_forth_all<'a>(self, xs: impl IntoIterator<Item = &'a Rational>) -> Result<Self> {
        let mut xs: Vec<&Rational> = xs.into_iter().collect();
        xs.sort_by_key(|x| simplicity(x));
        xs.into_iter().try_fold(self, |state, x| state.extend_forth(x))
    }
}
