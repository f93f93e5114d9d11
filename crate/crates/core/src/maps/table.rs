use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::GroupDescriptor;
use crate::numbers::Rational;

use super::{FixedPoints, Monotonicity};

/// An affine germ of a lattice bijection: `x + c` (`dir = 1`) or `c - x` (`dir = -1`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Tail {
    pub dir: i8,
    pub c: Rational,
}

impl Tail {
    pub fn forward(c: Rational) -> Self {
        Tail { dir: 1, c }
    }

    pub fn backward(c: Rational) -> Self {
        Tail { dir: -1, c }
    }

    pub fn at(&self, x: &Rational) -> Rational {
        if self.dir == 1 {
            x + &self.c
        } else {
            &self.c - x
        }
    }

    fn solve(&self, y: &Rational) -> Rational {
        if self.dir == 1 {
            y - &self.c
        } else {
            &self.c - y
        }
    }
}

/// A bijection of `a·Z` given by finitely many exceptional values on a
/// contiguous block, with affine tails on either side.
///
/// The lower tail applies to `x <= lower_to`, the upper tail to
/// `x >= upper_from`, and the exceptions cover every lattice point strictly
/// between. Exceptions that agree with an adjacent tail are absorbed into it,
/// which makes the representation canonical.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawTable", into = "RawTable")]
pub struct TableMap {
    group: GroupDescriptor,
    step: Rational,
    exceptions: BTreeMap<Rational, Rational>,
    inverse_exceptions: BTreeMap<Rational, Rational>,
    lower_to: Rational,
    upper_from: Rational,
    lower: Tail,
    upper: Tail,
}

fn default_group() -> GroupDescriptor {
    GroupDescriptor::integers()
}

#[derive(Clone, Serialize, Deserialize)]
struct RawTable {
    #[serde(default = "default_group")]
    group: GroupDescriptor,
    #[serde(default)]
    exceptions: BTreeMap<Rational, Rational>,
    upper: Tail,
    lower: Tail,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    split: Option<Rational>,
}

impl TryFrom<RawTable> for TableMap {
    type Error = Error;

    fn try_from(raw: RawTable) -> Result<Self> {
        TableMap::new(raw.group, raw.exceptions, raw.lower, raw.upper, raw.split)
    }
}

impl From<TableMap> for RawTable {
    fn from(t: TableMap) -> Self {
        let split = t.exceptions.is_empty().then(|| t.upper_from.clone());
        RawTable { group: t.group, exceptions: t.exceptions, upper: t.upper, lower: t.lower, split }
    }
}

impl TableMap {
    /// Builds a table map. With no exceptions, `split` (default 0) is the
    /// first point handled by the upper tail; otherwise it must be absent.
    pub fn new(
        group: GroupDescriptor,
        exceptions: BTreeMap<Rational, Rational>,
        lower: Tail,
        upper: Tail,
        split: Option<Rational>,
    ) -> Result<Self> {
        let step = group
            .step()
            .cloned()
            .ok_or_else(|| Error::InvalidMap(format!("table maps need a discrete group, got {group}")))?;
        let (lower_to, upper_from) = match (exceptions.keys().next(), exceptions.keys().next_back()) {
            (Some(lo), Some(hi)) => {
                if split.is_some() {
                    return Err(Error::InvalidMap("split is only meaningful without exceptions".into()));
                }
                (lo - &step, hi + &step)
            }
            _ => {
                let s = split.unwrap_or_else(Rational::zero);
                (&s - &step, s)
            }
        };
        TableMap::from_parts(group, exceptions, lower_to, upper_from, lower, upper)
    }

    fn from_parts(
        group: GroupDescriptor,
        exceptions: BTreeMap<Rational, Rational>,
        lower_to: Rational,
        upper_from: Rational,
        lower: Tail,
        upper: Tail,
    ) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidMap(msg));
        let step = match group.step() {
            Some(a) => a.clone(),
            None => return bad(format!("table maps need a discrete group, got {group}")),
        };
        for tail in [&lower, &upper] {
            if tail.dir != 1 && tail.dir != -1 {
                return bad(format!("tail direction must be 1 or -1, got {}", tail.dir));
            }
            group.check(&tail.c)?;
        }
        group.check(&lower_to)?;
        group.check(&upper_from)?;
        let span = (&upper_from - &lower_to) / &step;
        if span != Rational::from(exceptions.len() as i64 + 1) {
            return bad("exceptions must fill the block between the tails without gaps".into());
        }
        let mut inverse_exceptions = BTreeMap::new();
        for (x, y) in &exceptions {
            group.check(x)?;
            group.check(y)?;
            if x <= &lower_to || x >= &upper_from {
                return bad(format!("exception at {x} lies inside a tail"));
            }
            if inverse_exceptions.insert(y.clone(), x.clone()).is_some() {
                return bad(format!("value {y} is hit twice"));
            }
        }
        let (below_top, above_bottom) = match (lower.dir, upper.dir) {
            (1, 1) => (&lower_to + &lower.c, &upper_from + &upper.c),
            (-1, -1) => (&upper.c - &upper_from, &lower.c - &lower_to),
            _ => return bad("tails point the same way, so their images overlap".into()),
        };
        if below_top >= above_bottom {
            return bad("tail images overlap".into());
        }
        let gap = (&above_bottom - &below_top) / &step - Rational::one();
        if gap != Rational::from(exceptions.len() as i64) {
            return bad("exceptional values do not fill the complement of the tail images".into());
        }
        if let Some(v) = inverse_exceptions.keys().find(|v| **v <= below_top || **v >= above_bottom) {
            return bad(format!("exceptional value {v} collides with a tail image"));
        }
        let mut map = TableMap { group, step, exceptions, inverse_exceptions, lower_to, upper_from, lower, upper };
        map.absorb();
        Ok(map)
    }

    fn absorb(&mut self) {
        while let Some((x, y)) = self.exceptions.iter().next_back().map(|(x, y)| (x.clone(), y.clone())) {
            if self.upper.at(&x) != y {
                break;
            }
            self.exceptions.remove(&x);
            self.inverse_exceptions.remove(&y);
            self.upper_from = x;
        }
        while let Some((x, y)) = self.exceptions.iter().next().map(|(x, y)| (x.clone(), y.clone())) {
            if self.lower.at(&x) != y {
                break;
            }
            self.exceptions.remove(&x);
            self.inverse_exceptions.remove(&y);
            self.lower_to = x;
        }
        if self.exceptions.is_empty() && self.lower == self.upper {
            self.upper_from = Rational::zero();
            self.lower_to = -&self.step;
        }
    }

    pub fn shift(group: GroupDescriptor, c: Rational) -> Result<Self> {
        TableMap::new(group, BTreeMap::new(), Tail::forward(c.clone()), Tail::forward(c), None)
    }

    pub fn identity(group: GroupDescriptor) -> Result<Self> {
        TableMap::shift(group, Rational::zero())
    }

    pub fn negation(group: GroupDescriptor) -> Result<Self> {
        TableMap::new(group, BTreeMap::new(), Tail::backward(Rational::zero()), Tail::backward(Rational::zero()), None)
    }

    pub fn group(&self) -> &GroupDescriptor {
        &self.group
    }

    pub fn step(&self) -> &Rational {
        &self.step
    }

    pub fn exceptions(&self) -> &BTreeMap<Rational, Rational> {
        &self.exceptions
    }

    pub fn upper(&self) -> &Tail {
        &self.upper
    }

    pub fn lower(&self) -> &Tail {
        &self.lower
    }

    /// First lattice point handled by the upper tail.
    pub fn upper_from(&self) -> &Rational {
        &self.upper_from
    }

    /// Last lattice point handled by the lower tail.
    pub fn lower_to(&self) -> &Rational {
        &self.lower_to
    }

    pub fn is_identity(&self) -> bool {
        self.exceptions.is_empty() && self.lower == Tail::forward(Rational::zero()) && self.lower == self.upper
    }

    /// Assumes `x` is a lattice point.
    pub fn eval_lattice(&self, x: &Rational) -> Rational {
        if x >= &self.upper_from {
            self.upper.at(x)
        } else if x <= &self.lower_to {
            self.lower.at(x)
        } else {
            self.exceptions[x].clone()
        }
    }

    fn image_rays(&self) -> (Rational, Rational) {
        if self.upper.dir == 1 {
            (&self.lower_to + &self.lower.c, &self.upper_from + &self.upper.c)
        } else {
            (&self.upper.c - &self.upper_from, &self.lower.c - &self.lower_to)
        }
    }

    /// Assumes `y` is a lattice point.
    pub fn preimage_lattice(&self, y: &Rational) -> Rational {
        let (below_top, above_bottom) = self.image_rays();
        let increasing = self.upper.dir == 1;
        if y >= &above_bottom {
            if increasing { self.upper.solve(y) } else { self.lower.solve(y) }
        } else if y <= &below_top {
            if increasing { self.lower.solve(y) } else { self.upper.solve(y) }
        } else {
            self.inverse_exceptions[y].clone()
        }
    }

    pub fn invert(&self) -> TableMap {
        let exceptions = self.inverse_exceptions.clone();
        let (below_top, above_bottom) = self.image_rays();
        let built = if self.upper.dir == 1 {
            TableMap::from_parts(
                self.group.clone(),
                exceptions,
                below_top,
                above_bottom,
                Tail::forward(-&self.lower.c),
                Tail::forward(-&self.upper.c),
            )
        } else {
            TableMap::from_parts(
                self.group.clone(),
                exceptions,
                below_top,
                above_bottom,
                Tail::backward(self.upper.c.clone()),
                Tail::backward(self.lower.c.clone()),
            )
        };
        built.expect("the inverse of a valid table map is valid")
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &TableMap) -> Result<TableMap> {
        self.group.same_as(&inner.group)?;
        let a = &self.step;
        // Far right: inner's upper tail, landing in one of self's tails.
        let (right, upper) = if inner.upper.dir == 1 {
            let r = std::cmp::max(inner.upper_from.clone(), &self.upper_from - &inner.upper.c);
            (r, Tail { dir: self.upper.dir, c: self.upper.at(&inner.upper.c) })
        } else {
            let r = std::cmp::max(inner.upper_from.clone(), &inner.upper.c - &self.lower_to);
            (r, Tail { dir: -self.lower.dir, c: self.lower.at(&inner.upper.c) })
        };
        let (left, lower) = if inner.lower.dir == 1 {
            let l = std::cmp::min(inner.lower_to.clone(), &self.lower_to - &inner.lower.c);
            (l, Tail { dir: self.lower.dir, c: self.lower.at(&inner.lower.c) })
        } else {
            let l = std::cmp::min(inner.lower_to.clone(), &inner.lower.c - &self.upper_from);
            (l, Tail { dir: -self.upper.dir, c: self.upper.at(&inner.lower.c) })
        };
        let left = std::cmp::min(left, &right - a);
        let mut exceptions = BTreeMap::new();
        let mut x = &left + a;
        while x < right {
            let y = self.eval_lattice(&inner.eval_lattice(&x));
            exceptions.insert(x.clone(), y);
            x = &x + a;
        }
        TableMap::from_parts(self.group.clone(), exceptions, left, right, lower, upper)
    }

    pub fn is_involution(&self) -> bool {
        self.compose(self).map(|sq| sq.is_identity()).unwrap_or(false)
    }

    /// Exact: exceptions are scanned and each tail is solved in closed form.
    pub fn fixed_points(&self) -> Result<FixedPoints> {
        let mut points: Vec<Rational> = Vec::new();
        let two = Rational::from(2);
        if self.lower.dir == -1 {
            let x = &self.lower.c / &two;
            if x <= self.lower_to && self.group.contains(&x) {
                points.push(x);
            }
        } else if self.lower.c.is_zero() {
            return Err(Error::ContinuumOfFixedPoints { lo: "-inf".into(), hi: self.lower_to.to_string() });
        }
        points.extend(self.exceptions.iter().filter(|(x, y)| x == y).map(|(x, _)| x.clone()));
        if self.upper.dir == -1 {
            let x = &self.upper.c / &two;
            if x >= self.upper_from && self.group.contains(&x) {
                points.push(x);
            }
        } else if self.upper.c.is_zero() {
            return Err(Error::ContinuumOfFixedPoints { lo: self.upper_from.to_string(), hi: "inf".into() });
        }
        Ok(FixedPoints { points, complete: true })
    }

    /// Tails are affine, so order is decided by the block from `lower_to`
    /// through `upper_from`.
    pub fn monotonicity(&self) -> Monotonicity {
        let mut values = Vec::with_capacity(self.exceptions.len() + 2);
        values.push(self.eval_lattice(&self.lower_to));
        values.extend(self.exceptions.values().cloned());
        values.push(self.eval_lattice(&self.upper_from));
        let rising = values.windows(2).all(|w| w[0] < w[1]);
        let falling = values.windows(2).all(|w| w[0] > w[1]);
        match (self.upper.dir, rising, falling) {
            (1, true, _) => Monotonicity::StrictlyIncreasing,
            (-1, _, true) => Monotonicity::StrictlyDecreasing,
            _ => Monotonicity::NonMonotone,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numbers::q;

    fn table(pairs: &[(&str, &str)], lower: Tail, upper: Tail) -> Result<TableMap> {
        let ex = pairs.iter().map(|(x, y)| (q(x), q(y))).collect();
        TableMap::new(GroupDescriptor::integers(), ex, lower, upper, None)
    }

    #[test]
    fn swap_with_shift_tails() {
        // 0 <-> 1 swapped, identity elsewhere.
        let t = table(&[("0", "1"), ("1", "0")], Tail::forward(q("0")), Tail::forward(q("0"))).unwrap();
        assert_eq!(t.eval_lattice(&q("0")), q("1"));
        assert_eq!(t.eval_lattice(&q("5")), q("5"));
        assert!(t.is_involution());
        assert_eq!(t.monotonicity(), Monotonicity::NonMonotone);
    }

    #[test]
    fn tail_rule() {
        let t = TableMap::shift(GroupDescriptor::integers(), q("1")).unwrap();
        assert_eq!(t.eval_lattice(&q("1000000")), q("1000001"));
        assert_eq!(t.eval_lattice(&q("-7")), q("-6"));
        assert_eq!(t.monotonicity(), Monotonicity::StrictlyIncreasing);
    }

    #[test]
    fn rejects_non_bijections() {
        // 0 -> 5 collides with the upper tail image.
        assert!(table(&[("0", "5")], Tail::forward(q("0")), Tail::forward(q("0"))).is_err());
        // tails pointing the same way
        assert!(table(&[], Tail::forward(q("0")), Tail::backward(q("0"))).is_err());
        // repeated value
        assert!(table(&[("0", "0"), ("1", "0")], Tail::forward(q("0")), Tail::forward(q("0"))).is_err());
        // gap in the exception block
        assert!(table(&[("0", "0"), ("2", "2")], Tail::forward(q("0")), Tail::forward(q("0"))).is_err());
        // different shifts leave a hole: x-1 below, x+1 above, nothing hits 0
        assert!(table(&[], Tail::forward(q("-1")), Tail::forward(q("1"))).is_err());
        // non-lattice offset
        assert!(table(&[], Tail::forward(q("1/2")), Tail::forward(q("1/2"))).is_err());
    }

    #[test]
    fn canonical_absorption() {
        let a = table(&[("0", "1"), ("1", "2")], Tail::forward(q("1")), Tail::forward(q("1"))).unwrap();
        assert_eq!(a, TableMap::shift(GroupDescriptor::integers(), q("1")).unwrap());
        assert!(a.exceptions().is_empty());
    }

    #[test]
    fn inverse_and_composition() {
        let t = table(
            &[("-1", "2"), ("0", "-1"), ("1", "1"), ("2", "0")],
            Tail::forward(q("0")),
            Tail::forward(q("0")),
        )
        .unwrap();
        let inv = t.invert();
        for k in -10..=10 {
            let x = q(&k.to_string());
            assert_eq!(inv.eval_lattice(&t.eval_lattice(&x)), x);
            assert_eq!(t.preimage_lattice(&x), inv.eval_lattice(&x));
        }
        assert!(t.compose(&inv).unwrap().is_identity());
        let s = TableMap::shift(GroupDescriptor::integers(), q("3")).unwrap();
        let ts = t.compose(&s).unwrap();
        for k in -10..=10 {
            let x = q(&k.to_string());
            assert_eq!(ts.eval_lattice(&x), t.eval_lattice(&(&x + q("3"))));
        }
    }

    #[test]
    fn reflection_tails() {
        let n = TableMap::negation(GroupDescriptor::integers()).unwrap();
        assert_eq!(n.eval_lattice(&q("4")), q("-4"));
        assert!(n.is_involution());
        assert_eq!(n.fixed_points().unwrap().points, vec![q("0")]);
        assert_eq!(n.monotonicity(), Monotonicity::StrictlyDecreasing);
        let r = table(&[], Tail::backward(q("1")), Tail::backward(q("1"))).unwrap();
        assert!(r.fixed_points().unwrap().points.is_empty());
        let inv = r.invert();
        assert_eq!(inv, r);
        let sq = n.compose(&r).unwrap();
        assert_eq!(sq.eval_lattice(&q("0")), q("-1"));
        assert_eq!(sq.eval_lattice(&q("10")), q("9"));
    }

    #[test]
    fn fixed_points_of_tables() {
        let t = table(&[("0", "1"), ("1", "0")], Tail::forward(q("0")), Tail::forward(q("0"))).unwrap();
        assert!(matches!(t.fixed_points(), Err(Error::ContinuumOfFixedPoints { .. })));
        let s = TableMap::shift(GroupDescriptor::integers(), q("2")).unwrap();
        assert!(s.fixed_points().unwrap().points.is_empty());
    }

    #[test]
    fn json_form() {
        let t: TableMap = serde_json::from_str(
            r#"{"exceptions":{"0":"1","1":"0"},"upper":{"dir":1,"c":"0"},"lower":{"dir":1,"c":"0"}}"#,
        )
        .unwrap();
        assert_eq!(t.eval_lattice(&q("1")), q("0"));
        let back: TableMap = serde_json::from_str(&serde_json::to_string(&t).unwrap()).unwrap();
        assert_eq!(back, t);
        let s: TableMap = serde_json::from_str(r#"{"upper":{"dir":1,"c":"1"},"lower":{"dir":1,"c":"1"}}"#).unwrap();
        assert_eq!(s, TableMap::shift(GroupDescriptor::integers(), q("1")).unwrap());
    }

    #[test]
    fn scaled_lattice() {
        let g = GroupDescriptor::cyclic(q("1/2")).unwrap();
        let s = TableMap::shift(g.clone(), q("3/2")).unwrap();
        assert_eq!(s.eval_lattice(&q("1/2")), q("2"));
        assert!(TableMap::shift(g, q("1/3")).is_err());
    }
}
