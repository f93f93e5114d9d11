use std::fmt;

use num_traits::One;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::groups::GroupDescriptor;
use crate::numbers::{strip_common_primes, Rational};

use super::{FixedPoints, Monotonicity};

/// An endpoint of a piece domain.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Bound {
    NegInf,
    Finite(Rational),
    PosInf,
}

impl Bound {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Bound::Finite(x) => Some(x),
            _ => None,
        }
    }

    fn is_at_least(&self, x: &Rational) -> bool {
        match self {
            Bound::NegInf => false,
            Bound::Finite(b) => b >= x,
            Bound::PosInf => true,
        }
    }

    fn is_at_most(&self, x: &Rational) -> bool {
        match self {
            Bound::NegInf => true,
            Bound::Finite(b) => b <= x,
            Bound::PosInf => false,
        }
    }

    fn affine_image(&self, slope: &Rational, intercept: &Rational) -> Bound {
        match (self, slope.is_positive()) {
            (Bound::Finite(x), _) => Bound::Finite(slope * x + intercept),
            (Bound::NegInf, true) | (Bound::PosInf, false) => Bound::NegInf,
            (Bound::PosInf, true) | (Bound::NegInf, false) => Bound::PosInf,
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::NegInf => f.write_str("-inf"),
            Bound::Finite(x) => write!(f, "{x}"),
            Bound::PosInf => f.write_str("inf"),
        }
    }
}

impl fmt::Debug for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Bound {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

struct BoundVisitor;

impl<'de> Visitor<'de> for BoundVisitor {
    type Value = Bound;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("\"-inf\", \"inf\" or a rational")
    }

    fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Bound, E> {
        match v.trim() {
            "-inf" => Ok(Bound::NegInf),
            "inf" | "+inf" => Ok(Bound::PosInf),
            s => s.parse().map(Bound::Finite).map_err(E::custom),
        }
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Bound, E> {
        Ok(Bound::Finite(Rational::from(v)))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Bound, E> {
        Ok(Bound::Finite(Rational::from_integer(v)))
    }
}

impl<'de> Deserialize<'de> for Bound {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        deserializer.deserialize_any(BoundVisitor)
    }
}

/// `x ↦ slope·x + intercept` on the closed interval `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Piece {
    pub lo: Bound,
    pub hi: Bound,
    pub slope: Rational,
    pub intercept: Rational,
}

impl Piece {
    pub fn new(lo: Bound, hi: Bound, slope: Rational, intercept: Rational) -> Self {
        Piece { lo, hi, slope, intercept }
    }

    pub fn at(&self, x: &Rational) -> Rational {
        &self.slope * x + &self.intercept
    }

    fn covers(&self, x: &Rational) -> bool {
        self.lo.is_at_most(x) && self.hi.is_at_least(x)
    }

    fn same_affine(&self, other: &Piece) -> bool {
        self.slope == other.slope && self.intercept == other.intercept
    }
}

/// A strictly monotone, continuous, piecewise-affine bijection of the real
/// line that restricts to a bijection of its group.
///
/// Pieces are closed intervals covering the line in order, adjacent pieces
/// share an endpoint, and adjacent pieces never carry the same affine data,
/// so two maps are equal exactly when they agree as functions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawPl")]
pub struct PLMap {
    group: GroupDescriptor,
    pieces: Vec<Piece>,
}

#[derive(Deserialize)]
struct RawPl {
    group: GroupDescriptor,
    pieces: Vec<Piece>,
}

impl TryFrom<RawPl> for PLMap {
    type Error = Error;

    fn try_from(raw: RawPl) -> Result<Self> {
        PLMap::new(raw.group, raw.pieces)
    }
}

fn is_unit_of(x: &Rational, base: u32) -> bool {
    strip_common_primes(x.numer(), base).is_one() && strip_common_primes(x.denom(), base).is_one()
}

impl PLMap {
    pub fn new(group: GroupDescriptor, pieces: Vec<Piece>) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidMap(msg));
        let (first, last) = match (pieces.first(), pieces.last()) {
            (Some(f), Some(l)) => (f, l),
            _ => return bad("a piecewise-linear map needs at least one piece".into()),
        };
        if first.lo != Bound::NegInf || last.hi != Bound::PosInf {
            return bad("pieces must cover the whole line".into());
        }
        let increasing = first.slope.is_positive();
        for p in &pieces {
            if p.lo >= p.hi {
                return bad(format!("empty piece [{}, {}]", p.lo, p.hi));
            }
            if p.slope.is_zero() {
                return bad(format!("zero slope on [{}, {}]", p.lo, p.hi));
            }
            if p.slope.is_positive() != increasing {
                return bad("slopes change sign, so the map is not monotone".into());
            }
        }
        for pair in pieces.windows(2) {
            let (a, b) = (&pair[0], &pair[1]);
            let joint = match (&a.hi, &b.lo) {
                (Bound::Finite(x), Bound::Finite(y)) if x == y => x,
                _ => return bad(format!("gap or overlap between {} and {}", a.hi, b.lo)),
            };
            if a.at(joint) != b.at(joint) {
                return bad(format!("discontinuity at {joint}"));
            }
        }
        check_closure(&group, &pieces)?;
        Ok(PLMap { group, pieces: merge(pieces) })
    }

    pub fn affine(group: GroupDescriptor, slope: Rational, intercept: Rational) -> Result<Self> {
        PLMap::new(group, vec![Piece::new(Bound::NegInf, Bound::PosInf, slope, intercept)])
    }

    pub fn identity(group: GroupDescriptor) -> Self {
        PLMap::affine(group, Rational::one(), Rational::zero()).expect("identity is valid")
    }

    pub fn negation(group: GroupDescriptor) -> Self {
        PLMap::affine(group, -Rational::one(), Rational::zero()).expect("negation is valid")
    }

    pub fn shift(group: GroupDescriptor, c: Rational) -> Result<Self> {
        group.check(&c)?;
        PLMap::affine(group, Rational::one(), c)
    }

    pub fn group(&self) -> &GroupDescriptor {
        &self.group
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn is_identity(&self) -> bool {
        self.pieces.len() == 1 && self.pieces[0].slope.is_one() && self.pieces[0].intercept.is_zero()
    }

    /// The finite breakpoints, increasing.
    pub fn breakpoints(&self) -> Vec<Rational> {
        self.pieces.iter().filter_map(|p| p.hi.finite().cloned()).collect()
    }

    fn piece_at(&self, x: &Rational) -> &Piece {
        let i = self.pieces.partition_point(|p| !p.hi.is_at_least(x));
        &self.pieces[i]
    }

    /// Evaluates on the real line, without a membership check.
    pub fn eval_real(&self, x: &Rational) -> Rational {
        self.piece_at(x).at(x)
    }

    /// Inverse image on the real line, without a membership check.
    pub fn preimage_real(&self, y: &Rational) -> Rational {
        for p in &self.pieces {
            let a = p.lo.affine_image(&p.slope, &p.intercept);
            let b = p.hi.affine_image(&p.slope, &p.intercept);
            let (lo, hi) = if p.slope.is_positive() { (a, b) } else { (b, a) };
            if lo.is_at_most(y) && hi.is_at_least(y) {
                return (y - &p.intercept) / &p.slope;
            }
        }
        unreachable!("a piecewise-linear bijection covers every real")
    }

    pub fn invert(&self) -> PLMap {
        let mut pieces: Vec<Piece> = self
            .pieces
            .iter()
            .map(|p| {
                let a = p.lo.affine_image(&p.slope, &p.intercept);
                let b = p.hi.affine_image(&p.slope, &p.intercept);
                let (lo, hi) = if p.slope.is_positive() { (a, b) } else { (b, a) };
                let slope = p.slope.recip().expect("nonzero slope");
                let intercept = -(&p.intercept * &slope);
                Piece::new(lo, hi, slope, intercept)
            })
            .collect();
        if !self.is_increasing() {
            pieces.reverse();
        }
        PLMap { group: self.group.clone(), pieces }
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &PLMap) -> Result<PLMap> {
        self.group.same_as(&inner.group)?;
        let mut cuts = inner.breakpoints();
        cuts.extend(self.breakpoints().iter().map(|b| inner.preimage_real(b)));
        cuts.sort();
        cuts.dedup();

        let mut bounds = Vec::with_capacity(cuts.len() + 2);
        bounds.push(Bound::NegInf);
        bounds.extend(cuts.into_iter().map(Bound::Finite));
        bounds.push(Bound::PosInf);

        let pieces = bounds
            .windows(2)
            .map(|w| {
                let sample = match (&w[0], &w[1]) {
                    (Bound::Finite(a), Bound::Finite(b)) => (a + b) / Rational::from(2),
                    (Bound::NegInf, Bound::Finite(b)) => b - Rational::one(),
                    (Bound::Finite(a), Bound::PosInf) => a + Rational::one(),
                    _ => Rational::zero(),
                };
                let g = inner.piece_at(&sample);
                let f = self.piece_at(&g.at(&sample));
                let slope = &f.slope * &g.slope;
                let intercept = &f.slope * &g.intercept + &f.intercept;
                Piece::new(w[0].clone(), w[1].clone(), slope, intercept)
            })
            .collect();
        Ok(PLMap { group: self.group.clone(), pieces: merge(pieces) })
    }

    pub fn is_increasing(&self) -> bool {
        self.pieces[0].slope.is_positive()
    }

    pub fn monotonicity(&self) -> Monotonicity {
        if self.is_increasing() {
            Monotonicity::StrictlyIncreasing
        } else {
            Monotonicity::StrictlyDecreasing
        }
    }

    /// Solves `x = s·x + b` on every piece. Complete over the whole line.
    pub fn fixed_points(&self) -> Result<FixedPoints> {
        let mut points: Vec<Rational> = Vec::new();
        for p in &self.pieces {
            let one_minus = Rational::one() - &p.slope;
            if one_minus.is_zero() {
                if p.intercept.is_zero() {
                    return Err(Error::ContinuumOfFixedPoints { lo: p.lo.to_string(), hi: p.hi.to_string() });
                }
                continue;
            }
            let x = &p.intercept / &one_minus;
            if p.covers(&x) && self.group.contains(&x) && points.last() != Some(&x) {
                points.push(x);
            }
        }
        Ok(FixedPoints { points, complete: true })
    }

    pub fn is_involution(&self) -> bool {
        self.compose(self).map(|sq| sq.is_identity()).unwrap_or(false)
    }
}

fn check_closure(group: &GroupDescriptor, pieces: &[Piece]) -> Result<()> {
    for p in pieces {
        let ok = match group {
            GroupDescriptor::Cyclic { .. } => p.slope.abs().is_one() && group.contains(&p.intercept),
            GroupDescriptor::MAdic { base } => {
                is_unit_of(&p.slope, *base)
                    && group.contains(&p.intercept)
                    && [&p.lo, &p.hi].iter().all(|b| b.finite().is_none_or(|x| group.contains(x)))
            }
            GroupDescriptor::Rationals => true,
        };
        if !ok {
            return Err(Error::InvalidMap(format!(
                "piece [{}, {}] with slope {} and intercept {} does not preserve {group}",
                p.lo, p.hi, p.slope, p.intercept
            )));
        }
    }
    Ok(())
}

fn merge(pieces: Vec<Piece>) -> Vec<Piece> {
    let mut out: Vec<Piece> = Vec::with_capacity(pieces.len());
    for p in pieces {
        match out.last_mut() {
            Some(prev) if prev.same_affine(&p) => prev.hi = p.hi,
            _ => out.push(p),
        }
    }
    out
}

impl fmt::Display for PLMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .pieces
            .iter()
            .map(|p| {
                let sign = if p.intercept.is_negative() { '-' } else { '+' };
                format!("{}x {} {} on [{}, {}]", p.slope, sign, p.intercept.abs(), p.lo, p.hi)
            })
            .collect();
        write!(f, "{}", parts.join("; "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numbers::q;

    fn fin(s: &str) -> Bound {
        Bound::Finite(q(s))
    }

    /// `-2x` for `x <= 0`, `-x/2` for `x >= 0` on the dyadics.
    fn two_slope_involution() -> PLMap {
        PLMap::new(
            GroupDescriptor::dyadic(),
            vec![
                Piece::new(Bound::NegInf, fin("0"), q("-2"), q("0")),
                Piece::new(fin("0"), Bound::PosInf, q("-1/2"), q("0")),
            ],
        )
        .unwrap()
    }

    #[test]
    fn evaluates_pieces() {
        let f = two_slope_involution();
        assert_eq!(f.eval_real(&q("1/2")), q("-1/4"));
        assert_eq!(f.eval_real(&q("-3")), q("6"));
        assert_eq!(f.eval_real(&q("0")), q("0"));
        let refl = PLMap::affine(GroupDescriptor::integers(), q("-1"), q("2")).unwrap();
        assert_eq!(refl.eval_real(&q("5")), q("-3"));
    }

    #[test]
    fn validation() {
        let g = GroupDescriptor::dyadic();
        // discontinuous
        assert!(PLMap::new(
            g.clone(),
            vec![
                Piece::new(Bound::NegInf, fin("0"), q("1"), q("0")),
                Piece::new(fin("0"), Bound::PosInf, q("1"), q("1")),
            ]
        )
        .is_err());
        // slope 3 does not preserve Z[1/2]
        assert!(PLMap::affine(g.clone(), q("3"), q("0")).is_err());
        // non-monotone
        assert!(PLMap::new(
            g.clone(),
            vec![
                Piece::new(Bound::NegInf, fin("0"), q("1"), q("0")),
                Piece::new(fin("0"), Bound::PosInf, q("-1"), q("0")),
            ]
        )
        .is_err());
        // gap
        assert!(PLMap::new(
            g.clone(),
            vec![
                Piece::new(Bound::NegInf, fin("0"), q("1"), q("0")),
                Piece::new(fin("1"), Bound::PosInf, q("1"), q("0")),
            ]
        )
        .is_err());
        // breakpoint outside the group
        assert!(PLMap::new(
            g,
            vec![
                Piece::new(Bound::NegInf, fin("1/3"), q("1"), q("0")),
                Piece::new(fin("1/3"), Bound::PosInf, q("1"), q("0")),
            ]
        )
        .is_err());
        // slope 2 on the integers
        assert!(PLMap::affine(GroupDescriptor::integers(), q("2"), q("0")).is_err());
        // any slope on Q
        assert!(PLMap::affine(GroupDescriptor::Rationals, q("3/7"), q("1/5")).is_ok());
    }

    #[test]
    fn merges_redundant_breakpoints() {
        let f = PLMap::new(
            GroupDescriptor::dyadic(),
            vec![
                Piece::new(Bound::NegInf, fin("1"), q("2"), q("1")),
                Piece::new(fin("1"), Bound::PosInf, q("2"), q("1")),
            ],
        )
        .unwrap();
        assert_eq!(f.pieces().len(), 1);
    }

    #[test]
    fn inverse_of_affine() {
        let f = PLMap::affine(GroupDescriptor::Rationals, q("2"), q("1")).unwrap();
        let expected = PLMap::affine(GroupDescriptor::Rationals, q("1/2"), q("-1/2")).unwrap();
        assert_eq!(f.invert(), expected);
    }

    #[test]
    fn inverse_of_three_piece_map() {
        let f = PLMap::new(
            GroupDescriptor::dyadic(),
            vec![
                Piece::new(Bound::NegInf, fin("0"), q("1"), q("1")),
                Piece::new(fin("0"), fin("1"), q("2"), q("1")),
                Piece::new(fin("1"), Bound::PosInf, q("1"), q("2")),
            ],
        )
        .unwrap();
        let expected = PLMap::new(
            GroupDescriptor::dyadic(),
            vec![
                Piece::new(Bound::NegInf, fin("1"), q("1"), q("-1")),
                Piece::new(fin("1"), fin("3"), q("1/2"), q("-1/2")),
                Piece::new(fin("3"), Bound::PosInf, q("1"), q("-2")),
            ],
        )
        .unwrap();
        let inv = f.invert();
        assert_eq!(inv, expected);
        for k in -32..=32 {
            let x = Rational::new(k, 8).unwrap();
            assert_eq!(inv.eval_real(&f.eval_real(&x)), x);
            assert_eq!(f.preimage_real(&x), inv.eval_real(&x));
        }
    }

    #[test]
    fn composition() {
        let neg = PLMap::negation(GroupDescriptor::Rationals);
        assert!(neg.compose(&neg).unwrap().is_identity());
        let f = two_slope_involution();
        assert!(f.compose(&f).unwrap().is_identity());
        assert!(f.compose(&f.invert()).unwrap().is_identity());
        assert!(PLMap::identity(GroupDescriptor::dyadic()).compose(&neg).is_err());
    }

    #[test]
    fn involutions() {
        let refl = PLMap::affine(GroupDescriptor::integers(), q("-1"), q("2")).unwrap();
        assert!(refl.is_involution());
        assert!(!PLMap::shift(GroupDescriptor::integers(), q("1")).unwrap().is_involution());
        assert!(two_slope_involution().is_involution());
    }

    #[test]
    fn fixed_points() {
        let refl = PLMap::affine(GroupDescriptor::integers(), q("-1"), q("2")).unwrap();
        assert_eq!(refl.fixed_points().unwrap().points, vec![q("1")]);
        assert_eq!(PLMap::negation(GroupDescriptor::integers()).fixed_points().unwrap().points, vec![q("0")]);
        assert_eq!(two_slope_involution().fixed_points().unwrap().points, vec![q("0")]);
        let odd = PLMap::affine(GroupDescriptor::integers(), q("-1"), q("1")).unwrap();
        assert!(odd.fixed_points().unwrap().points.is_empty());
        assert!(matches!(
            PLMap::identity(GroupDescriptor::integers()).fixed_points(),
            Err(Error::ContinuumOfFixedPoints { .. })
        ));
    }

    #[test]
    fn json_form() {
        let text = r#"{"group":{"kind":"madic","base":2},"pieces":[
            {"lo":"-inf","hi":"0","slope":"-2","intercept":"0"},
            {"lo":"0","hi":"inf","slope":"-1/2","intercept":"0"}]}"#;
        let f: PLMap = serde_json::from_str(text).unwrap();
        assert_eq!(f, two_slope_involution());
        let back: PLMap = serde_json::from_str(&serde_json::to_string(&f).unwrap()).unwrap();
        assert_eq!(back, f);
    }
}
