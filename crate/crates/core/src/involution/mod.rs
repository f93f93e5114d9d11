//! Normal forms of involutions with exactly one fixed point.
//!
//! Let `f` be such an involution of `G` with fixed point `e`, and put
//! `A = {a : a > f(a)}`. Then `G` is the disjoint union of `A`, `f(A)` and
//! `{e}`. A bijection `h: A∪{e} → G∩[0,∞)` with `h(e) = 0` extends to
//!
//! ```text
//! h̃(x) = h(x)        for x ∈ A∪{e}
//! h̃(x) = -h(f(x))    for x ∈ f(A)
//! ```
//!
//! and `f` is the inversion of the group transported along `h̃`:
//! `h̃⁻¹(-h̃(x)) = f(x)` for every `x`.
//!
//! Supported inputs: piecewise-linear involutions on any group (these are
//! decreasing, so `A∪{e} = G∩[e,∞)` and `h` is the translation `x ↦ x - e`),
//! and table involutions on discrete groups (`h` enumerates `e` first, then
//! `A` in increasing order). On dense groups `h` may instead be grown by
//! back-and-forth, see [`BackAndForthState`].

pub mod back_and_forth;

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

pub use back_and_forth::{simplest_between, simplicity, BackAndForthState};

use crate::error::{Error, Result};
use crate::groups::{GroupDescriptor, Window};
use crate::maps::{Bijection, Bound, GroupMap, Homeo, Monotonicity, PLMap, Piece, TableMap, Tail};
use crate::numbers::Rational;
use crate::report::{CheckReport, Counterexample, SuiteReport};
use crate::transport::TransportedGroup;

/// The unique fixed point of an involution.
pub fn unique_fixed_point(f: &Homeo) -> Result<Rational> {
    if !f.is_involution() {
        return Err(Error::NotInvolution);
    }
    let fixed = f.fixed_points()?;
    match fixed.points.as_slice() {
        [e] => Ok(e.clone()),
        [] => Err(Error::NoFixedPoint(real_fixed_point_note(f))),
        many => Err(Error::MultipleFixedPoints(many.to_vec())),
    }
}

fn real_fixed_point_note(f: &Homeo) -> String {
    if let Homeo::Pl(p) = f {
        for piece in p.pieces() {
            let one_minus = Rational::one() - &piece.slope;
            if let Some(x) = piece.intercept.checked_div(&one_minus) {
                if p.eval_real(&x) == x {
                    return format!("the real fixed point {x} is not in {}", p.group());
                }
            }
        }
    }
    format!("no point of {} is fixed", f.group())
}

/// Pointwise check on window points that exactly one of `x ∈ A`, `x ∈ f(A)`,
/// `x = e` holds, that `f` maps `A` out of `A`, and that at most one window
/// point is fixed.
pub fn partition_check(f: &Homeo, xs: &[Rational]) -> Result<CheckReport> {
    let fixed: Vec<&Rational> = xs.iter().filter(|x| &f.apply(x) == *x).collect();
    CheckReport::exhaustive("A, f(A), {e} partition the window", xs.len(), |i| {
        let x = &xs[i];
        let fx = f.apply(x);
        let ffx = f.apply(&fx);
        let in_a = x > &fx;
        let in_fa = ffx == *x && fx > ffx;
        let is_e = fx == *x && fixed.len() == 1;
        let hits = [in_a, in_fa, is_e].iter().filter(|b| **b).count();
        let a_closed = !in_a || fx <= ffx;
        Ok((hits != 1 || !a_closed).then(|| Counterexample::new(vec![x.clone()], x.clone(), ffx)))
    })
}

/// `A` restricted to the window, after checking the partition there.
pub fn positive_part(f: &Homeo, w: &Window) -> Result<Vec<Rational>> {
    let xs = f.group().enumerate_window(w)?;
    let report = partition_check(f, &xs)?;
    if let Some(cx) = report.counterexample {
        let x = cx.at[0].clone();
        let reason = if f.apply(&f.apply(&x)) != x {
            "f(f(x)) differs from x".to_string()
        } else if f.apply(&x) == x {
            "more than one fixed point in the window".to_string()
        } else {
            "x lies in both A and f(A)".to_string()
        };
        return Err(Error::PartitionFailure { at: x, reason });
    }
    Ok(xs.into_iter().filter(|x| x > &f.apply(x)).collect())
}

/// How `h: A∪{e} → G∩[0,∞)` is chosen.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HPolicy {
    /// Closed form: translation for piecewise-linear input, enumeration for tables.
    #[default]
    Canonical,
    /// Order isomorphism grown point by point (dense groups only).
    BackAndForth,
}

/// A bijection `h: A∪{e} → G∩[0,∞)` with `h(e) = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HalfLineMap {
    /// `x ↦ x - e`, valid when `A = G∩(e,∞)`.
    Translation { e: Rational },
    /// `e ↦ 0`, then `base_points[i] ↦ (i+1)·step`, then `x ↦ x + offset`
    /// on `[threshold, ∞)`, which lies entirely in `A`.
    Enumeration {
        step: Rational,
        e: Rational,
        base_points: Vec<Rational>,
        threshold: Rational,
        offset: Rational,
    },
    BackAndForth(BackAndForthState),
}

impl HalfLineMap {
    pub fn form(&self) -> &'static str {
        match self {
            HalfLineMap::Translation { .. } => "closed",
            HalfLineMap::Enumeration { .. } => "table",
            HalfLineMap::BackAndForth(_) => "matched",
        }
    }

    pub fn fixed_point(&self) -> &Rational {
        match self {
            HalfLineMap::Translation { e } | HalfLineMap::Enumeration { e, .. } => e,
            HalfLineMap::BackAndForth(s) => s.fixed_point(),
        }
    }

    /// `h(x)` for `x ∈ A∪{e}`.
    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        let outside = || Error::OutsideMatchedDomain(x.clone());
        match self {
            HalfLineMap::Translation { e } => (x >= e).then(|| x - e).ok_or_else(outside),
            HalfLineMap::Enumeration { step, e, base_points, threshold, offset } => {
                if x == e {
                    Ok(Rational::zero())
                } else if x >= threshold {
                    Ok(x + offset)
                } else {
                    let i = base_points.binary_search(x).map_err(|_| outside())?;
                    Ok(Rational::from(i as i64 + 1) * step)
                }
            }
            HalfLineMap::BackAndForth(s) => s.forward(x).cloned().ok_or_else(outside),
        }
    }

    /// `h⁻¹(y)` for `y ≥ 0`.
    pub fn eval_inverse(&self, y: &Rational) -> Result<Rational> {
        let outside = || Error::OutsideMatchedDomain(y.clone());
        if y.is_negative() {
            return Err(outside());
        }
        match self {
            HalfLineMap::Translation { e } => Ok(y + e),
            HalfLineMap::Enumeration { step, e, base_points, offset, .. } => {
                let k = y.checked_div(step).filter(Rational::is_integer).ok_or_else(outside)?;
                let k = k.to_i64().ok_or_else(outside)?;
                if k == 0 {
                    Ok(e.clone())
                } else if let Some(b) = usize::try_from(k - 1).ok().and_then(|i| base_points.get(i)) {
                    Ok(b.clone())
                } else {
                    Ok(y - offset)
                }
            }
            HalfLineMap::BackAndForth(s) => s.backward(y).cloned().ok_or_else(outside),
        }
    }
}

/// Builds `h` for an involution with a single fixed point.
pub fn build_h(f: &Homeo, policy: HPolicy) -> Result<HalfLineMap> {
    let e = unique_fixed_point(f)?;
    match (f, policy) {
        (Homeo::Pl(p), _) if p.monotonicity() != Monotonicity::StrictlyDecreasing => Err(Error::Unsupported(
            "A is not the half-line above the fixed point".into(),
        )),
        (Homeo::Pl(p), HPolicy::BackAndForth) => BackAndForthState::new(p.group().clone(), e).map(HalfLineMap::BackAndForth),
        (Homeo::Pl(_), HPolicy::Canonical) => Ok(HalfLineMap::Translation { e }),
        (Homeo::Table(t), HPolicy::Canonical) => enumeration(t, e),
        (Homeo::Table(t), HPolicy::BackAndForth) => {
            Err(Error::Unsupported(format!("back-and-forth needs a dense group, got {}", t.group())))
        }
        (Homeo::Successor(_), _) => Err(Error::NotInvolution),
    }
}

/// Lattice points `x` with `lo < x < hi`.
fn lattice_between(lo: &Rational, hi: &Rational, step: &Rational) -> Vec<Rational> {
    let mut out = Vec::new();
    let mut x = lo + step;
    while &x < hi {
        out.push(x.clone());
        x = &x + step;
    }
    out
}

/// Bounds `(lo, hi)` such that every lattice point `≥ hi` lies in `A` with
/// `f` in its upper tail, and every lattice point `≤ lo` is `f` of such a point.
fn enumeration_bounds(t: &TableMap) -> Result<(Rational, Rational)> {
    let (upper, lower) = (t.upper(), t.lower());
    if upper.dir != -1 || lower.dir != -1 {
        return Err(Error::Unsupported("an involution with one fixed point has decreasing tails".into()));
    }
    let step = t.step();
    let half = &upper.c / &Rational::from(2);
    let above_half = (Rational::from(half.checked_div(step).expect("positive step").floor()) + Rational::one()) * step;
    let hi = std::cmp::max(t.upper_from().clone(), above_half);
    let lo = std::cmp::min(t.lower_to().clone(), &lower.c - &hi);
    Ok((lo, hi))
}

fn enumeration(t: &TableMap, e: Rational) -> Result<HalfLineMap> {
    let (lo, threshold) = enumeration_bounds(t)?;
    let step = t.step().clone();
    let base_points: Vec<Rational> =
        lattice_between(&lo, &threshold, &step).into_iter().filter(|x| x > &t.eval_lattice(x)).collect();
    let offset = Rational::from(base_points.len() as i64 + 1) * &step - &threshold;
    Ok(HalfLineMap::Enumeration { step, e, base_points, threshold, offset })
}

/// `h̃`: either an exact homeomorphism, or the finite matching extended by
/// `-h∘f` below the fixed point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GluedMap {
    Closed(Homeo),
    Matched { f: Homeo, h: BackAndForthState },
}

impl GluedMap {
    pub fn as_homeo(&self) -> Option<&Homeo> {
        match self {
            GluedMap::Closed(h) => Some(h),
            GluedMap::Matched { .. } => None,
        }
    }
}

impl GroupMap for GluedMap {
    fn group(&self) -> &GroupDescriptor {
        match self {
            GluedMap::Closed(h) => h.group(),
            GluedMap::Matched { h, .. } => h.group(),
        }
    }

    fn image(&self, x: &Rational) -> Result<Rational> {
        self.group().check(x)?;
        self.image_unchecked(x)
    }

    fn image_unchecked(&self, x: &Rational) -> Result<Rational> {
        match self {
            GluedMap::Closed(h) => Ok(h.apply(x)),
            GluedMap::Matched { f, h } => {
                let outside = || Error::OutsideMatchedDomain(x.clone());
                if x >= h.fixed_point() {
                    h.forward(x).cloned().ok_or_else(outside)
                } else {
                    h.forward(&f.apply(x)).map(|y| -y).ok_or_else(outside)
                }
            }
        }
    }
}

impl Bijection for GluedMap {
    fn preimage(&self, y: &Rational) -> Result<Rational> {
        self.group().check(y)?;
        self.preimage_unchecked(y)
    }

    fn preimage_unchecked(&self, y: &Rational) -> Result<Rational> {
        match self {
            GluedMap::Closed(h) => Ok(h.apply_inverse(y)),
            GluedMap::Matched { f, h } => {
                let outside = || Error::OutsideMatchedDomain(y.clone());
                if !y.is_negative() {
                    h.backward(y).cloned().ok_or_else(outside)
                } else {
                    h.backward(&-y).map(|x| f.apply(x)).ok_or_else(outside)
                }
            }
        }
    }
}

/// Glues `h` on `A∪{e}` with `-h∘f` on `f(A)`.
pub fn build_h_tilde(f: &Homeo, h: &HalfLineMap) -> Result<GluedMap> {
    let glued = match (f, h) {
        (Homeo::Pl(p), HalfLineMap::Translation { e }) => GluedMap::Closed(Homeo::Pl(glue_pl(p, e)?)),
        (Homeo::Table(t), HalfLineMap::Enumeration { .. }) => GluedMap::Closed(Homeo::Table(glue_table(t, h)?)),
        (_, HalfLineMap::BackAndForth(state)) => GluedMap::Matched { f: f.clone(), h: state.clone() },
        _ => return Err(Error::GluingFailure(format!("no gluing for a {} map with a {} h", f.kind_name(), h.form()))),
    };
    let e = h.fixed_point();
    let at_e = glued.image(e)?;
    if !at_e.is_zero() {
        return Err(Error::GluingFailure(format!("h̃({e}) = {at_e}, expected 0")));
    }
    Ok(glued)
}

fn glue_pl(f: &PLMap, e: &Rational) -> Result<PLMap> {
    let below_e = |b: &Bound| b.finite().map_or(matches!(b, Bound::NegInf), |v| v < e);
    let mut pieces: Vec<Piece> = f
        .pieces()
        .iter()
        .filter(|p| below_e(&p.lo))
        .map(|p| {
            let hi = if below_e(&p.hi) { p.hi.clone() } else { Bound::Finite(e.clone()) };
            // e - f(x)
            Piece::new(p.lo.clone(), hi, -&p.slope, e - &p.intercept)
        })
        .collect();
    pieces.push(Piece::new(Bound::Finite(e.clone()), Bound::PosInf, Rational::one(), -e));
    PLMap::new(f.group().clone(), pieces).map_err(|err| Error::GluingFailure(err.to_string()))
}

fn glue_table(t: &TableMap, h: &HalfLineMap) -> Result<TableMap> {
    let HalfLineMap::Enumeration { e, threshold, offset, .. } = h else {
        unreachable!("caller matched an enumeration");
    };
    let (lo, _) = enumeration_bounds(t)?;
    let mut exceptions = BTreeMap::new();
    for x in lattice_between(&lo, threshold, t.step()) {
        let fx = t.eval_lattice(&x);
        let y = if &x == e || x > fx { h.eval(&x)? } else { -h.eval(&fx)? };
        exceptions.insert(x, y);
    }
    let lower = Tail::forward(-&t.lower().c - offset);
    TableMap::new(t.group().clone(), exceptions, lower, Tail::forward(offset.clone()), None)
        .map_err(|err| Error::GluingFailure(err.to_string()))
}

/// An involution presented as the inversion of a transported group.
#[derive(Clone, Debug)]
pub struct InvolutionNormalForm {
    pub f: Homeo,
    pub e: Rational,
    pub window: Window,
    /// `A` on the window.
    pub a_sample: Vec<Rational>,
    pub h: HalfLineMap,
    pub h_tilde: GluedMap,
    pub transported: TransportedGroup<GluedMap>,
    /// Partition, gluing and inversion checks, in that order.
    pub checks: SuiteReport,
}

impl InvolutionNormalForm {
    /// Membership in `A`.
    pub fn in_a(&self, x: &Rational) -> bool {
        x > &self.f.apply(x)
    }

    pub fn inversion_check(&self) -> &CheckReport {
        &self.checks.checks[2]
    }

    pub fn passed(&self) -> bool {
        self.checks.passed()
    }
}

/// Normalizes `f`, then checks on the window that `A`, `f(A)`, `{e}`
/// partition it, that `h̃` glues `h` and `-h∘f`, and that the transported
/// inversion is `f`.
pub fn normalize(f: &Homeo, w: &Window, policy: HPolicy) -> Result<InvolutionNormalForm> {
    let group = f.group();
    let xs = group.enumerate_window(w)?;
    let partition = partition_check(f, &xs)?;
    let mut h = build_h(f, policy)?;
    let e = h.fixed_point().clone();
    if let HalfLineMap::BackAndForth(state) = h {
        let sources: BTreeSet<Rational> =
            xs.iter().map(|x| if x >= &e { x.clone() } else { f.apply(x) }).collect();
        h = HalfLineMap::BackAndForth(state.extend_forth_all(&sources)?);
    }
    let h_tilde = build_h_tilde(f, &h)?;
    let transported = TransportedGroup::from_bijection(h_tilde.clone())?;

    let gluing = CheckReport::exhaustive("h̃ = h on A∪{e}, -h∘f on f(A)", xs.len(), |i| {
        let x = &xs[i];
        let fx = f.apply(x);
        let expected = if x == &e || x > &fx { h.eval(x)? } else { -h.eval(&fx)? };
        Ok(Counterexample::unless_equal(|| vec![x.clone()], expected, h_tilde.image_unchecked(x)?))
    })?;
    let inversion = CheckReport::exhaustive("transported inversion = f", xs.len(), |i| {
        let x = &xs[i];
        Ok(Counterexample::unless_equal(|| vec![x.clone()], f.apply(x), transported.neg_unchecked(x)?))
    })?;
    let a_sample = xs.iter().filter(|x| *x > &f.apply(x)).cloned().collect();
    Ok(InvolutionNormalForm {
        f: f.clone(),
        e,
        window: w.clone(),
        a_sample,
        h,
        h_tilde,
        transported,
        checks: SuiteReport::new(vec![partition, gluing, inversion]),
    })
}
