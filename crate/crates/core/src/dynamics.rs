//! Orbits of lattice bijections, and conjugacies to shifts.
//!
//! A shift `x ↦ x + c` of a group isomorphic to `Z` has finitely many orbits,
//! so a fixed-point-free bijection of `Z` with infinitely many orbits is not a
//! shift for any group law on `Z`. [`example_map`] builds such a map: the
//! within-class successor of a partition of `Z` into infinitely many classes,
//! each unbounded in both directions. Under the m-adic valuation partition
//! every class is invariant, so each valuation is its own orbit; the window
//! counts computed here are evidence of that, not a proof.
//!
//! For increasing fixed-point-free piecewise-linear maps,
//! [`monotone_to_shift`] builds a conjugacy to a shift from a fundamental
//! domain `[x₀, f(x₀))`.

use petgraph::unionfind::UnionFind;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::Window;
use crate::maps::{Bound, ClassSuccessor, Homeo, Monotonicity, PLMap, PartitionScheme, Piece};
use crate::numbers::Rational;
use crate::report::{CheckReport, Counterexample};
use crate::transport::check_conjugacy;

/// The within-class successor map of `scheme`.
pub fn example_map(scheme: PartitionScheme) -> Homeo {
    Homeo::Successor(ClassSuccessor::new(scheme))
}

/// The increasing fixed-point-free map of `Z[1/2]` given by `x + 1` below 0,
/// `2x + 1` on `[0, 1)` and `x + 2` from 1 on. `[0, 1)` is a fundamental
/// domain.
pub fn three_piece_map() -> Homeo {
    let fin = |s: &str| Bound::Finite(s.parse().expect("literal"));
    let r = |s: &str| -> Rational { s.parse().expect("literal") };
    let pieces = vec![
        Piece::new(Bound::NegInf, fin("0"), r("1"), r("1")),
        Piece::new(fin("0"), fin("1"), r("2"), r("1")),
        Piece::new(fin("1"), Bound::PosInf, r("1"), r("2")),
    ];
    Homeo::Pl(PLMap::new(crate::groups::GroupDescriptor::dyadic(), pieces).expect("continuous and increasing"))
}

fn lattice_step(f: &Homeo) -> Result<Rational> {
    f.group()
        .step()
        .cloned()
        .ok_or_else(|| Error::Precondition(format!("orbit counting needs a discrete group, got {}", f.group())))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitReport {
    pub window: Window,
    /// Window components after linking `x` to `f(x)` inside the window and
    /// through excursions outside it of at most `excursion_budget` steps.
    /// No such path joins two components.
    pub orbit_count_lower_bound: u64,
    /// Least element of each component, increasing.
    pub representatives: Vec<Rational>,
    /// Components with a point whose forward or backward orbit leaves the
    /// window and does not come back within the budget.
    pub classes_touching_boundary: u64,
    pub excursion_budget: u64,
}

/// Union-find over the window points of a lattice bijection.
pub fn orbit_decomposition(f: &Homeo, w: &Window) -> Result<OrbitReport> {
    let step = lattice_step(f)?;
    let xs = f.group().enumerate_window(w)?;
    let n = xs.len();
    let budget = n as u64;
    let index = |y: &Rational| -> Option<usize> {
        let first = xs.first()?;
        if y < first || y > xs.last()? {
            return None;
        }
        (y - first).checked_div(&step)?.to_i64().map(|k| k as usize)
    };
    // The first window point reached from `x` by `g`, within the budget.
    let reentry = |x: &Rational, g: &dyn Fn(&Rational) -> Rational| -> Option<usize> {
        let mut z = g(x);
        for _ in 0..budget {
            if let Some(j) = index(&z) {
                return Some(j);
            }
            z = g(&z);
        }
        None
    };

    let mut uf = UnionFind::<usize>::new(n);
    let mut open = vec![false; n];
    let forward = |x: &Rational| f.apply(x);
    let backward = |x: &Rational| f.apply_inverse(x);
    for (i, x) in xs.iter().enumerate() {
        match reentry(x, &forward) {
            Some(j) => {
                uf.union(i, j);
            }
            None => open[i] = true,
        }
        if index(&f.apply_inverse(x)).is_none() && reentry(x, &backward).is_none() {
            open[i] = true;
        }
    }

    let mut representatives = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    let mut touching = std::collections::BTreeSet::new();
    for (i, x) in xs.iter().enumerate() {
        let root = uf.find(i);
        if seen.insert(root) {
            representatives.push(x.clone());
        }
        if open[i] {
            touching.insert(root);
        }
    }
    Ok(OrbitReport {
        window: w.clone(),
        orbit_count_lower_bound: representatives.len() as u64,
        representatives,
        classes_touching_boundary: touching.len() as u64,
        excursion_budget: budget,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    /// The count stopped growing at the last window.
    Bounded,
    /// The count grew at every window. Evidence, not proof.
    UnboundedEvidence,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GrowthRow {
    pub half_width: u64,
    pub window: Window,
    pub orbit_count_lower_bound: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ObstructionReport {
    pub verdict: Verdict,
    /// The stable count, for [`Verdict::Bounded`].
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<u64>,
    /// Always true: finite windows cannot prove infinitely many orbits.
    pub evidence_only: bool,
    pub growth: Vec<GrowthRow>,
}

impl ObstructionReport {
    pub fn counts(&self) -> Vec<u64> {
        self.growth.iter().map(|r| r.orbit_count_lower_bound).collect()
    }

    pub fn label(&self) -> String {
        match (self.verdict, self.bound) {
            (Verdict::Bounded, Some(c)) => format!("BOUNDED({c})"),
            (Verdict::UnboundedEvidence, _) => "UNBOUNDED_EVIDENCE".into(),
            _ => "INCONCLUSIVE".into(),
        }
    }
}

/// Orbit counts on the windows `[-N·a, N·a]` for each half-width `N`.
pub fn shift_obstruction(f: &Homeo, half_widths: &[u64]) -> Result<ObstructionReport> {
    let step = lattice_step(f)?;
    let mut sizes = half_widths.to_vec();
    sizes.sort_unstable();
    sizes.dedup();
    let growth = sizes
        .iter()
        .map(|&n| {
            let r = Rational::from_integer(n) * &step;
            let window = Window::new(-&r, r)?;
            let report = orbit_decomposition(f, &window)?;
            Ok(GrowthRow { half_width: n, window, orbit_count_lower_bound: report.orbit_count_lower_bound })
        })
        .collect::<Result<Vec<_>>>()?;
    let counts: Vec<u64> = growth.iter().map(|r| r.orbit_count_lower_bound).collect();
    let (verdict, bound) = match counts.as_slice() {
        [.., a, b] if a == b => (Verdict::Bounded, Some(*b)),
        [_, _, ..] if counts.windows(2).all(|p| p[0] < p[1]) => (Verdict::UnboundedEvidence, None),
        _ => (Verdict::Inconclusive, None),
    };
    Ok(ObstructionReport { verdict, bound, evidence_only: true, growth })
}

/// `f^k(x) ≠ x` for every window point and `1 ≤ k ≤ max_iterate`.
pub fn periodic_point_scan(f: &Homeo, w: &Window, max_iterate: u64) -> Result<CheckReport> {
    let xs = f.group().enumerate_window(w)?;
    CheckReport::exhaustive("no periodic points", xs.len(), |i| {
        let x = &xs[i];
        let mut z = x.clone();
        for _ in 0..max_iterate {
            z = f.apply(&z);
            if &z == x {
                return Ok(Some(Counterexample::new(vec![x.clone()], x.clone(), z)));
            }
        }
        Ok(None)
    })
}

/// `f⁻¹(f(x)) = x` and `f(f⁻¹(x)) = x` on the window.
pub fn bijection_check(f: &Homeo, w: &Window) -> Result<CheckReport> {
    let xs = f.group().enumerate_window(w)?;
    CheckReport::exhaustive("f⁻¹∘f = f∘f⁻¹ = id", xs.len(), |i| {
        let x = &xs[i];
        Ok(Counterexample::unless_equal(|| vec![x.clone()], x.clone(), f.apply_inverse(&f.apply(x)))
            .or_else(|| Counterexample::unless_equal(|| vec![x.clone()], x.clone(), f.apply(&f.apply_inverse(x)))))
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ShiftOutcome {
    Witness,
    FailedAttempt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftFailure {
    pub at: Rational,
    pub reason: String,
}

/// Result of [`monotone_to_shift`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftAttempt {
    pub outcome: ShiftOutcome,
    pub window: Window,
    /// `c` in `t∘f = (x ↦ x + c)∘t`.
    pub shift: Rational,
    /// `[x₀, f(x₀))` for the increasing direction, absent for lattices.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fundamental_domain: Option<[Rational; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<Homeo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub check: Option<CheckReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<ShiftFailure>,
}

impl ShiftAttempt {
    pub fn succeeded(&self) -> bool {
        self.outcome == ShiftOutcome::Witness && self.check.as_ref().is_some_and(CheckReport::passed)
    }
}

/// Conjugates an increasing fixed-point-free map to a shift.
///
/// On lattices such a map is already a translation and `t` is the identity.
/// For piecewise-linear maps on dense groups, `t` is the identity on
/// `D = [x₀, g(x₀))` and `t(g^n(x)) = t(x) + n·c` with `c = g(x₀) - x₀`,
/// where `g` is `f` or `f⁻¹`, whichever moves points up. The orbit indices
/// are found by iterating `g` at most once per window point.
pub fn monotone_to_shift(f: &Homeo, w: &Window) -> Result<ShiftAttempt> {
    if f.monotonicity() != Monotonicity::StrictlyIncreasing {
        return Err(Error::Precondition(format!("{} map is not strictly increasing", f.kind_name())));
    }
    match f.fixed_points() {
        Ok(fp) if fp.points.is_empty() => {}
        Ok(fp) => return Err(Error::Precondition(format!("fixed points {:?}", fp.points))),
        Err(Error::ContinuumOfFixedPoints { lo, hi }) => {
            return Err(Error::Precondition(format!("every point of [{lo}, {hi}] is fixed")))
        }
        Err(e) => return Err(e),
    }
    let group = f.group().clone();
    let xs = group.enumerate_window(w)?;
    if xs.is_empty() {
        return Err(Error::InvalidWindow("window contains no group element".into()));
    }
    if !group.is_dense() {
        return lattice_shift(f, w);
    }
    let Homeo::Pl(p) = f else {
        return Err(Error::Unsupported(format!("{} maps on {group}", f.kind_name())));
    };
    let x0 = if w.contains(&Rational::zero()) { Rational::zero() } else { xs[0].clone() };
    let upward = p.eval_real(&x0) > x0;
    let g = if upward { p.clone() } else { p.invert() };
    let c = g.eval_real(&x0) - &x0;
    let budget = xs.len();
    let (lo, hi) = (g.preimage_real(&xs[0]), g.eval_real(&xs[xs.len() - 1]));

    let failed = |at: &Rational, reason: String| ShiftAttempt {
        outcome: ShiftOutcome::FailedAttempt,
        window: w.clone(),
        shift: if upward { c.clone() } else { -&c },
        fundamental_domain: Some([x0.clone(), g.eval_real(&x0)]),
        t: None,
        check: None,
        failure: Some(ShiftFailure { at: at.clone(), reason }),
    };

    // b[k] = g^(k - back)(x₀), covering [lo, hi].
    let mut above = vec![x0.clone()];
    while above.last().expect("nonempty") <= &hi {
        if above.len() > budget {
            return Ok(failed(&xs[xs.len() - 1], format!("orbit does not reach the fundamental domain within {budget} iterates")));
        }
        above.push(g.eval_real(above.last().expect("nonempty")));
    }
    let mut below = Vec::new();
    while below.last().unwrap_or(&x0) > &lo {
        if below.len() > budget {
            return Ok(failed(&xs[0], format!("orbit does not reach the fundamental domain within {budget} iterates")));
        }
        below.push(g.preimage_real(below.last().unwrap_or(&x0)));
    }
    let back = below.len() as i64;
    let bounds: Vec<Rational> = below.into_iter().rev().chain(above).collect();

    let g_inv = g.invert();
    let mut power = (0..back).try_fold(PLMap::identity(group.clone()), |acc, _| acc.compose(&g))?;
    let mut pieces = Vec::new();
    let last = bounds.len() - 2;
    for (k, pair) in bounds.windows(2).enumerate() {
        let n = k as i64 - back;
        let lo_b = if k == 0 { Bound::NegInf } else { Bound::Finite(pair[0].clone()) };
        let hi_b = if k == last { Bound::PosInf } else { Bound::Finite(pair[1].clone()) };
        let lift = Rational::from(n) * &c;
        // t = g^(-n) + n·c on [b_n, b_{n+1}]
        for piece in clip(power.pieces(), &lo_b, &hi_b) {
            let intercept = &piece.intercept + &lift;
            pieces.push(Piece::new(piece.lo, piece.hi, piece.slope, intercept));
        }
        power = power.compose(&g_inv)?;
    }
    let t = match PLMap::new(group.clone(), pieces) {
        Ok(t) => Homeo::Pl(t),
        Err(err) => return Ok(failed(&x0, format!("constructed t is not a map of {group}: {err}"))),
    };
    let shift = if upward { c.clone() } else { -&c };
    let target = Homeo::shift(&group, shift.clone())?;
    let check = check_conjugacy(&t, f, &target, w)?;
    Ok(ShiftAttempt {
        outcome: ShiftOutcome::Witness,
        window: w.clone(),
        shift,
        fundamental_domain: Some([x0.clone(), g.eval_real(&x0)]),
        t: Some(t),
        check: Some(check),
        failure: None,
    })
}

/// Pieces restricted to `[lo, hi]`.
fn clip(pieces: &[Piece], lo: &Bound, hi: &Bound) -> Vec<Piece> {
    pieces
        .iter()
        .filter(|p| bound_lt(&p.lo, hi) && bound_lt(lo, &p.hi))
        .map(|p| {
            let l = if bound_lt(&p.lo, lo) { lo.clone() } else { p.lo.clone() };
            let h = if bound_lt(hi, &p.hi) { hi.clone() } else { p.hi.clone() };
            Piece::new(l, h, p.slope.clone(), p.intercept.clone())
        })
        .collect()
}

fn bound_lt(a: &Bound, b: &Bound) -> bool {
    match (a, b) {
        (Bound::NegInf, Bound::NegInf) | (Bound::PosInf, _) => false,
        (Bound::NegInf, _) | (_, Bound::PosInf) => true,
        (Bound::Finite(_), Bound::NegInf) => false,
        (Bound::Finite(x), Bound::Finite(y)) => x < y,
    }
}

fn lattice_shift(f: &Homeo, w: &Window) -> Result<ShiftAttempt> {
    let group = f.group().clone();
    let c = f.apply(&Rational::zero());
    let (t, target) = match f {
        Homeo::Table(_) => (f.identity_like(), f.shift_like(c.clone())?),
        _ => (Homeo::identity(&group), Homeo::shift(&group, c.clone())?),
    };
    let is_translation = match f {
        Homeo::Table(_) => f.compose(&target.invert())?.is_identity(),
        Homeo::Pl(p) => p.pieces().len() == 1,
        Homeo::Successor(s) => s.translation().is_some(),
    };
    if !is_translation {
        return Ok(ShiftAttempt {
            outcome: ShiftOutcome::FailedAttempt,
            window: w.clone(),
            shift: c,
            fundamental_domain: None,
            t: None,
            check: None,
            failure: Some(ShiftFailure { at: Rational::zero(), reason: "increasing lattice map is not a translation".into() }),
        });
    }
    let check = check_conjugacy(&t, f, &target, w)?;
    Ok(ShiftAttempt { outcome: ShiftOutcome::Witness, window: w.clone(), shift: c, fundamental_domain: None, t: Some(t), check: Some(check), failure: None })
}
