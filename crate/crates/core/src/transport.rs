//! Group laws transported along homeomorphisms.
//!
//! For a bijection `h: G → G` the operation `x ⊕ y = h⁻¹(h(x) + h(y))` makes
//! `⟨G, ⊕⟩` a group with neutral element `h⁻¹(0)` and inverse
//! `x ↦ h⁻¹(-h(x))`, and `h` is an isomorphism onto `⟨G, +⟩`. When `h` is a
//! homeomorphism the isomorphism is topological. The operation is never
//! tabulated; every query goes through `h`.
//!
//! The same datum links regroupings to conjugacies: the inversion of
//! `⟨G, ⊕⟩` is `h⁻¹∘(-)∘h`, and the shift by `d` is `h⁻¹∘(+h(d))∘h`. The
//! functions [`regroup_to_conjugacy`] and [`conjugacy_to_regroup`] build one
//! side from the other and check the result on a window.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::{GroupDescriptor, Window};
use crate::maps::{Bijection, GroupMap, Homeo};
use crate::numbers::Rational;
use crate::report::{CheckReport, Counterexample, Status, SuiteReport};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransportedGroup<H = Homeo> {
    base: GroupDescriptor,
    h: H,
    neutral: Rational,
}

impl<H: Bijection + Sync> TransportedGroup<H> {
    pub fn from_bijection(h: H) -> Result<Self> {
        let base = h.group().clone();
        let neutral = h.preimage(&Rational::zero())?;
        Ok(TransportedGroup { base, h, neutral })
    }

    pub fn base(&self) -> &GroupDescriptor {
        &self.base
    }

    pub fn bijection(&self) -> &H {
        &self.h
    }

    /// `h⁻¹(0)`.
    pub fn neutral(&self) -> &Rational {
        &self.neutral
    }

    pub fn add(&self, x: &Rational, y: &Rational) -> Result<Rational> {
        self.base.check(x)?;
        self.base.check(y)?;
        self.add_unchecked(x, y)
    }

    pub fn neg(&self, x: &Rational) -> Result<Rational> {
        self.base.check(x)?;
        self.neg_unchecked(x)
    }

    pub(crate) fn add_unchecked(&self, x: &Rational, y: &Rational) -> Result<Rational> {
        let sum = self.h.image_unchecked(x)? + self.h.image_unchecked(y)?;
        self.h.preimage_unchecked(&sum)
    }

    pub(crate) fn neg_unchecked(&self, x: &Rational) -> Result<Rational> {
        self.h.preimage_unchecked(&-self.h.image_unchecked(x)?)
    }

    /// Closure, commutativity, associativity, neutral and inverse laws on
    /// every pair and triple of window elements.
    pub fn verify_axioms(&self, w: &Window) -> Result<SuiteReport> {
        let xs = self.base.enumerate_window(w)?;
        let n = xs.len();
        let hx: Vec<Rational> = xs.iter().map(|x| self.h.image_unchecked(x)).collect::<Result<_>>()?;
        let pair = |i: usize, j: usize| i * n + j;
        let sums: Vec<Rational> = {
            use rayon::prelude::*;
            (0..n * n)
                .into_par_iter()
                .map(|k| self.h.preimage_unchecked(&(&hx[k / n] + &hx[k % n])))
                .collect::<Result<_>>()?
        };
        let h_sums: Vec<Rational> = sums.iter().map(|s| self.h.image_unchecked(s)).collect::<Result<_>>()?;
        let h_neutral = self.h.image_unchecked(&self.neutral)?;

        let closure = CheckReport::exhaustive("closure", n * n, |k| {
            Ok((!self.base.contains(&sums[k]))
                .then(|| Counterexample::new(vec![xs[k / n].clone(), xs[k % n].clone()], sums[k].clone(), sums[k].clone())))
        })?;
        let commutativity = CheckReport::exhaustive("commutativity", n * n, |k| {
            let (i, j) = (k / n, k % n);
            Ok(Counterexample::unless_equal(
                || vec![xs[i].clone(), xs[j].clone()],
                sums[pair(j, i)].clone(),
                sums[pair(i, j)].clone(),
            ))
        })?;
        let associativity = CheckReport::exhaustive("associativity", n * n * n, |k| {
            let (i, j, l) = (k / (n * n), (k / n) % n, k % n);
            let left = self.h.preimage_unchecked(&(&h_sums[pair(i, j)] + &hx[l]))?;
            let right = self.h.preimage_unchecked(&(&hx[i] + &h_sums[pair(j, l)]))?;
            Ok(Counterexample::unless_equal(|| vec![xs[i].clone(), xs[j].clone(), xs[l].clone()], right, left))
        })?;
        let neutral = CheckReport::exhaustive("neutral", n, |i| {
            let right = self.h.preimage_unchecked(&(&hx[i] + &h_neutral))?;
            let left = self.h.preimage_unchecked(&(&h_neutral + &hx[i]))?;
            Ok(Counterexample::unless_equal(|| vec![xs[i].clone()], xs[i].clone(), right)
                .or_else(|| Counterexample::unless_equal(|| vec![xs[i].clone()], xs[i].clone(), left)))
        })?;
        let inverse = CheckReport::exhaustive("inverse", n, |i| {
            let v = self.neg_unchecked(&xs[i])?;
            if !self.base.contains(&v) {
                return Ok(Some(Counterexample::new(vec![xs[i].clone()], v.clone(), v)));
            }
            let right = self.add_unchecked(&xs[i], &v)?;
            let left = self.add_unchecked(&v, &xs[i])?;
            Ok(Counterexample::unless_equal(|| vec![xs[i].clone()], self.neutral.clone(), right)
                .or_else(|| Counterexample::unless_equal(|| vec![xs[i].clone()], self.neutral.clone(), left)))
        })?;
        Ok(SuiteReport::new(vec![closure, commutativity, associativity, neutral, inverse]))
    }

    /// `h(x ⊕ y) = h(x) + h(y)` on window pairs and `h(⊖x) = -h(x)` on
    /// window points.
    pub fn verify_isomorphism(&self, w: &Window) -> Result<SuiteReport> {
        let xs = self.base.enumerate_window(w)?;
        let n = xs.len();
        let hx: Vec<Rational> = xs.iter().map(|x| self.h.image_unchecked(x)).collect::<Result<_>>()?;
        let additive = CheckReport::exhaustive("h(x+y)=h(x)+h(y)", n * n, |k| {
            let (i, j) = (k / n, k % n);
            let found = self.h.image_unchecked(&self.add_unchecked(&xs[i], &xs[j])?)?;
            Ok(Counterexample::unless_equal(|| vec![xs[i].clone(), xs[j].clone()], &hx[i] + &hx[j], found))
        })?;
        let inverse = CheckReport::exhaustive("h(-x)=-h(x)", n, |i| {
            let found = self.h.image_unchecked(&self.neg_unchecked(&xs[i])?)?;
            Ok(Counterexample::unless_equal(|| vec![xs[i].clone()], -&hx[i], found))
        })?;
        Ok(SuiteReport::new(vec![additive, inverse]))
    }
}

impl TransportedGroup<Homeo> {
    pub fn new(h: Homeo) -> Result<Self> {
        TransportedGroup::from_bijection(h)
    }

    pub fn homeo(&self) -> &Homeo {
        &self.h
    }

    /// The transported constant `d = h⁻¹(c)` of the native shift by `c`.
    pub fn shift_constant(&self, c_native: &Rational) -> Result<Rational> {
        self.h.preimage(c_native)
    }

    /// `x ↦ x ⊕ h⁻¹(c)`, built explicitly as `h⁻¹ ∘ (+c) ∘ h`.
    pub fn shift(&self, c_native: &Rational) -> Result<Homeo> {
        let native = self.h.shift_like(c_native.clone())?;
        self.h.invert().compose(&native.compose(&self.h)?)
    }

    /// The inversion `h⁻¹ ∘ (-) ∘ h` of the transported group.
    pub fn inversion(&self) -> Result<Homeo> {
        let native = self.h.negation_like();
        self.h.invert().compose(&native.compose(&self.h)?)
    }
}

/// Checks `t(f(x)) = g(t(x))` at every window point.
pub fn check_conjugacy<T, F, G>(t: &T, f: &F, g: &G, w: &Window) -> Result<CheckReport>
where
    T: GroupMap + Sync + ?Sized,
    F: GroupMap + Sync + ?Sized,
    G: GroupMap + Sync + ?Sized,
{
    t.group().same_as(f.group())?;
    t.group().same_as(g.group())?;
    let xs = t.group().enumerate_window(w)?;
    CheckReport::exhaustive("t∘f=g∘t", xs.len(), |i| {
        let x = &xs[i];
        let found = t.image_unchecked(&f.image_unchecked(x)?)?;
        let expected = g.image_unchecked(&t.image_unchecked(x)?)?;
        Ok(Counterexample::unless_equal(|| vec![x.clone()], expected, found))
    })
}

/// The claim `t∘lhs = rhs∘t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConjugacyWitness {
    pub t: Homeo,
    pub lhs: Homeo,
    pub rhs: Homeo,
}

impl ConjugacyWitness {
    pub fn check(&self, w: &Window) -> Result<CheckReport> {
        check_conjugacy(&self.t, &self.lhs, &self.rhs, w)
    }
}

/// Which special map is being moved between group structures.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Inversion,
    /// A shift. The constant lives in the transported group for
    /// [`regroup_to_conjugacy`] and in the native group for
    /// [`conjugacy_to_regroup`].
    Shift(Rational),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    RegroupToConjugacy,
    ConjugacyToRegroup,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport {
    pub direction: Direction,
    pub role: Role,
    pub status: Status,
    /// The constant of the shift on the other side, when the role is a shift.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constant: Option<Rational>,
    pub checks: Vec<CheckReport>,
}

impl EquivalenceReport {
    fn new(direction: Direction, role: Role, constant: Option<Rational>, checks: Vec<CheckReport>) -> Self {
        let status = Status::all(checks.iter().map(|c| &c.status));
        EquivalenceReport { direction, role, status, constant, checks }
    }

    pub fn passed(&self) -> bool {
        self.status.passed()
    }
}

/// From a regrouping to a conjugacy: the inversion (or the shift by `d`) of
/// `⟨G, ⊕_h⟩` is conjugated by `h` to the native inversion (or the native
/// shift by `h(d)`).
pub fn regroup_to_conjugacy(
    group: &TransportedGroup,
    role: &Role,
    w: &Window,
) -> Result<(EquivalenceReport, ConjugacyWitness)> {
    let h = group.homeo();
    let xs = group.base().enumerate_window(w)?;
    let (f, native, constant, agrees) = match role {
        Role::Inversion => {
            let f = group.inversion()?;
            let agrees = CheckReport::exhaustive("f=inversion of transported group", xs.len(), |i| {
                Ok(Counterexample::unless_equal(|| vec![xs[i].clone()], group.neg_unchecked(&xs[i])?, f.apply(&xs[i])))
            })?;
            (f, h.negation_like(), None, agrees)
        }
        Role::Shift(d) => {
            group.base().check(d)?;
            if d == group.neutral() {
                return Err(Error::NeutralShift);
            }
            let c = h.image(d)?;
            let f = group.shift(&c)?;
            let agrees = CheckReport::exhaustive("f=shift of transported group", xs.len(), |i| {
                Ok(Counterexample::unless_equal(|| vec![xs[i].clone()], group.add_unchecked(&xs[i], d)?, f.apply(&xs[i])))
            })?;
            (f, h.shift_like(c.clone())?, Some(c), agrees)
        }
    };
    let witness = ConjugacyWitness { t: h.clone(), lhs: f, rhs: native };
    let conj = witness.check(w)?;
    let report = EquivalenceReport::new(Direction::RegroupToConjugacy, role.clone(), constant, vec![agrees, conj]);
    Ok((report, witness))
}

/// From a conjugacy `h∘f = g∘h`, with `g` the native inversion or the native
/// shift by `c ≠ 0`, to the regrouping `⟨G, ⊕_h⟩` in which `f` is the
/// inversion, or the shift by `d = h⁻¹(c)`.
pub fn conjugacy_to_regroup(
    f: &Homeo,
    h: &Homeo,
    role: &Role,
    w: &Window,
) -> Result<(EquivalenceReport, TransportedGroup)> {
    f.group().same_as(h.group())?;
    let native = match role {
        Role::Inversion => h.negation_like(),
        Role::Shift(c) => {
            if c.is_zero() {
                return Err(Error::NeutralShift);
            }
            h.shift_like(c.clone())?
        }
    };
    let conj = check_conjugacy(h, f, &native, w)?;
    let group = TransportedGroup::new(h.clone())?;
    let xs = group.base().enumerate_window(w)?;
    let (agrees, constant) = match role {
        Role::Inversion => (
            CheckReport::exhaustive("f=inversion of transported group", xs.len(), |i| {
                Ok(Counterexample::unless_equal(|| vec![xs[i].clone()], group.neg_unchecked(&xs[i])?, f.apply(&xs[i])))
            })?,
            None,
        ),
        Role::Shift(c) => {
            let d = group.shift_constant(c)?;
            let report = CheckReport::exhaustive("f=shift of transported group", xs.len(), |i| {
                Ok(Counterexample::unless_equal(|| vec![xs[i].clone()], group.add_unchecked(&xs[i], &d)?, f.apply(&xs[i])))
            })?;
            (report, Some(d))
        }
    };
    let report = EquivalenceReport::new(Direction::ConjugacyToRegroup, role.clone(), constant, vec![conj, agrees]);
    Ok((report, group))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RoundTripReport {
    pub status: Status,
    pub forward: EquivalenceReport,
    pub backward: EquivalenceReport,
    /// The rebuilt operation against the original, on window pairs.
    pub operation: CheckReport,
}

/// Regrouping → conjugacy → regrouping, then compares the rebuilt operation
/// with the original one on every window pair.
pub fn round_trip(group: &TransportedGroup, role: &Role, w: &Window) -> Result<RoundTripReport> {
    let (forward, witness) = regroup_to_conjugacy(group, role, w)?;
    let back_role = match (role, &forward.constant) {
        (Role::Shift(_), Some(c)) => Role::Shift(c.clone()),
        _ => Role::Inversion,
    };
    let (backward, rebuilt) = conjugacy_to_regroup(&witness.lhs, &witness.t, &back_role, w)?;
    let xs = group.base().enumerate_window(w)?;
    let n = xs.len();
    let operation = CheckReport::exhaustive("rebuilt ⊕ = original ⊕", n * n, |k| {
        let (x, y) = (&xs[k / n], &xs[k % n]);
        Ok(Counterexample::unless_equal(
            || vec![x.clone(), y.clone()],
            group.add_unchecked(x, y)?,
            rebuilt.add_unchecked(x, y)?,
        ))
    })?;
    let status = Status::all([forward.status, backward.status, operation.status].iter());
    Ok(RoundTripReport { status, forward, backward, operation })
}
