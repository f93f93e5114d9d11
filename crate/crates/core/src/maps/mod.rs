//! Exact homeomorphisms of the supported groups.
//!
//! Dense groups use [`PLMap`], strictly monotone piecewise-affine maps of
//! the line that preserve the group. Discrete groups use [`TableMap`], a
//! finite exceptional block with affine tails, or [`ClassSuccessor`], the
//! closed-form successor maps of integer partitions. A [`PLMap`] on `a·Z`
//! is always a single affine piece.

mod pl;
pub mod random;
mod successor;
mod table;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use pl::{Bound, PLMap, Piece};
pub use successor::{ClassSuccessor, PartitionScheme};
pub use table::{TableMap, Tail};

use crate::error::{Error, Result};
use crate::groups::{GroupDescriptor, GroupElement, Window};
use crate::numbers::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Monotonicity {
    StrictlyIncreasing,
    StrictlyDecreasing,
    NonMonotone,
}

/// Fixed points of a map, and whether the list is known to be complete.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixedPoints {
    pub points: Vec<Rational>,
    pub complete: bool,
}

/// A map of a group into itself.
pub trait GroupMap {
    fn group(&self) -> &GroupDescriptor;

    /// Image of a group element. Fails on non-members.
    fn image(&self, x: &Rational) -> Result<Rational>;

    /// Image of a point the caller already knows is in the group.
    fn image_unchecked(&self, x: &Rational) -> Result<Rational> {
        self.image(x)
    }
}

/// A [`GroupMap`] that can be inverted pointwise.
pub trait Bijection: GroupMap {
    fn preimage(&self, y: &Rational) -> Result<Rational>;

    fn preimage_unchecked(&self, y: &Rational) -> Result<Rational> {
        self.preimage(y)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
#[allow(clippy::large_enum_variant)]
pub enum Homeo {
    Pl(PLMap),
    Table(TableMap),
    Successor(ClassSuccessor),
}

impl Homeo {
    pub fn group(&self) -> &GroupDescriptor {
        match self {
            Homeo::Pl(f) => f.group(),
            Homeo::Table(f) => f.group(),
            Homeo::Successor(_) => integers(),
        }
    }

    /// `x ↦ slope·x + intercept` as a piecewise-linear map.
    pub fn affine(group: &GroupDescriptor, slope: Rational, intercept: Rational) -> Result<Homeo> {
        PLMap::affine(group.clone(), slope, intercept).map(Homeo::Pl)
    }

    pub fn identity(group: &GroupDescriptor) -> Homeo {
        Homeo::Pl(PLMap::identity(group.clone()))
    }

    pub fn negation(group: &GroupDescriptor) -> Homeo {
        Homeo::Pl(PLMap::negation(group.clone()))
    }

    pub fn shift(group: &GroupDescriptor, c: Rational) -> Result<Homeo> {
        PLMap::shift(group.clone(), c).map(Homeo::Pl)
    }

    /// The shift by `c`, in the same representation as `self` so the two compose.
    pub fn shift_like(&self, c: Rational) -> Result<Homeo> {
        match self {
            Homeo::Table(t) => TableMap::shift(t.group().clone(), c).map(Homeo::Table),
            _ => Homeo::shift(self.group(), c),
        }
    }

    /// The native inversion `x ↦ -x`, in the same representation as `self`.
    pub fn negation_like(&self) -> Homeo {
        match self {
            Homeo::Table(t) => Homeo::Table(TableMap::negation(t.group().clone()).expect("negation is a bijection")),
            _ => Homeo::negation(self.group()),
        }
    }

    pub fn identity_like(&self) -> Homeo {
        self.shift_like(Rational::zero()).expect("zero is in every group")
    }

    pub fn eval(&self, x: &GroupElement) -> Result<GroupElement> {
        self.group().same_as(x.group())?;
        Ok(GroupElement::trusted(self.group(), self.apply(x.value())))
    }

    /// Image of a point already known to be in the group.
    pub(crate) fn apply(&self, x: &Rational) -> Rational {
        match self {
            Homeo::Pl(f) => f.eval_real(x),
            Homeo::Table(f) => f.eval_lattice(x),
            Homeo::Successor(f) => Rational::from_integer(f.eval_integer(x.numer())),
        }
    }

    pub(crate) fn apply_inverse(&self, y: &Rational) -> Rational {
        match self {
            Homeo::Pl(f) => f.preimage_real(y),
            Homeo::Table(f) => f.preimage_lattice(y),
            Homeo::Successor(f) => Rational::from_integer(f.preimage_integer(y.numer())),
        }
    }

    pub fn invert(&self) -> Homeo {
        match self {
            Homeo::Pl(f) => Homeo::Pl(f.invert()),
            Homeo::Table(f) => Homeo::Table(f.invert()),
            Homeo::Successor(f) => Homeo::Successor(f.invert()),
        }
    }

    /// `self ∘ inner`. Both maps must share a group and a representation.
    pub fn compose(&self, inner: &Homeo) -> Result<Homeo> {
        match (self, inner) {
            (Homeo::Pl(f), Homeo::Pl(g)) => f.compose(g).map(Homeo::Pl),
            (Homeo::Table(f), Homeo::Table(g)) => f.compose(g).map(Homeo::Table),
            (Homeo::Successor(f), Homeo::Successor(g)) if f.scheme == g.scheme && f.inverted != g.inverted => {
                Ok(Homeo::Table(TableMap::identity(integers().clone())?))
            }
            _ => Err(Error::Unsupported(format!(
                "cannot compose a {} map with a {} map",
                self.kind_name(),
                inner.kind_name()
            ))),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Homeo::Pl(_) => "piecewise-linear",
            Homeo::Table(_) => "table",
            Homeo::Successor(_) => "class-successor",
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            Homeo::Pl(f) => f.is_identity(),
            Homeo::Table(f) => f.is_identity(),
            Homeo::Successor(_) => false,
        }
    }

    /// Decided symbolically, not by sampling. A class successor strictly
    /// increases inside every class, so it is never an involution.
    pub fn is_involution(&self) -> bool {
        match self {
            Homeo::Pl(f) => f.is_involution(),
            Homeo::Table(f) => f.is_involution(),
            Homeo::Successor(_) => false,
        }
    }

    pub fn fixed_points(&self) -> Result<FixedPoints> {
        match self {
            Homeo::Pl(f) => f.fixed_points(),
            Homeo::Table(f) => f.fixed_points(),
            Homeo::Successor(_) => Ok(FixedPoints { points: Vec::new(), complete: true }),
        }
    }

    pub fn monotonicity(&self) -> Monotonicity {
        match self {
            Homeo::Pl(f) => f.monotonicity(),
            Homeo::Table(f) => f.monotonicity(),
            Homeo::Successor(f) => {
                if f.translation().is_some() {
                    Monotonicity::StrictlyIncreasing
                } else {
                    Monotonicity::NonMonotone
                }
            }
        }
    }

    /// `x < y < z` in the window whose images are neither increasing nor
    /// decreasing, if one exists.
    pub fn non_monotone_witness(&self, w: &Window) -> Result<Option<[Rational; 3]>> {
        let xs = self.group().enumerate_window(w)?;
        let ys: Vec<Rational> = xs.iter().map(|x| self.apply(x)).collect();
        let rises: Vec<bool> = ys.windows(2).map(|p| p[0] < p[1]).collect();
        // The first pair that disagrees with pair 0, together with its predecessor.
        Ok(rises
            .iter()
            .position(|r| *r != rises[0])
            .map(|b| [xs[b - 1].clone(), xs[b].clone(), xs[b + 1].clone()]))
    }
}

fn integers() -> &'static GroupDescriptor {
    use std::sync::OnceLock;
    static Z: OnceLock<GroupDescriptor> = OnceLock::new();
    Z.get_or_init(GroupDescriptor::integers)
}

impl GroupMap for Homeo {
    fn group(&self) -> &GroupDescriptor {
        Homeo::group(self)
    }

    fn image(&self, x: &Rational) -> Result<Rational> {
        self.group().check(x)?;
        Ok(self.apply(x))
    }

    fn image_unchecked(&self, x: &Rational) -> Result<Rational> {
        Ok(self.apply(x))
    }
}

impl Bijection for Homeo {
    fn preimage(&self, y: &Rational) -> Result<Rational> {
        self.group().check(y)?;
        Ok(self.apply_inverse(y))
    }

    fn preimage_unchecked(&self, y: &Rational) -> Result<Rational> {
        Ok(self.apply_inverse(y))
    }
}

impl From<PLMap> for Homeo {
    fn from(f: PLMap) -> Self {
        Homeo::Pl(f)
    }
}

impl From<TableMap> for Homeo {
    fn from(f: TableMap) -> Self {
        Homeo::Table(f)
    }
}

impl From<ClassSuccessor> for Homeo {
    fn from(f: ClassSuccessor) -> Self {
        Homeo::Successor(f)
    }
}

impl fmt::Debug for Homeo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Homeo::Pl(m) => write!(f, "Pl({m})"),
            Homeo::Table(m) => write!(f, "{m:?}"),
            Homeo::Successor(m) => write!(f, "{m:?}"),
        }
    }
}
