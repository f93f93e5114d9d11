//! Seeded generators of random homeomorphisms for property suites.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;

use super::{Bound, Homeo, PLMap, Piece, TableMap, Tail};
use crate::error::{Error, Result};
use crate::groups::GroupDescriptor;
use crate::numbers::Rational;

fn random_element<R: Rng>(group: &GroupDescriptor, rng: &mut R, span: i64) -> Rational {
    match group {
        GroupDescriptor::Cyclic { step } => Rational::from(rng.gen_range(-span..=span)) * step,
        GroupDescriptor::MAdic { base } => {
            let k = rng.gen_range(0..=2u32);
            let den = i64::from(*base).pow(k);
            Rational::new(rng.gen_range(-span * den..=span * den), den).expect("positive denominator")
        }
        GroupDescriptor::Rationals => {
            let den = rng.gen_range(1..=6i64);
            Rational::new(rng.gen_range(-span * den..=span * den), den).expect("positive denominator")
        }
    }
}

fn random_slope_magnitude<R: Rng>(group: &GroupDescriptor, rng: &mut R) -> Rational {
    match group {
        GroupDescriptor::Cyclic { .. } => Rational::one(),
        GroupDescriptor::MAdic { base } => Rational::power(&Rational::from(i64::from(*base)), rng.gen_range(-2..=2)),
        GroupDescriptor::Rationals => Rational::new(rng.gen_range(1..=5i64), rng.gen_range(1..=5i64)).expect("nonzero"),
    }
}

/// A random piecewise-linear homeomorphism with at most `max_pieces` pieces,
/// breakpoints in `[-4, 4]`.
pub fn random_pl<R: Rng>(group: &GroupDescriptor, rng: &mut R, max_pieces: usize) -> Result<PLMap> {
    let sign = if rng.gen_bool(0.5) { Rational::one() } else { -Rational::one() };
    let pieces = if group.is_dense() { rng.gen_range(1..=max_pieces.max(1)) } else { 1 };
    let mut cuts: Vec<Rational> = (1..pieces).map(|_| random_element(group, rng, 4)).collect();
    cuts.sort();
    cuts.dedup();

    let mut bounds = vec![Bound::NegInf];
    bounds.extend(cuts.into_iter().map(Bound::Finite));
    bounds.push(Bound::PosInf);

    let mut out: Vec<Piece> = Vec::with_capacity(bounds.len() - 1);
    let mut intercept = random_element(group, rng, 3);
    for w in bounds.windows(2) {
        let slope = &sign * &random_slope_magnitude(group, rng);
        if let (Some(prev), Bound::Finite(joint)) = (out.last(), &w[0]) {
            // continuity at the shared breakpoint
            intercept = prev.at(joint) - &slope * joint;
        }
        out.push(Piece::new(w[0].clone(), w[1].clone(), slope, intercept.clone()));
    }
    PLMap::new(group.clone(), out)
}

/// A random lattice bijection: a permutation of a block around zero,
/// followed by a random shift.
pub fn random_table<R: Rng>(group: &GroupDescriptor, rng: &mut R, block: i64) -> Result<TableMap> {
    let step = group
        .step()
        .cloned()
        .ok_or_else(|| Error::Unsupported(format!("random tables need a discrete group, got {group}")))?;
    let points: Vec<Rational> = (-block..=block).map(|k| Rational::from(k) * &step).collect();
    let mut images = points.clone();
    images.shuffle(rng);
    let exceptions: BTreeMap<Rational, Rational> = points.into_iter().zip(images).collect();
    let zero = Tail::forward(Rational::zero());
    let perm = TableMap::new(group.clone(), exceptions, zero.clone(), zero, None)?;
    let shift = TableMap::shift(group.clone(), Rational::from(rng.gen_range(-3..=3i64)) * &step)?;
    shift.compose(&perm)
}

/// A random homeomorphism in the natural representation for the group.
pub fn random_homeo<R: Rng>(group: &GroupDescriptor, rng: &mut R) -> Result<Homeo> {
    if group.is_dense() || rng.gen_bool(0.5) {
        random_pl(group, rng, 4).map(Homeo::Pl)
    } else {
        random_table(group, rng, 3).map(Homeo::Table)
    }
}
