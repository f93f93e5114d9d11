use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Pow, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numbers::{integer_valuation, Valuation};

/// A partition of the integers into classes that are unbounded in both directions.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub enum PartitionScheme {
    /// Residue classes modulo `modulus`. `modulus = 2` is the parity split.
    Residues { modulus: u32 },
    /// Class `n` (1-based) holds the nonzero integers of `m`-adic valuation
    /// `n - 1`; zero joins class 1. With `levels = Some(k)` the `k`-th class
    /// absorbs every valuation at least `k - 1`, otherwise there are
    /// infinitely many classes.
    MAdicValuation { base: u32, levels: Option<u32> },
}

type Admissible = Box<dyn Fn(&BigInt) -> bool>;

impl PartitionScheme {
    pub fn parity() -> Self {
        PartitionScheme::Residues { modulus: 2 }
    }

    pub fn madic(base: u32) -> Self {
        PartitionScheme::MAdicValuation { base, levels: None }
    }

    fn validate(self) -> Result<Self> {
        match self {
            PartitionScheme::Residues { modulus: 0 } => Err(Error::InvalidMap("residue modulus must be positive".into())),
            PartitionScheme::MAdicValuation { base, .. } if base < 2 => Err(Error::InvalidBase(base)),
            PartitionScheme::MAdicValuation { levels: Some(0), .. } => {
                Err(Error::InvalidMap("a valuation scheme needs at least one level".into()))
            }
            s => Ok(s),
        }
    }

    /// 1-based class index of `x`.
    pub fn class_of(&self, x: &BigInt) -> u64 {
        match *self {
            PartitionScheme::Residues { modulus } => x.mod_floor(&BigInt::from(modulus)).try_into().unwrap_or(0) + 1,
            PartitionScheme::MAdicValuation { base, levels } => match integer_valuation(x, base) {
                Valuation::Infinite => 1,
                Valuation::Finite(v) => match levels {
                    Some(k) => v.min(u64::from(k) - 1) + 1,
                    None => v + 1,
                },
            },
        }
    }

    /// The class spacing `M` and whether `u` (with `x = M·u`) is admissible.
    fn class_lattice(&self, x: &BigInt) -> (BigInt, Admissible) {
        match *self {
            PartitionScheme::Residues { .. } => unreachable!("residue classes are handled in closed form"),
            PartitionScheme::MAdicValuation { base, levels } => {
                let class = self.class_of(x);
                let exponent = u32::try_from(class - 1).expect("valuation fits in u32");
                let spacing: BigInt = Pow::pow(BigInt::from(base), exponent);
                let m = BigInt::from(base);
                let absorbing = levels.is_some_and(|k| u64::from(k) == class);
                let zero_allowed = class == 1;
                let admissible: Box<dyn Fn(&BigInt) -> bool> = if levels == Some(1) {
                    Box::new(|_| true)
                } else if absorbing {
                    Box::new(move |u| !u.is_zero() || zero_allowed)
                } else {
                    Box::new(move |u| if u.is_zero() { zero_allowed } else { !(u % &m).is_zero() })
                };
                (spacing, admissible)
            }
        }
    }

    /// Smallest member of the class of `x` greater than `x`.
    pub fn successor(&self, x: &BigInt) -> BigInt {
        if let PartitionScheme::Residues { modulus } = *self {
            return x + modulus;
        }
        let (spacing, admissible) = self.class_lattice(x);
        let mut u = x.div_floor(&spacing) + 1;
        while !admissible(&u) {
            u += 1;
        }
        u * spacing
    }

    /// Largest member of the class of `x` smaller than `x`.
    pub fn predecessor(&self, x: &BigInt) -> BigInt {
        if let PartitionScheme::Residues { modulus } = *self {
            return x - modulus;
        }
        let (spacing, admissible) = self.class_lattice(x);
        let mut u = x.div_ceil(&spacing) - 1;
        while !admissible(&u) {
            u -= 1;
        }
        u * spacing
    }

    /// Number of classes, `None` when infinite.
    pub fn class_count(&self) -> Option<u64> {
        match *self {
            PartitionScheme::Residues { modulus } => Some(u64::from(modulus)),
            PartitionScheme::MAdicValuation { levels, .. } => levels.map(u64::from),
        }
    }
}

impl fmt::Display for PartitionScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PartitionScheme::Residues { modulus: 2 } => f.write_str("parity"),
            PartitionScheme::Residues { modulus } => write!(f, "residues:{modulus}"),
            PartitionScheme::MAdicValuation { base, levels: None } => write!(f, "madic:{base}"),
            PartitionScheme::MAdicValuation { base, levels: Some(k) } => write!(f, "madic:{base}:{k}"),
        }
    }
}

impl fmt::Debug for PartitionScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for PartitionScheme {
    type Err = Error;

    /// Accepts `parity`, `residues:N`, `madic:M` and `madic:M:K`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidMap(format!("unknown partition scheme {s:?}"));
        let parts: Vec<&str> = s.trim().split(':').collect();
        let num = |t: &str| t.parse::<u32>().map_err(|_| bad());
        let scheme = match parts.as_slice() {
            ["parity"] => PartitionScheme::parity(),
            ["residues", n] => PartitionScheme::Residues { modulus: num(n)? },
            ["madic", m] => PartitionScheme::MAdicValuation { base: num(m)?, levels: None },
            ["madic", m, k] => PartitionScheme::MAdicValuation { base: num(m)?, levels: Some(num(k)?) },
            _ => return Err(bad()),
        };
        scheme.validate()
    }
}

impl Serialize for PartitionScheme {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PartitionScheme {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The within-class successor map of a partition scheme (or its inverse),
/// a bijection of `Z` with no periodic points.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClassSuccessor {
    pub scheme: PartitionScheme,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub inverted: bool,
}

impl ClassSuccessor {
    pub fn new(scheme: PartitionScheme) -> Self {
        ClassSuccessor { scheme, inverted: false }
    }

    pub fn eval_integer(&self, x: &BigInt) -> BigInt {
        if self.inverted {
            self.scheme.predecessor(x)
        } else {
            self.scheme.successor(x)
        }
    }

    pub fn preimage_integer(&self, y: &BigInt) -> BigInt {
        if self.inverted {
            self.scheme.successor(y)
        } else {
            self.scheme.predecessor(y)
        }
    }

    pub fn invert(&self) -> Self {
        ClassSuccessor { scheme: self.scheme, inverted: !self.inverted }
    }

    /// Whether the map is `x ↦ x ± c` for a constant `c`.
    pub fn translation(&self) -> Option<i64> {
        let c = match self.scheme {
            PartitionScheme::Residues { modulus } => i64::from(modulus),
            PartitionScheme::MAdicValuation { levels: Some(1), .. } => 1,
            _ => return None,
        };
        Some(if self.inverted { -c } else { c })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn succ(s: PartitionScheme, x: i64) -> i64 {
        s.successor(&BigInt::from(x)).try_into().unwrap()
    }

    #[test]
    fn parity_successor() {
        let s = PartitionScheme::parity();
        assert_eq!(succ(s, 3), 5);
        assert_eq!(succ(s, -4), -2);
    }

    #[test]
    fn dyadic_valuation_successor() {
        let s = PartitionScheme::madic(2);
        assert_eq!(succ(s, 3), 5);
        assert_eq!(succ(s, 4), 12);
        assert_eq!(succ(s, -4), 4);
        assert_eq!(succ(s, 0), 1);
        assert_eq!(succ(s, -1), 0);
        assert_eq!(succ(s, 2), 6);
        assert_eq!(succ(s, -2), 2);
    }

    #[test]
    fn successor_matches_brute_force() {
        // Brute force: scan upward for the next integer in the same class.
        for scheme in [PartitionScheme::madic(2), PartitionScheme::madic(3), "madic:2:3".parse().unwrap()] {
            for x in -100i64..=100 {
                let bx = BigInt::from(x);
                let class = scheme.class_of(&bx);
                let mut y = x + 1;
                while scheme.class_of(&BigInt::from(y)) != class {
                    y += 1;
                }
                assert_eq!(succ(scheme, x), y, "{scheme} at {x}");
                let back: i64 = scheme.predecessor(&BigInt::from(y)).try_into().unwrap();
                assert_eq!(back, x);
            }
        }
    }

    #[test]
    fn finite_levels() {
        let s: PartitionScheme = "madic:2:3".parse().unwrap();
        assert_eq!(s.class_of(&BigInt::from(0)), 1);
        assert_eq!(s.class_of(&BigInt::from(6)), 2);
        assert_eq!(s.class_of(&BigInt::from(4)), 3);
        assert_eq!(s.class_of(&BigInt::from(64)), 3);
        assert_eq!(succ(s, 4), 8);
        assert_eq!(succ(s, -4), 4);
        let one: PartitionScheme = "madic:2:1".parse().unwrap();
        assert_eq!(succ(one, 7), 8);
        assert_eq!(ClassSuccessor::new(one).translation(), Some(1));
    }

    #[test]
    fn scheme_text() {
        for s in ["parity", "residues:5", "madic:2", "madic:3:4"] {
            assert_eq!(s.parse::<PartitionScheme>().unwrap().to_string(), s);
        }
        assert!("madic:1".parse::<PartitionScheme>().is_err());
        assert!("residues:0".parse::<PartitionScheme>().is_err());
        assert!("blocks".parse::<PartitionScheme>().is_err());
    }
}
