//! Pass/fail records produced by the exhaustive window checks.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::numbers::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn passed(self) -> bool {
        self == Status::Pass
    }

    pub fn all<'a>(mut statuses: impl Iterator<Item = &'a Status>) -> Status {
        if statuses.all(|s| s.passed()) {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

/// The first point at which a law failed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub at: Vec<Rational>,
    pub expected: Rational,
    pub found: Rational,
}

impl Counterexample {
    pub fn new(at: Vec<Rational>, expected: Rational, found: Rational) -> Self {
        Counterexample { at, expected, found }
    }

    /// `None` when `expected == found`.
    pub fn unless_equal(at: impl FnOnce() -> Vec<Rational>, expected: Rational, found: Rational) -> Option<Self> {
        (expected != found).then(|| Counterexample::new(at(), expected, found))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub law: String,
    pub status: Status,
    /// Instances examined, in enumeration order, up to and including the
    /// first failure.
    pub checked: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.status.passed()
    }

    /// Runs `check` on every index in `0..count`, in parallel, and keeps the
    /// failure with the smallest index so the report does not depend on
    /// scheduling.
    pub fn exhaustive<F>(law: &str, count: usize, check: F) -> Result<CheckReport>
    where
        F: Fn(usize) -> Result<Option<Counterexample>> + Sync,
    {
        let first = (0..count)
            .into_par_iter()
            .map(|i| (i, check(i)))
            .find_first(|(_, r)| !matches!(r, Ok(None)));
        Ok(match first {
            None => CheckReport { law: law.to_string(), status: Status::Pass, checked: count as u64, counterexample: None },
            Some((i, r)) => CheckReport {
                law: law.to_string(),
                status: Status::Fail,
                checked: i as u64 + 1,
                counterexample: r?,
            },
        })
    }
}

/// A named list of checks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub status: Status,
    pub checks: Vec<CheckReport>,
}

impl SuiteReport {
    pub fn new(checks: Vec<CheckReport>) -> Self {
        SuiteReport { status: Status::all(checks.iter().map(|c| &c.status)), checks }
    }

    pub fn passed(&self) -> bool {
        self.status.passed()
    }

    pub fn checked(&self) -> u64 {
        self.checks.iter().map(|c| c.checked).sum()
    }

    pub fn first_counterexample(&self) -> Option<(&str, &Counterexample)> {
        self.checks.iter().find_map(|c| c.counterexample.as_ref().map(|x| (c.law.as_str(), x)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_failure_is_deterministic() {
        let r = CheckReport::exhaustive("odd", 1000, |i| {
            Ok((i % 97 == 96).then(|| Counterexample::new(vec![Rational::from(i as i64)], Rational::zero(), Rational::one())))
        })
        .unwrap();
        assert_eq!(r.status, Status::Fail);
        assert_eq!(r.checked, 97);
        assert_eq!(r.counterexample.unwrap().at, vec![Rational::from(96)]);
        let ok = CheckReport::exhaustive("none", 10, |_| Ok(None)).unwrap();
        assert!(ok.passed());
        assert_eq!(ok.checked, 10);
    }
}
