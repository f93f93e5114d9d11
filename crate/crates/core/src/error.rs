use thiserror::Error;

use crate::numbers::Rational;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot parse rational from {0:?}")]
    ParseRational(String),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("{0} is not an integer")]
    NotAnInteger(Rational),
    #[error("valuation base must be at least 2, got {0}")]
    InvalidBase(u32),

    #[error("invalid group descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("invalid window: {0}")]
    InvalidWindow(String),
    #[error("{value} is not an element of {group}")]
    NotAMember { value: Rational, group: String },
    #[error("group descriptor mismatch: {left} vs {right}")]
    DescriptorMismatch { left: String, right: String },

    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("unsupported operation: {0}")]
    Unsupported(String),
    #[error("continuum of fixed points on [{lo}, {hi}]")]
    ContinuumOfFixedPoints { lo: String, hi: String },
    #[error("map is not an involution")]
    NotInvolution,
    #[error("no fixed point in the group: {0}")]
    NoFixedPoint(String),
    #[error("more than one fixed point: {0:?}")]
    MultipleFixedPoints(Vec<Rational>),
    #[error("partition failure at {at}: {reason}")]
    PartitionFailure { at: Rational, reason: String },
    #[error("gluing failure: {0}")]
    GluingFailure(String),
    #[error("{0} lies outside the matched domain")]
    OutsideMatchedDomain(Rational),
    #[error("the neutral shift cannot be transported")]
    NeutralShift,
    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Short machine-readable tag used in CLI diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ParseRational(_) | Error::ZeroDenominator => "parse",
            Error::NotAnInteger(_) | Error::InvalidBase(_) => "arithmetic",
            Error::InvalidDescriptor(_) => "descriptor",
            Error::InvalidWindow(_) => "window",
            Error::NotAMember { .. } => "membership",
            Error::DescriptorMismatch { .. } => "descriptor_mismatch",
            Error::InvalidMap(_) => "map",
            Error::Unsupported(_) => "unsupported",
            Error::ContinuumOfFixedPoints { .. } => "continuum_of_fixed_points",
            Error::NotInvolution => "not_involution",
            Error::NoFixedPoint(_) => "no_fixed_point",
            Error::MultipleFixedPoints(_) => "multiple_fixed_points",
            Error::PartitionFailure { .. } => "partition",
            Error::GluingFailure(_) => "gluing",
            Error::OutsideMatchedDomain(_) => "outside_matched_domain",
            Error::NeutralShift => "neutral_shift",
            Error::Precondition(_) => "precondition",
            Error::Json(_) => "json",
            Error::Io(_) => "io",
        }
    }
}
