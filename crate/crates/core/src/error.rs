use rug::{Float, Rational};
use thiserror::Error;

use crate::inverse::Violation;

/// Failures while reading rationals or JSON documents.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("empty number")]
    Empty,
    #[error("malformed rational {0:?}")]
    Malformed(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("invalid policy {0:?} (expected \"zeros\" or \"seed:<u64>\")")]
    Policy(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("the sequence is empty")]
    EmptySequence,

    #[error("operation needs s_{needed} but the prefix has only {len} terms")]
    IndexOutOfRange { needed: usize, len: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("D_{index} = 0: the moment functional is not quasi-definite on this prefix")]
    NotQuasiDefinite { index: usize },

    #[error("Jacobi coefficient b_{index} is zero")]
    ZeroB { index: usize },

    #[error("prescribed determinant t_{index} is zero")]
    ZeroTarget { index: usize },

    #[error("D_{} = 0, so r = {r} does not belong to the full-degree set", .r - 1)]
    SingularLeadingMinor { r: usize },

    #[error("gap hypothesis violated: D_{index} != 0")]
    GapHypothesisViolated { index: usize },

    #[error("identity residual has degree {degree}, expected a constant")]
    NonConstantResidual { degree: usize },

    #[error("the sequence is identically zero")]
    ZeroSequence,

    #[error("numerator degree must be below denominator degree")]
    DegreeViolation,

    #[error("target sequence violates the Frobenius conditions: {0}")]
    NotSolvable(Violation),

    #[error("certificate residual {residual} exceeds tolerance {tol}")]
    PrecisionExhausted { residual: Float, tol: Float },

    #[error("determinant D_{index} = {value} breaks the positive-then-flat pattern")]
    NotPsdFlat { index: usize, value: Rational },

    #[error("determinants stay positive through D_{horizon}; no flat tail inside the prefix")]
    FlatNotReached { horizon: usize },

    #[error("finite rank {r} is not certified on this prefix")]
    RankNotCertified { r: usize },

    #[error("expected {expected} simple real roots, found {found}")]
    RootCountMismatch { expected: usize, found: usize },

    #[error("weight formulas disagree at atom {atom} (relative gap {relative})")]
    WeightMismatch { atom: usize, relative: Float },

    #[error("weight at atom {atom} is not positive")]
    NonPositiveWeight { atom: usize },

    #[error("precision must be between {min} and {max} bits, got {bits}")]
    InvalidPrecision { bits: u32, min: u32, max: u32 },

    #[error(transparent)]
    Parse(#[from] ParseError),
}

impl Error {
    /// Stable snake_case name used in machine-readable error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::EmptySequence => "empty_sequence",
            Error::IndexOutOfRange { .. } => "index_out_of_range",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::NotQuasiDefinite { .. } => "not_quasi_definite",
            Error::ZeroB { .. } => "zero_b",
            Error::ZeroTarget { .. } => "zero_target",
            Error::SingularLeadingMinor { .. } => "singular_leading_minor",
            Error::GapHypothesisViolated { .. } => "gap_hypothesis_violated",
            Error::NonConstantResidual { .. } => "non_constant_residual",
            Error::ZeroSequence => "zero_sequence",
            Error::DegreeViolation => "degree_violation",
            Error::NotSolvable(_) => "not_solvable",
            Error::PrecisionExhausted { .. } => "precision_exhausted",
            Error::NotPsdFlat { .. } => "not_psd_flat",
            Error::FlatNotReached { .. } => "flat_not_reached",
            Error::RankNotCertified { .. } => "rank_not_certified",
            Error::RootCountMismatch { .. } => "root_count_mismatch",
            Error::WeightMismatch { .. } => "weight_mismatch",
            Error::NonPositiveWeight { .. } => "non_positive_weight",
            Error::InvalidPrecision { .. } => "invalid_precision",
            Error::Parse(_) => "parse_error",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
