//! JSON documents accepted by the command-line tool.
//!
//! Every number is a string holding an exact rational.

use rug::Rational;
use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::error::{Error, ParseError, Result};
use crate::hankel_poly::JacobiCoeffs;
use crate::inverse::{FreePolicy, TargetSequence};
use crate::poly::Polynomial;
use crate::sequence::MomentSequence;

fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(ParseError::Json(e.to_string())))
}

/// `{"sequence": ["s0", "s1", ...]}`
pub fn parse_sequence(text: &str) -> Result<MomentSequence> {
    from_json(text)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TargetDoc {
    #[serde(with = "crate::scalar::serde_rational::vec")]
    target: Vec<Rational>,
    #[serde(default)]
    policy: Option<String>,
}

/// `{"target": ["t0", ...], "policy": "zeros" | "seed:<u64>"}`; the policy
/// defaults to zeros.
pub fn parse_target(text: &str) -> Result<(TargetSequence, FreePolicy)> {
    let doc: TargetDoc = from_json(text)?;
    let policy = match doc.policy {
        Some(p) => p.parse()?,
        None => FreePolicy::Zeros,
    };
    Ok((TargetSequence::new(doc.target)?, policy))
}

/// `{"coeffs": ["c0", "c1", ...]}` in ascending powers.
pub fn parse_polynomial(text: &str) -> Result<Polynomial> {
    from_json(text)
}

/// `{"a": [...], "b": [...]}` with equal lengths and every `b_k ≠ 0`.
pub fn parse_jacobi(text: &str) -> Result<JacobiCoeffs> {
    let raw: JacobiCoeffs = from_json(text)?;
    JacobiCoeffs::new(raw.a, raw.b)
}
