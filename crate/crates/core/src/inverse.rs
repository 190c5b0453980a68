//! The inverse determinant problem: given `t_0..t_N`, find `s` with
//! `D_n(s) = t_n` for every `n ≤ N`.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::{Float, Rational};
use serde::{Serialize, Serializer};

use crate::error::{Error, ParseError, Result};
use crate::hankel::{determinant_transform, hankel_det};
use crate::iohvidov::approx_sequence;
use crate::scalar::{check_precision, exact_root, relative_deviation, rounded_root};
use crate::sequence::MomentSequence;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetSequence {
    terms: Vec<Rational>,
    support: Vec<usize>,
}

impl TargetSequence {
    pub fn new(terms: Vec<Rational>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::EmptySequence);
        }
        let support = terms
            .iter()
            .enumerate()
            .filter(|(_, t)| **t != 0)
            .map(|(n, _)| n)
            .collect();
        Ok(TargetSequence { terms, support })
    }

    pub fn from_integers<I: IntoIterator<Item = i64>>(terms: I) -> Result<Self> {
        Self::new(terms.into_iter().map(Rational::from).collect())
    }

    pub fn terms(&self) -> &[Rational] {
        &self.terms
    }

    /// Indices `n` with `t_n ≠ 0`, ascending.
    pub fn support(&self) -> &[usize] {
        &self.support
    }

    /// Largest index `N`.
    pub fn max_index(&self) -> usize {
        self.terms.len() - 1
    }
}

/// One sign condition `Δ_k > 0`.
///
/// `Δ_0 = (-1)^{(n_0+1)/2} t_{n_0}` applies when `n_0 + 1` is even, and
/// `Δ_{k+1} = (-1)^{g/2} t_{n_{k+1}} t_{n_k}` applies when `g = n_{k+1} - n_k` is even.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Condition {
    /// `k` in `Δ_k`.
    pub delta_index: usize,
    /// The support index whose target enters last (`n_0` or `n_{k+1}`).
    pub position: usize,
    /// `n_0 + 1` for `Δ_0`, otherwise `n_{k+1} - n_k`.
    pub gap: usize,
    #[serde(with = "crate::scalar::serde_rational")]
    pub value: Rational,
}

/// The first failed condition.
pub type Violation = Condition;

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Δ_{} = {} at t_{} (gap {}) must be positive",
            self.delta_index, self.value, self.position, self.gap
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolvabilityReport {
    pub solvable: bool,
    pub support: Vec<usize>,
    /// Every condition that applies, in order.
    pub deltas: Vec<Condition>,
    pub violation: Option<Violation>,
}

fn neg_one_pow(e: usize) -> i32 {
    if e.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

pub fn frobenius_check(t: &TargetSequence) -> SolvabilityReport {
    let support = t.support().to_vec();
    let terms = t.terms();
    let mut deltas = Vec::new();
    if let Some(&n0) = support.first() {
        if (n0 + 1) % 2 == 0 {
            deltas.push(Condition {
                delta_index: 0,
                position: n0,
                gap: n0 + 1,
                value: Rational::from(&terms[n0] * neg_one_pow(n0.div_ceil(2))),
            });
        }
    }
    for (k, w) in support.windows(2).enumerate() {
        let g = w[1] - w[0];
        if g % 2 == 0 {
            let product = Rational::from(&terms[w[1]] * &terms[w[0]]);
            deltas.push(Condition {
                delta_index: k + 1,
                position: w[1],
                gap: g,
                value: product * neg_one_pow(g / 2),
            });
        }
    }
    let violation = deltas.iter().find(|d| d.value <= 0).cloned();
    SolvabilityReport {
        solvable: violation.is_none(),
        support,
        deltas,
        violation,
    }
}

/// How the entries left free by the construction are filled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FreePolicy {
    #[default]
    Zeros,
    /// Small rationals `p/q` with `|p| ≤ 10`, `1 ≤ q ≤ 10`, drawn from a
    /// ChaCha8 stream with this seed.
    Seed(u64),
}

impl FromStr for FreePolicy {
    type Err = ParseError;
    fn from_str(text: &str) -> std::result::Result<Self, ParseError> {
        let text = text.trim();
        if text == "zeros" {
            return Ok(FreePolicy::Zeros);
        }
        text.strip_prefix("seed:")
            .and_then(|seed| seed.parse::<u64>().ok())
            .map(FreePolicy::Seed)
            .ok_or_else(|| ParseError::Policy(text.to_string()))
    }
}

impl fmt::Display for FreePolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FreePolicy::Zeros => write!(f, "zeros"),
            FreePolicy::Seed(seed) => write!(f, "seed:{seed}"),
        }
    }
}

impl Serialize for FreePolicy {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

enum FreeSource {
    Zeros,
    Random(ChaCha8Rng),
}

impl FreeSource {
    fn new(policy: FreePolicy) -> Self {
        match policy {
            FreePolicy::Zeros => FreeSource::Zeros,
            FreePolicy::Seed(seed) => FreeSource::Random(ChaCha8Rng::seed_from_u64(seed)),
        }
    }

    fn next(&mut self) -> Rational {
        match self {
            FreeSource::Zeros => Rational::new(),
            FreeSource::Random(rng) => {
                let p: i64 = rng.gen_range(-10..=10);
                let q: i64 = rng.gen_range(1..=10);
                Rational::from((p, q))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolutionMode {
    /// Every root taken was rational; the solution is exact.
    Exact,
    /// Some root was irrational and was rounded to this many bits.
    BigFloat { precision_bits: u32 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct InverseSolution {
    /// `s_0..s_{2N}`.
    pub s: MomentSequence,
    pub mode: SolutionMode,
    /// `D_0(s)..D_N(s)`, recomputed exactly.
    pub certificate: Vec<Rational>,
    /// `max_n |D_n(s) - t_n| / max(1, |t_n|)`.
    pub max_residual: Float,
}

impl Serialize for InverseSolution {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = serializer.serialize_map(None)?;
        let solution: Vec<String> = self.s.terms().iter().map(|x| x.to_string()).collect();
        map.serialize_entry("solution", &solution)?;
        match self.mode {
            SolutionMode::Exact => map.serialize_entry("mode", "exact")?,
            SolutionMode::BigFloat { precision_bits } => {
                map.serialize_entry("mode", "bigfloat")?;
                map.serialize_entry("precision_bits", &precision_bits)?;
            }
        }
        map.serialize_entry(
            "max_residual",
            &crate::scalar::format_real(&self.max_residual),
        )?;
        let certificate: Vec<String> = self.certificate.iter().map(|x| x.to_string()).collect();
        map.serialize_entry("certificate", &certificate)?;
        map.end()
    }
}

/// Real `order`-th root of `c`: positive for even order. Exact when `c` is a
/// perfect power, otherwise rounded to `prec` bits and flagged.
fn root(c: &Rational, order: usize, prec: u32, rounded: &mut bool) -> Rational {
    let k = u32::try_from(order).expect("root order fits in u32");
    exact_root(c, k).unwrap_or_else(|| {
        *rounded = true;
        rounded_root(c, k, prec)
    })
}

/// Builds `s_0..s_{2N}` with `D_n(s) = t_n` for `n ≤ N`.
///
/// At each step the new free parameter `X` must satisfy
/// `X^g = (-1)^{g(g-1)/2} t_{n_{k+1}} / D_{n_k}` for the gap `g`; the positive
/// root is taken for even `g` and the real root for odd `g`. The initial block
/// uses `s_{n_0}^{n_0+1} = (-1)^{n_0(n_0+1)/2} t_{n_0}` with the same choice.
/// Entries the construction leaves open are filled according to `policy`.
///
/// When a root is irrational it is rounded to `precision` bits and the exact
/// rational value of the rounded number is used from then on. The determinants
/// of the result are always recomputed exactly, and a relative deviation above
/// `tol` is reported as [`Error::PrecisionExhausted`].
pub fn solve_inverse(
    t: &TargetSequence,
    policy: FreePolicy,
    precision: u32,
    tol: &Float,
) -> Result<InverseSolution> {
    let prec = check_precision(precision)?;
    let report = frobenius_check(t);
    if let Some(v) = report.violation {
        return Err(Error::NotSolvable(v));
    }
    let n_max = t.max_index();
    let len = 2 * n_max + 1;
    let terms = t.terms();
    let support = t.support();
    let mut free = FreeSource::new(policy);
    let mut rounded = false;

    let Some(&n0) = support.first() else {
        let s = MomentSequence::new(vec![Rational::new(); len])?;
        return certify(s, t, SolutionMode::Exact, prec, tol);
    };

    let mut s: Vec<Rational> = vec![Rational::new(); n0];
    let c0 = Rational::from(&terms[n0] * neg_one_pow(n0 * (n0 + 1) / 2));
    s.push(root(&c0, n0 + 1, prec, &mut rounded));
    while s.len() <= 2 * n0 {
        s.push(free.next());
    }

    let mut blocks: Vec<(usize, Option<usize>)> =
        support.windows(2).map(|w| (w[0], Some(w[1]))).collect();
    let last = *support.last().expect("nonempty support");
    if last < n_max {
        blocks.push((last, None));
    }

    for (nk, next) in blocks {
        let r = nk + 1;
        s.push(free.next()); // s_{2n_k+1}
        let target_end = match next {
            Some(nn) => nn + nk + 1,
            None => n_max + nk + 1,
        };
        let prefix = MomentSequence::new(s.clone())?;
        let approx = approx_sequence(&prefix, r, target_end)?;
        let approx = approx.terms();
        match next {
            Some(nn) => {
                let g = nn - nk;
                while s.len() < target_end {
                    s.push(approx[s.len()].clone());
                }
                let d_prev = hankel_det(&prefix, nk)?;
                let c = Rational::from(&terms[nn] * neg_one_pow(g * (g - 1) / 2)) / d_prev;
                let x = root(&c, g, prec, &mut rounded);
                s.push(Rational::from(&approx[target_end] + &x));
                while s.len() <= 2 * nn {
                    s.push(free.next());
                }
            }
            None => {
                while s.len() <= target_end {
                    s.push(approx[s.len()].clone());
                }
                while s.len() < len {
                    s.push(free.next());
                }
            }
        }
    }
    s.truncate(len);
    debug_assert_eq!(s.len(), len);

    let mode = if rounded {
        SolutionMode::BigFloat {
            precision_bits: prec,
        }
    } else {
        SolutionMode::Exact
    };
    certify(MomentSequence::new(s)?, t, mode, prec, tol)
}

fn certify(
    s: MomentSequence,
    t: &TargetSequence,
    mode: SolutionMode,
    prec: u32,
    tol: &Float,
) -> Result<InverseSolution> {
    let certificate = determinant_transform(&s).d_values;
    let mut max_residual = Float::new(prec);
    for (d, target) in certificate.iter().zip(t.terms()) {
        let dev = relative_deviation(d, target, prec);
        if dev > max_residual {
            max_residual = dev;
        }
    }
    if mode == SolutionMode::Exact {
        assert!(
            max_residual.is_zero(),
            "exact construction missed its target"
        );
    } else if max_residual > *tol {
        return Err(Error::PrecisionExhausted {
            residual: max_residual,
            tol: tol.clone(),
        });
    }
    Ok(InverseSolution {
        s,
        mode,
        certificate,
        max_residual,
    })
}
