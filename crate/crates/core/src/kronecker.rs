//! Finite Hankel rank: certificates, rational generating functions and their
//! re-expansion.

use rug::{Float, Rational};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::hankel::{determinant_transform, hankel_det, DeterminantProfile};
use crate::hankel_poly::{poly_p, poly_q};
use crate::iohvidov::{approx_sequence, recurrence_coeffs, ApproxRecurrence};
use crate::poly::Polynomial;
use crate::scalar::format_rational;
use crate::sequence::MomentSequence;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankVerdict {
    /// The whole prefix satisfies the rank-`r` recurrence with `D_{r-1} ≠ 0`.
    FiniteRank(usize),
    /// `D_{r-1} ≠ 0` is the last nonzero determinant, but no rank-`r` recurrence
    /// explains the prefix (or the prefix is too short to fit one).
    RankAtLeast(usize),
    ZeroSequence,
}

impl RankVerdict {
    pub fn rank(&self) -> usize {
        match *self {
            RankVerdict::FiniteRank(r) | RankVerdict::RankAtLeast(r) => r,
            RankVerdict::ZeroSequence => 0,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            RankVerdict::FiniteRank(_) => "finite_rank",
            RankVerdict::RankAtLeast(_) => "rank_at_least",
            RankVerdict::ZeroSequence => "zero_sequence",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankCertificate {
    pub verdict: RankVerdict,
    /// Number of terms the verdict is based on.
    pub horizon: usize,
    pub witness: Option<ApproxRecurrence>,
    pub d_profile: DeterminantProfile,
}

impl Serialize for RankCertificate {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(5))?;
        map.serialize_entry("verdict", self.verdict.name())?;
        map.serialize_entry("rank", &self.verdict.rank())?;
        map.serialize_entry("horizon", &self.horizon)?;
        let recurrence: Option<Vec<String>> = self
            .witness
            .as_ref()
            .map(|w| w.d.iter().map(format_rational).collect());
        map.serialize_entry("recurrence", &recurrence)?;
        map.serialize_entry("D", &self.d_profile)?;
        map.end()
    }
}

/// `D_{r-1} s_{r+m} + Σ_k p_{r,k} s_{k+m} = 0` for every `m ≥ r` inside the prefix.
fn recurrence_holds(s: &MomentSequence, r: usize, p: &Polynomial) -> bool {
    let t = s.terms();
    (r..).take_while(|m| r + m < t.len()).all(|m| {
        let acc: Rational = (0..=r).map(|k| p.coeff(k) * &t[k + m]).sum();
        acc == 0
    })
}

pub fn hankel_rank(s: &MomentSequence) -> RankCertificate {
    let d_profile = determinant_transform(s);
    let horizon = s.len();
    if !s.is_nonzero() {
        return RankCertificate {
            verdict: RankVerdict::ZeroSequence,
            horizon,
            witness: None,
            d_profile,
        };
    }
    // s is nonzero, so some D_n is nonzero.
    let r = d_profile
        .d_values
        .iter()
        .rposition(|d| *d != 0)
        .map(|i| i + 1)
        .unwrap_or(0);
    if r == 0 {
        // Only possible when every computable D vanishes yet s ≠ 0, e.g. s = (0, 1):
        // the first nonzero D lies beyond the prefix.
        return RankCertificate {
            verdict: RankVerdict::RankAtLeast(1),
            horizon,
            witness: None,
            d_profile,
        };
    }
    let certified =
        2 * r - 1 <= s.max_index() && poly_p(s, r).is_ok_and(|p| recurrence_holds(s, r, &p));
    let (verdict, witness) = if certified {
        let w = recurrence_coeffs(s, r).expect("D_{r-1} is nonzero");
        (RankVerdict::FiniteRank(r), Some(w))
    } else {
        (RankVerdict::RankAtLeast(r), None)
    };
    RankCertificate {
        verdict,
        horizon,
        witness,
        d_profile,
    }
}

/// The four equivalent finite-rank conditions, each evaluated on its own.
///
/// (b) reads only the determinants `D_n` with `2n ≤ M`, which pin the sequence
/// down through index `⌊M/2⌋ + r`; the other three use every term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CorollaryChecks {
    /// `s` coincides with `s^(r)`.
    pub a: bool,
    /// `D_n = 0` for every computable `n ≥ r`.
    pub b: bool,
    /// `Q_r / P_r` expands to `s`.
    pub c: bool,
    /// The recurrence with coefficients of `P_r` holds.
    pub d: bool,
}

impl CorollaryChecks {
    pub fn all_agree(&self) -> bool {
        self.a == self.b && self.b == self.c && self.c == self.d
    }
}

pub fn verify_corollary(s: &MomentSequence, r: usize) -> Result<CorollaryChecks> {
    let rf = rational_form(s, r)?;
    let m = s.max_index();
    let a = approx_sequence(s, r, m)? == *s;
    let b = (r..=m / 2).all(|n| hankel_det(s, n).is_ok_and(|d| d == 0));
    let c = expand_rational(&rf, m)? == *s;
    let d = recurrence_holds(s, r, &rf.p);
    Ok(CorollaryChecks { a, b, c, d })
}

/// `Q_r / P_r`, the generating function `Σ s_k / x^{k+1}` of a rank-`r` sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RationalForm {
    pub p: Polynomial,
    pub q: Polynomial,
}

pub fn rational_form(s: &MomentSequence, r: usize) -> Result<RationalForm> {
    if r == 0 {
        return Err(Error::InvalidArgument("r must be at least 1".into()));
    }
    s.require(2 * r - 1)?;
    if hankel_det(s, r - 1)? == 0 {
        return Err(Error::SingularLeadingMinor { r });
    }
    Ok(RationalForm {
        p: poly_p(s, r)?,
        q: poly_q(s, r)?,
    })
}

/// Coefficients `a_0..a_{m_out}` of `q/p = Σ a_m / x^{m+1}`.
pub fn expand_rational(rf: &RationalForm, m_out: usize) -> Result<MomentSequence> {
    let r = rf.p.degree().ok_or(Error::DegreeViolation)?;
    if rf.q.degree().is_some_and(|dq| dq >= r) {
        return Err(Error::DegreeViolation);
    }
    let p = &rf.p;
    let lead = p.leading().expect("nonzero").clone();
    let mut a: Vec<Rational> = Vec::with_capacity(m_out + 1);
    for j in 0..=m_out {
        let value = if j < r {
            let acc: Rational = (0..j).map(|i| p.coeff(r - j + i) * &a[i]).sum();
            (rf.q.coeff(r - 1 - j) - acc) / &lead
        } else {
            let m = j - r;
            let acc: Rational = (0..r).map(|k| p.coeff(k) * &a[m + k]).sum();
            -acc / &lead
        };
        a.push(value);
    }
    MomentSequence::new(a)
}

/// `max |s_k|^{1/k}` over the second half of the prefix, at `precision` bits.
///
/// A finite-sample stand-in for `limsup |s_k|^{1/k}`; it is not a bound.
pub fn growth_estimate(s: &MomentSequence, precision: u32) -> Result<Float> {
    if s.len() < 8 {
        return Err(Error::InvalidArgument(format!(
            "growth estimate needs at least 8 terms, got {}",
            s.len()
        )));
    }
    let prec = crate::scalar::check_precision(precision)?;
    let mut best = Float::new(prec);
    for k in (s.len() / 2).max(1)..s.len() {
        let v = Float::with_val(prec, Rational::from(s.terms()[k].abs_ref())).root(k as u32);
        if v > best {
            best = v;
        }
    }
    Ok(best)
}
