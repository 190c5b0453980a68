//! Recovery of a finitely supported positive measure from a positive definite
//! moment prefix that turns flat.

use rug::ops::Pow;
use rug::{Float, Rational};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::hankel::determinant_transform;
use crate::hankel_poly::{poly_p, poly_q};
use crate::kronecker::{hankel_rank, RankVerdict};
use crate::poly::Polynomial;
use crate::scalar::{check_precision, format_rational, format_real};
use crate::sequence::MomentSequence;

/// Closed rational interval `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Interval {
    pub fn width(&self) -> Rational {
        Rational::from(&self.hi - &self.lo)
    }

    pub fn midpoint(&self) -> Rational {
        Rational::from(&self.lo + &self.hi) / 2
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.lo <= *x && *x <= self.hi
    }
}

impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        [format_rational(&self.lo), format_rational(&self.hi)].serialize(serializer)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    pub location: Float,
    pub enclosure: Interval,
    pub weight: Float,
}

impl Serialize for Atom {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(3))?;
        map.serialize_entry("location", &format_real(&self.location))?;
        map.serialize_entry("enclosure", &self.enclosure)?;
        map.serialize_entry("weight", &format_real(&self.weight))?;
        map.end()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteMeasure {
    /// Sorted by location.
    pub atoms: Vec<Atom>,
    pub precision_bits: u32,
}

impl DiscreteMeasure {
    pub fn r(&self) -> usize {
        self.atoms.len()
    }

    /// `Σ_k μ_k λ_k^n` at the working precision of the atoms.
    pub fn moment(&self, n: usize) -> Float {
        let prec = self
            .atoms
            .first()
            .map_or(self.precision_bits, |a| a.location.prec());
        let mut acc = Float::new(prec);
        for atom in &self.atoms {
            let power = Float::with_val(prec, (&atom.location).pow(n as u32));
            acc += power * &atom.weight;
        }
        acc
    }
}

impl Serialize for DiscreteMeasure {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(3))?;
        map.serialize_entry("atoms", &self.atoms)?;
        map.serialize_entry("r", &self.r())?;
        map.serialize_entry("precision_bits", &self.precision_bits)?;
        map.end()
    }
}

/// Returns `r` when `D_0, ..., D_{r-1} > 0`, every later computable `D_n`
/// vanishes, and the prefix satisfies the rank-`r` recurrence.
pub fn psd_finite_rank_check(s: &MomentSequence) -> Result<usize> {
    if !s.is_nonzero() {
        return Err(Error::ZeroSequence);
    }
    let d = determinant_transform(s).d_values;
    let r = d
        .iter()
        .position(|x| *x <= 0)
        .ok_or(Error::FlatNotReached {
            horizon: d.len() - 1,
        })?;
    if let Some((index, value)) = d
        .iter()
        .enumerate()
        .skip(r)
        .find(|(n, x)| **x != 0 || *n == 0)
    {
        return Err(Error::NotPsdFlat {
            index,
            value: value.clone(),
        });
    }
    match hankel_rank(s).verdict {
        RankVerdict::FiniteRank(k) if k == r => Ok(r),
        _ => Err(Error::RankNotCertified { r }),
    }
}

struct Sturm {
    chain: Vec<Polynomial>,
}

impl Sturm {
    fn new(p: &Polynomial) -> Self {
        let mut chain = vec![p.clone(), p.derivative()];
        loop {
            let n = chain.len();
            let (_, rem) = chain[n - 2].div_rem(&chain[n - 1]);
            if rem.is_zero() {
                break;
            }
            chain.push(-&rem);
        }
        Sturm { chain }
    }

    fn variations(&self, x: &Rational) -> usize {
        let mut count = 0;
        let mut last = 0;
        for p in &self.chain {
            let sign = p.eval(x).cmp0() as i32;
            if sign != 0 {
                if last != 0 && sign != last {
                    count += 1;
                }
                last = sign;
            }
        }
        count
    }

    /// Distinct real roots in `(lo, hi]`.
    fn count(&self, lo: &Rational, hi: &Rational) -> usize {
        self.variations(lo) - self.variations(hi)
    }
}

/// `max(1, Σ_{k<r} |p_k / p_r|)`: every root has modulus at most this.
pub fn cauchy_bound(p: &Polynomial) -> Rational {
    let lead = p.leading().expect("nonzero polynomial");
    let r = p.degree().expect("nonzero polynomial");
    let sum: Rational = p.coeffs()[..r]
        .iter()
        .map(|c| Rational::from(c / lead).abs())
        .sum();
    sum.max(Rational::from(1))
}

/// One bisection step on an interval `(lo, hi]` holding a single root.
/// Collapses to `[x, x]` when `x` is hit exactly.
fn bisect(sturm: &Sturm, p: &Polynomial, iv: &mut Interval) {
    if iv.lo == iv.hi {
        return;
    }
    let mid = iv.midpoint();
    if p.eval(&mid) == 0 {
        iv.lo = mid.clone();
        iv.hi = mid;
    } else if sturm.count(&iv.lo, &mid) == 1 {
        iv.hi = mid;
    } else {
        iv.lo = mid;
    }
}

/// Isolates the real roots of `p` in disjoint closed intervals of width at
/// most `2^-precision · max(1, B)`, `B` the Cauchy bound. Fails unless `p` has
/// `deg p` distinct real roots.
pub fn isolate_real_roots(p: &Polynomial, precision: u32) -> Result<Vec<Interval>> {
    let degree = match p.degree() {
        Some(d) if d >= 1 => d,
        _ => {
            return Err(Error::InvalidArgument(
                "root isolation needs a polynomial of degree at least 1".into(),
            ))
        }
    };
    let squarefree = p.div_rem(&p.gcd(&p.derivative())).0;
    let sturm = Sturm::new(&squarefree);
    let bound = cauchy_bound(p);
    let outer = Interval {
        lo: Rational::from(-&bound) - 1u32,
        hi: Rational::from(&bound + 1u32),
    };
    let total = sturm.count(&outer.lo, &outer.hi);
    if total != degree {
        return Err(Error::RootCountMismatch {
            expected: degree,
            found: total,
        });
    }

    let mut isolated = Vec::new();
    let mut stack = vec![(outer, total)];
    while let Some((iv, count)) = stack.pop() {
        match count {
            0 => {}
            1 => isolated.push(iv),
            _ => {
                let mid = iv.midpoint();
                let left = sturm.count(&iv.lo, &mid);
                stack.push((
                    Interval {
                        lo: mid.clone(),
                        hi: iv.hi,
                    },
                    count - left,
                ));
                stack.push((Interval { lo: iv.lo, hi: mid }, left));
            }
        }
    }
    isolated.sort_by(|a, b| a.lo.cmp(&b.lo));

    let mut target = Rational::from((1u32, rug::Integer::from(1) << precision));
    target *= bound.max(Rational::from(1));
    for iv in &mut isolated {
        if squarefree.eval(&iv.hi) == 0 {
            iv.lo = iv.hi.clone();
        }
        while iv.width() > target {
            bisect(&sturm, &squarefree, iv);
        }
    }
    // Adjacent half-open intervals may share an endpoint; shrink until the
    // closed enclosures are disjoint.
    for k in 1..isolated.len() {
        while isolated[k - 1].hi >= isolated[k].lo {
            let (left, right) = isolated.split_at_mut(k);
            if right[0].lo != right[0].hi {
                bisect(&sturm, &squarefree, &mut right[0]);
            } else {
                bisect(&sturm, &squarefree, &mut left[k - 1]);
            }
        }
    }
    Ok(isolated)
}

/// Atoms at the roots of `P_r` with weights `Q_r(λ) / P_r'(λ)`, cross-checked
/// against `(Σ_{k<r} P_k(λ)^2 / (D_k D_{k-1}))^{-1}`.
///
/// Roots are enclosed to `precision + 64` bits and all floating evaluation
/// runs at that precision. The two weights must agree to within
/// `2^{-precision/2}` relative.
pub fn recover_measure(s: &MomentSequence, precision: u32) -> Result<DiscreteMeasure> {
    let prec = check_precision(precision)?;
    let work = prec + 64;
    let r = psd_finite_rank_check(s)?;
    let d = determinant_transform(s).d_values;
    let p_r = poly_p(s, r)?;
    let q_r = poly_q(s, r)?;
    let dp_r = p_r.derivative();
    let lower: Vec<Polynomial> = (0..r).map(|k| poly_p(s, k)).collect::<Result<_>>()?;
    let norms: Vec<Rational> = (0..r)
        .map(|k| {
            let before = if k == 0 {
                Rational::from(1)
            } else {
                d[k - 1].clone()
            };
            Rational::from(&d[k] * &before)
        })
        .collect();
    let agreement = Float::with_val(work, Float::i_exp(1, -((prec / 2) as i32)));

    let mut atoms = Vec::with_capacity(r);
    for (index, enclosure) in isolate_real_roots(&p_r, work)?.into_iter().enumerate() {
        let location = Float::with_val(work, enclosure.midpoint());
        let by_quotient = q_r.eval_float(&location) / dp_r.eval_float(&location);
        let mut sum = Float::new(work);
        for (p, norm) in lower.iter().zip(&norms) {
            let v = p.eval_float(&location);
            sum += Float::with_val(work, v.square_ref()) / norm;
        }
        let by_sum = sum.recip();
        if by_quotient <= 0 || by_sum <= 0 {
            return Err(Error::NonPositiveWeight { atom: index });
        }
        let relative = Float::with_val(work, &by_quotient - &by_sum).abs() / &by_sum;
        if relative > agreement {
            return Err(Error::WeightMismatch {
                atom: index,
                relative,
            });
        }
        atoms.push(Atom {
            location,
            enclosure,
            weight: by_quotient,
        });
    }
    Ok(DiscreteMeasure {
        atoms,
        precision_bits: prec,
    })
}

/// Outcome of comparing a measure's moments with a prefix.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentCheck {
    /// `max_n |Σ_k μ_k λ_k^n - s_n|` over the prefix.
    pub max_residual: Float,
    pub tol: Float,
    pub passed: bool,
}

impl Serialize for MomentCheck {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(3))?;
        map.serialize_entry("max_residual", &format_real(&self.max_residual))?;
        map.serialize_entry("tol", &format_real(&self.tol))?;
        map.serialize_entry("passed", &self.passed)?;
        map.end()
    }
}

pub fn verify_moments(m: &DiscreteMeasure, s: &MomentSequence, tol: &Float) -> MomentCheck {
    let prec = m
        .atoms
        .first()
        .map_or(m.precision_bits, |a| a.location.prec());
    let mut max_residual = Float::new(prec);
    for (n, sn) in s.terms().iter().enumerate() {
        let diff = Float::with_val(prec, m.moment(n) - sn).abs();
        if diff > max_residual {
            max_residual = diff;
        }
    }
    let passed = max_residual <= *tol;
    MomentCheck {
        max_residual,
        tol: tol.clone(),
        passed,
    }
}

/// `P_r' P_{r-1} - P_r P_{r-1}' - D_{r-1}^2 Σ_{k<r} P_k^2 / (D_k D_{k-1})`,
/// identically zero when `D_0, ..., D_{r-1}` are nonzero.
pub fn cd_identity_residual(s: &MomentSequence, r: usize) -> Result<Polynomial> {
    if r == 0 {
        return Err(Error::InvalidArgument("r must be at least 1".into()));
    }
    s.require(2 * r - 1)?;
    let d = determinant_transform(s).d_values;
    if let Some(index) = (0..r).find(|&k| d[k] == 0) {
        return Err(Error::NotQuasiDefinite { index });
    }
    let p_r = poly_p(s, r)?;
    let p_prev = poly_p(s, r - 1)?;
    let mut sum = Polynomial::zero();
    for k in 0..r {
        let before = if k == 0 {
            Rational::from(1)
        } else {
            d[k - 1].clone()
        };
        let pk = poly_p(s, k)?;
        let scale = Rational::from(&d[k] * &before).recip();
        sum = &sum + &(&pk * &pk).scale(&scale);
    }
    let lhs = &(&p_r.derivative() * &p_prev) - &(&p_r * &p_prev.derivative());
    Ok(&lhs - &sum.scale(&Rational::from(d[r - 1].square_ref())))
}
