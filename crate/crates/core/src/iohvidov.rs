//! Iohvidov approximating sequences, the characteristic, gap identities and
//! the Frobenius structure of the polynomials `P_n`.

use rug::ops::Pow;
use rug::Rational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hankel::{hankel_det, shifted_det};
use crate::hankel_poly::poly_p;
use crate::matrix;
use crate::poly::Polynomial;
use crate::sequence::MomentSequence;

/// Coefficients `d_0..d_{r-1}` of the rank-`r` recurrence
/// `s_{r+m} = Σ_k d_k s_{k+m}` fitted to `s_0..s_{2r-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ApproxRecurrence {
    pub r: usize,
    #[serde(with = "crate::scalar::serde_rational::vec")]
    pub d: Vec<Rational>,
}

impl ApproxRecurrence {
    /// Extends `seed` (at least `r` terms) by the recurrence up to index `m_out`.
    pub fn extend(&self, seed: &[Rational], m_out: usize) -> Vec<Rational> {
        let r = self.r;
        assert!(seed.len() >= r, "seed shorter than the recurrence order");
        let mut out: Vec<Rational> = seed.iter().take(m_out + 1).cloned().collect();
        while out.len() <= m_out {
            let m = out.len() - r;
            let next = self
                .d
                .iter()
                .zip(&out[m..])
                .map(|(d, s)| Rational::from(d * s))
                .sum();
            out.push(next);
        }
        out
    }

    /// Row `n` of the shifted coefficients: `Σ_k d_{n,k} s_{k+m} = s_{r+n+m}`.
    /// Read off the first row of `C^{n+1}` for the companion matrix `C`
    /// acting on `(s_{m+r-1}, ..., s_m)`.
    pub fn shifted(&self, n: usize) -> Vec<Rational> {
        let r = self.r;
        // row holds the first row of C^j in state order (s_{m+r-1}, ..., s_m)
        let companion_top: Vec<Rational> = self.d.iter().rev().cloned().collect();
        let mut row = companion_top.clone();
        for _ in 0..n {
            // row * C: entry j gets row[0] * top[j] + row[j+1]
            let mut next: Vec<Rational> = companion_top
                .iter()
                .map(|c| Rational::from(&row[0] * c))
                .collect();
            for j in 0..r - 1 {
                next[j] += &row[j + 1];
            }
            row = next;
        }
        row.reverse();
        row
    }
}

fn require_order(s: &MomentSequence, r: usize) -> Result<Rational> {
    if r == 0 {
        return Err(Error::InvalidArgument("r must be at least 1".into()));
    }
    s.require(2 * r - 1)?;
    let d = hankel_det(s, r - 1)?;
    if d == 0 {
        return Err(Error::SingularLeadingMinor { r });
    }
    Ok(d)
}

/// Solves `H_{r-1} d = (s_r, ..., s_{2r-1})`; needs `D_{r-1} ≠ 0`.
pub fn recurrence_coeffs(s: &MomentSequence, r: usize) -> Result<ApproxRecurrence> {
    let d_prev = require_order(s, r)?;
    let h = s.hankel_matrix(r - 1)?;
    let rhs = s.terms()[r..2 * r].to_vec();
    let d = matrix::solve(&h, &rhs).expect("D_{r-1} is nonzero");
    let p = poly_p(s, r)?;
    for (k, dk) in d.iter().enumerate() {
        assert_eq!(
            *dk,
            -p.coeff(k) / &d_prev,
            "recurrence coefficient disagrees with P_r"
        );
    }
    Ok(ApproxRecurrence { r, d })
}

/// `s^(r)_0..s^(r)_{m_out}`: `s_0..s_{2r-1}` continued by the recurrence.
pub fn approx_sequence(s: &MomentSequence, r: usize, m_out: usize) -> Result<MomentSequence> {
    let ar = recurrence_coeffs(s, r)?;
    if m_out + 1 < 2 * r {
        return Err(Error::InvalidArgument(format!(
            "output length {} is shorter than the 2r = {} seed terms",
            m_out + 1,
            2 * r
        )));
    }
    MomentSequence::new(ar.extend(&s.terms()[..2 * r], m_out))
}

/// Coefficients `d_{n,0}..d_{n,r-1}`; for `n = 0` these are `ar.d`.
pub fn shifted_recurrence_coeffs(ar: &ApproxRecurrence, n: usize) -> Vec<Rational> {
    ar.shifted(n)
}

/// The Iohvidov characteristic as far as the prefix can tell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Characteristic {
    /// `s_{2r+m} ≠ s^(r)_{2r+m}` for this `m`, with agreement before it.
    Finite(usize),
    /// No disagreement within a prefix of this length.
    ExceedsHorizon(usize),
}

pub fn characteristic(s: &MomentSequence, r: usize) -> Result<Characteristic> {
    let approx = approx_sequence(s, r, s.max_index().max(2 * r - 1))?;
    let mismatch = (2 * r..s.len()).find(|&i| s.terms()[i] != approx.terms()[i]);
    Ok(match mismatch {
        Some(i) => Characteristic::Finite(i - 2 * r),
        None => Characteristic::ExceedsHorizon(s.len()),
    })
}

/// `D_{r+d} = (-1)^{d(d+1)/2} (s_{2r+d} - s^(r)_{2r+d})^{d+1} D_{r-1}`, valid when
/// `D_r = ... = D_{r+d-1} = 0`, which is checked through the equivalent
/// agreement of `s` with `s^(r)` on indices `2r..2r+d-1`.
pub fn gap_determinant(s: &MomentSequence, r: usize, d: usize) -> Result<Rational> {
    let d_prev = require_order(s, r)?;
    s.require(2 * (r + d))?;
    let approx = approx_sequence(s, r, 2 * r + d)?;
    let t = s.terms();
    if let Some(j) = (0..d).find(|&j| t[2 * r + j] != approx.terms()[2 * r + j]) {
        return Err(Error::GapHypothesisViolated { index: r + j });
    }
    let diff = Rational::from(&t[2 * r + d] - &approx.terms()[2 * r + d]);
    let mut value = diff.pow(u32::try_from(d + 1).expect("gap fits in u32")) * d_prev;
    if (d * (d + 1) / 2) % 2 == 1 {
        value = -value;
    }
    Ok(value)
}

/// `D'_{r+1} = (s_{2r+1} - s^(r)_{2r+1}) D_{r-1} - (s_{2r} - s^(r)_{2r}) D'_r`.
pub fn shifted_gap_det(s: &MomentSequence, r: usize) -> Result<Rational> {
    let d_prev = require_order(s, r)?;
    s.require(2 * r + 1)?;
    let approx = approx_sequence(s, r, 2 * r + 1)?;
    let t = s.terms();
    let a = approx.terms();
    let e0 = Rational::from(&t[2 * r] - &a[2 * r]);
    let e1 = Rational::from(&t[2 * r + 1] - &a[2 * r + 1]);
    let dp = shifted_det(s, r - 1)?;
    Ok(e1 * d_prev - e0 * dp)
}

/// How `P_n` relates to the full-degree polynomials before it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PolyShape {
    FullDegree,
    Zero,
    /// `P_n = value · P_{base}` for the last full-degree index `base`.
    Multiple {
        base: usize,
        #[serde(with = "crate::scalar::serde_rational")]
        value: Rational,
    },
    /// None of the above; never produced for a correct computation.
    Irregular,
}

/// `P_{index} = value · P_{base}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Gamma {
    pub index: usize,
    pub base: usize,
    #[serde(with = "crate::scalar::serde_rational")]
    pub value: Rational,
}

/// `p_{n_{k+1}} = a_k p_{n_k} - β_k p_{n_{k-1}}` for monic `p_n = P_n / D_{n-1}`.
/// `beta` is absent for `k = 0`, where `p_{n_{-1}} = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockRecurrence {
    pub k: usize,
    pub from: usize,
    pub to: usize,
    pub a: Polynomial,
    #[serde(with = "crate::scalar::serde_rational::option")]
    pub beta: Option<Rational>,
    pub consistent: bool,
}

/// Behaviour after the last full-degree index found in the prefix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Tail {
    pub last_full_degree: usize,
    /// Every computed `P_n` with `n > last_full_degree` vanishes.
    pub polys_vanish: bool,
    /// Every computable `D_n` with `n ≥ last_full_degree` vanishes.
    pub determinants_vanish: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    pub full_degree_indices: Vec<usize>,
    pub shapes: Vec<PolyShape>,
    pub gamma: Vec<Gamma>,
    pub block_polys: Vec<BlockRecurrence>,
    /// Inclusive ranges `[start, end]` of consecutive indices with `P_n ≡ 0`.
    pub zero_blocks: Vec<(usize, usize)>,
    pub tail: Tail,
    /// Largest `n` for which `P_n` was computed.
    pub horizon: usize,
    pub prefix_len: usize,
    pub consistent: bool,
}

/// Computes every `P_n` the prefix allows and records its Frobenius structure.
pub fn degree_profile(s: &MomentSequence) -> Result<StructureReport> {
    if !s.is_nonzero() {
        return Err(Error::ZeroSequence);
    }
    let horizon = s.max_index().div_ceil(2);
    let polys: Vec<Polynomial> = (0..=horizon).map(|n| poly_p(s, n)).collect::<Result<_>>()?;
    let dets: Vec<Rational> = (0..=s.max_index() / 2)
        .map(|n| hankel_det(s, n))
        .collect::<Result<_>>()?;
    let d_before = |n: usize| -> Rational {
        if n == 0 {
            Rational::from(1)
        } else {
            dets[n - 1].clone()
        }
    };

    let mut full = Vec::new();
    let mut shapes = Vec::with_capacity(polys.len());
    let mut gamma = Vec::new();
    for (n, p) in polys.iter().enumerate() {
        let shape = if p.degree() == Some(n) {
            full.push(n);
            PolyShape::FullDegree
        } else if p.is_zero() {
            PolyShape::Zero
        } else {
            let base = *full.last().expect("P_0 has full degree");
            let bp = &polys[base];
            let value =
                Rational::from(p.leading().expect("nonzero") / bp.leading().expect("nonzero"));
            if p.degree() == bp.degree() && bp.scale(&value) == *p {
                gamma.push(Gamma {
                    index: n,
                    base,
                    value: value.clone(),
                });
                PolyShape::Multiple { base, value }
            } else {
                PolyShape::Irregular
            }
        };
        shapes.push(shape);
    }

    let mut zero_blocks: Vec<(usize, usize)> = Vec::new();
    for (n, shape) in shapes.iter().enumerate() {
        if *shape == PolyShape::Zero {
            match zero_blocks.last_mut() {
                Some((_, end)) if *end + 1 == n => *end = n,
                _ => zero_blocks.push((n, n)),
            }
        }
    }

    let monic: Vec<Polynomial> = full
        .iter()
        .map(|&n| polys[n].scale(&Rational::from(d_before(n).recip_ref())))
        .collect();
    let mut block_polys = Vec::new();
    for k in 0..full.len().saturating_sub(1) {
        let (a, rem) = monic[k + 1].div_rem(&monic[k]);
        let (beta, consistent) = if k == 0 {
            (None, rem.is_zero())
        } else {
            let prev = &monic[k - 1];
            let beta = -rem.coeff(full[k - 1]);
            let ok = beta != 0 && (&rem + &prev.scale(&beta)).is_zero();
            (Some(beta), ok)
        };
        let consistent = consistent
            && a.degree() == Some(full[k + 1] - full[k])
            && a.leading().is_some_and(|c| *c == 1);
        block_polys.push(BlockRecurrence {
            k,
            from: full[k],
            to: full[k + 1],
            a,
            beta,
            consistent,
        });
    }

    let last = *full.last().expect("P_0 has full degree");
    let tail = Tail {
        last_full_degree: last,
        polys_vanish: polys[last + 1..].iter().all(Polynomial::is_zero),
        determinants_vanish: dets.iter().skip(last).all(|d| *d == 0),
    };

    // Between consecutive full-degree indices n_k < n_{k+1}: zeros, then a
    // single multiple of P_{n_k} at n_{k+1} - 1.
    let mut consistent = block_polys.iter().all(|b| b.consistent);
    for w in full.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b - a >= 2 {
            let zeros_ok = (a + 1..b - 1).all(|n| shapes[n] == PolyShape::Zero);
            let mult_ok = matches!(shapes[b - 1], PolyShape::Multiple { base, .. } if base == a);
            consistent &= zeros_ok && mult_ok;
        }
    }
    consistent &= !shapes.contains(&PolyShape::Irregular);

    Ok(StructureReport {
        full_degree_indices: full,
        shapes,
        gamma,
        block_polys,
        zero_blocks,
        tail,
        horizon,
        prefix_len: s.len(),
        consistent,
    })
}
