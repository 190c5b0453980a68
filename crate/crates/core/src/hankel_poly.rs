//! Hankel determinant polynomials `P_n`, second-kind polynomials `Q_n`, the
//! moment functional and the Jacobi coefficients.

use rug::Rational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hankel::{hankel_det, shifted_det};
use crate::matrix;
use crate::poly::Polynomial;
use crate::sequence::MomentSequence;

/// `P_n(x)`: `det H_n` with its last row replaced by `1, x, ..., x^n`.
/// Needs `s_0..s_{2n-1}`; `P_0 = 1`.
pub fn poly_p(s: &MomentSequence, n: usize) -> Result<Polynomial> {
    if n == 0 {
        return Ok(Polynomial::one());
    }
    s.require(2 * n - 1)?;
    let t = s.terms();
    let rows: Vec<Vec<Rational>> = (0..n).map(|i| t[i..=i + n].to_vec()).collect();
    Ok(Polynomial::new(matrix::cofactor_row(&rows)))
}

/// `Q_n(x) = L_t[(P_n(x) - P_n(t)) / (x - t)]`, with `q_{n,m} = Σ_k p_{n,k+m+1} s_k`.
/// `Q_0 = 0`.
pub fn poly_q(s: &MomentSequence, n: usize) -> Result<Polynomial> {
    let p = poly_p(s, n)?;
    Ok(q_from_p(s, &p, n))
}

pub(crate) fn q_from_p(s: &MomentSequence, p: &Polynomial, n: usize) -> Polynomial {
    let t = s.terms();
    Polynomial::new(
        (0..n)
            .map(|m| {
                (0..n - m)
                    .map(|k| p.coeff(k + m + 1) * &t[k])
                    .sum::<Rational>()
            })
            .collect(),
    )
}

/// `L(p) = Σ_k p_k s_k`.
pub fn apply_l(s: &MomentSequence, p: &Polynomial) -> Result<Rational> {
    if let Some(d) = p.degree() {
        s.require(d)?;
    }
    Ok(p.coeffs()
        .iter()
        .zip(s.terms())
        .map(|(c, m)| Rational::from(c * m))
        .sum())
}

/// `P_{r-1} Q_r - P_r Q_{r-1} - D_{r-1}^2`, which vanishes identically.
pub fn kronecker_residual(s: &MomentSequence, r: usize) -> Result<Rational> {
    if r == 0 {
        return Err(Error::InvalidArgument("r must be at least 1".into()));
    }
    let (p_prev, q_prev) = (poly_p(s, r - 1)?, poly_q(s, r - 1)?);
    let (p, q) = (poly_p(s, r)?, poly_q(s, r)?);
    let combo = &(&p_prev * &q) - &(&p * &q_prev);
    if let Some(degree) = combo.degree().filter(|&d| d > 0) {
        return Err(Error::NonConstantResidual { degree });
    }
    let d = hankel_det(s, r - 1)?;
    Ok(combo.coeff(0) - Rational::from(&d * &d))
}

/// Three-term recurrence data `a_0..a_{N-1}`, `b_0..b_{N-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JacobiCoeffs {
    #[serde(with = "crate::scalar::serde_rational::vec")]
    pub a: Vec<Rational>,
    #[serde(with = "crate::scalar::serde_rational::vec")]
    pub b: Vec<Rational>,
}

impl JacobiCoeffs {
    pub fn new(a: Vec<Rational>, b: Vec<Rational>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::InvalidArgument(format!(
                "a has {} entries but b has {}",
                a.len(),
                b.len()
            )));
        }
        if let Some(index) = b.iter().position(|x| *x == 0) {
            return Err(Error::ZeroB { index });
        }
        Ok(JacobiCoeffs { a, b })
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }
}

/// `a_n = D'_{n+1}/D_n - D'_n/D_{n-1}`, `b_n = D_n D_{n-2} / D_{n-1}^2`, `b_0 = D_0`.
pub fn jacobi_from_moments(s: &MomentSequence, count: usize) -> Result<JacobiCoeffs> {
    let mut d = Vec::with_capacity(count);
    for n in 0..count {
        if 2 * n > s.max_index() {
            break;
        }
        let dn = hankel_det(s, n)?;
        if dn == 0 {
            return Err(Error::NotQuasiDefinite { index: n });
        }
        d.push(dn);
    }
    if count > 0 {
        s.require(2 * count - 1)?;
    }
    let d_at = |n: isize| -> Rational {
        if n < 0 {
            Rational::from(1)
        } else {
            d[n as usize].clone()
        }
    };
    let mut dp_prev = Rational::new();
    let mut a = Vec::with_capacity(count);
    let mut b = Vec::with_capacity(count);
    for n in 0..count {
        let dp = shifted_det(s, n)?;
        let ni = n as isize;
        a.push(Rational::from(&dp / &d[n]) - (&dp_prev / d_at(ni - 1)));
        b.push(if n == 0 {
            d[0].clone()
        } else {
            d_at(ni) * d_at(ni - 2) / d_at(ni - 1).square()
        });
        dp_prev = dp;
    }
    Ok(JacobiCoeffs { a, b })
}

/// Inverse of [`jacobi_from_moments`]: `s_0..s_{2N-1}` from `D_n = Π_k b_k^{n+1-k}`
/// and `D'_{n+1} = (a_0 + ... + a_n) D_n`.
pub fn moments_from_jacobi(j: &JacobiCoeffs) -> Result<MomentSequence> {
    if let Some(index) = j.b.iter().position(|x| *x == 0) {
        return Err(Error::ZeroB { index });
    }
    if j.is_empty() {
        return Err(Error::EmptySequence);
    }
    let mut t = Vec::with_capacity(j.len());
    let mut t_prime = Vec::with_capacity(j.len());
    // D_n = D_{n-1} * (b_0 b_1 ... b_n)
    let mut running_b = Rational::from(1);
    let mut d = Rational::from(1);
    let mut a_sum = Rational::new();
    for (a, b) in j.a.iter().zip(&j.b) {
        running_b *= b;
        d *= &running_b;
        a_sum += a;
        t_prime.push(Rational::from(&a_sum * &d));
        t.push(d.clone());
    }
    solve_prescribed(&t, &t_prime)
}

/// The unique `s_0..s_{2N-1}` with `D_n = t_n` and `D'_{n+1} = t'_n` for `n < N`,
/// obtained from the Laplace expansions of `D_n` and `D'_{n+1}` along their last
/// column.
pub fn solve_prescribed(t: &[Rational], t_prime: &[Rational]) -> Result<MomentSequence> {
    if t.len() != t_prime.len() {
        return Err(Error::InvalidArgument(format!(
            "t has {} entries but t' has {}",
            t.len(),
            t_prime.len()
        )));
    }
    if let Some(index) = t.iter().position(|x| *x == 0) {
        return Err(Error::ZeroTarget { index });
    }
    if t.is_empty() {
        return Err(Error::EmptySequence);
    }
    let mut s = vec![t[0].clone(), t_prime[0].clone()];
    for n in 1..t.len() {
        let minors: Vec<Rational> = (0..n).map(|k| last_column_minor(&s, n, n - k)).collect();
        // F_n = Σ_k (-1)^k s_{2n-1-k} D_n^{n-k,n+1}, and G_n likewise one index up.
        let laplace = |s: &[Rational], top: usize| -> Rational {
            minors
                .iter()
                .enumerate()
                .map(|(k, minor)| {
                    let term = Rational::from(&s[top - k] * minor);
                    if k % 2 == 0 {
                        term
                    } else {
                        -term
                    }
                })
                .sum()
        };
        let f = laplace(&s, 2 * n - 1);
        s.push(Rational::from(&t[n] + &f) / &t[n - 1]);
        let g = laplace(&s, 2 * n);
        s.push(Rational::from(&t_prime[n] + &g) / &t[n - 1]);
    }
    MomentSequence::new(s)
}

/// `D_n^{row, n+1}` (1-based row) computed from the available terms
/// `s_0..s_{2n-1}`.
fn last_column_minor(s: &[Rational], n: usize, row: usize) -> Rational {
    let rows: Vec<Vec<Rational>> = (0..=n)
        .filter(|&i| i != row - 1)
        .map(|i| s[i..i + n].to_vec())
        .collect();
    matrix::determinant(&rows)
}

/// `D_{n-1} D_n x P_n - D_{n-1}^2 P_{n+1} - (D_{n-1} D'_{n+1} - D_n D'_n) P_n - D_n^2 P_{n-1}`
/// with `P_{-1} = 0`, `D_{-1} = 1`, `D'_0 = 0`. Identically zero.
pub fn frobenius_recurrence_residual(s: &MomentSequence, n: usize) -> Result<Polynomial> {
    s.require(2 * n + 1)?;
    let d_n = hankel_det(s, n)?;
    let d_prev = if n == 0 {
        Rational::from(1)
    } else {
        hankel_det(s, n - 1)?
    };
    let dp_next = shifted_det(s, n)?;
    let dp_n = if n == 0 {
        Rational::new()
    } else {
        shifted_det(s, n - 1)?
    };
    let p_n = poly_p(s, n)?;
    let p_next = poly_p(s, n + 1)?;
    let p_prev = if n == 0 {
        Polynomial::zero()
    } else {
        poly_p(s, n - 1)?
    };
    let x_p = &Polynomial::monomial(Rational::from(1), 1) * &p_n;
    let middle = Rational::from(&d_prev * &dp_next) - Rational::from(&d_n * &dp_n);
    let lhs = x_p.scale(&Rational::from(&d_prev * &d_n));
    let r = &(&(&lhs - &p_next.scale(&Rational::from(d_prev.square_ref()))) - &p_n.scale(&middle))
        - &p_prev.scale(&Rational::from(d_n.square_ref()));
    Ok(r)
}
