//! Hankel determinants `D_n`, shifted determinants `D'_{n+1}`, minors and rank.

use rug::Rational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix;
use crate::sequence::MomentSequence;

/// `D_n = det(s_{i+j})_{i,j=0..n}`; needs `2n ≤ M`.
pub fn hankel_det(s: &MomentSequence, n: usize) -> Result<Rational> {
    Ok(matrix::determinant(&s.hankel_matrix(n)?))
}

/// Matrix of `D'_{n+1}`: the columns of `H_n` for `j < n`, then the column
/// `s_{i+n+1}`.
pub fn shifted_matrix(s: &MomentSequence, n: usize) -> Result<Vec<Vec<Rational>>> {
    s.require(2 * n + 1)?;
    let t = s.terms();
    Ok((0..=n)
        .map(|i| {
            let mut row = t[i..i + n].to_vec();
            row.push(t[i + n + 1].clone());
            row
        })
        .collect())
}

/// `D'_{n+1}`, the determinant obtained from `D_{n+1}` by deleting row `n+2`
/// and column `n+1`. `D'_1 = s_1`.
pub fn shifted_det(s: &MomentSequence, n: usize) -> Result<Rational> {
    Ok(matrix::determinant(&shifted_matrix(s, n)?))
}

/// `D_n^{k,m}`: determinant of `H_n` without row `k` and column `m` (1-based).
pub fn hankel_minor(s: &MomentSequence, n: usize, k: usize, m: usize) -> Result<Rational> {
    let h = s.hankel_matrix(n)?;
    if !(1..=n + 1).contains(&k) || !(1..=n + 1).contains(&m) {
        return Err(Error::IndexOutOfRange {
            needed: k.max(m),
            len: n + 1,
        });
    }
    let minor: Vec<Vec<Rational>> = h
        .into_iter()
        .enumerate()
        .filter(|&(i, _)| i != k - 1)
        .map(|(_, row)| {
            row.into_iter()
                .enumerate()
                .filter(|&(j, _)| j != m - 1)
                .map(|(_, x)| x)
                .collect()
        })
        .collect();
    Ok(matrix::determinant(&minor))
}

/// Rank of `H_n`.
pub fn matrix_rank(s: &MomentSequence, n: usize) -> Result<usize> {
    Ok(matrix::rank(&s.hankel_matrix(n)?))
}

/// All `D_n` with `2n ≤ M` and all `D'_{n+1}` with `2n+1 ≤ M`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeterminantProfile {
    #[serde(rename = "D", with = "crate::scalar::serde_rational::vec")]
    pub d_values: Vec<Rational>,
    #[serde(rename = "Dprime", with = "crate::scalar::serde_rational::vec")]
    pub d_prime_values: Vec<Rational>,
}

impl DeterminantProfile {
    /// `D_n` with the convention `D_{-1} = 1`.
    pub fn d(&self, n: isize) -> Option<Rational> {
        if n == -1 {
            Some(Rational::from(1))
        } else {
            usize::try_from(n)
                .ok()
                .and_then(|n| self.d_values.get(n).cloned())
        }
    }

    /// `D'_n` with the convention `D'_0 = 0`.
    pub fn d_prime(&self, n: usize) -> Option<Rational> {
        if n == 0 {
            Some(Rational::new())
        } else {
            self.d_prime_values.get(n - 1).cloned()
        }
    }
}

pub fn determinant_transform(s: &MomentSequence) -> DeterminantProfile {
    let m = s.max_index();
    let d_values = (0..=m / 2)
        .map(|n| hankel_det(s, n).expect("index in range"))
        .collect();
    let d_prime_values = if m >= 1 {
        (0..=(m - 1) / 2)
            .map(|n| shifted_det(s, n).expect("index in range"))
            .collect()
    } else {
        Vec::new()
    };
    DeterminantProfile {
        d_values,
        d_prime_values,
    }
}
