//! Independent reference implementations shared by the integration tests.
//!
//! Nothing here calls into the elimination code of the library: determinants
//! are expanded by cofactors, ranks come from plain Gauss-Jordan, and moments
//! of atomic measures are summed directly.

#![allow(dead_code)]

use std::collections::HashMap;

use hankel::{MomentSequence, Polynomial, Rational};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

/// `p/q` with `|p| ≤ 10`, `1 ≤ q ≤ 10`.
pub fn small_rational(rng: &mut ChaCha8Rng) -> Rational {
    q(rng.gen_range(-10..=10), rng.gen_range(1..=10))
}

pub fn nonzero_rational(rng: &mut ChaCha8Rng) -> Rational {
    loop {
        let x = small_rational(rng);
        if x != 0 {
            return x;
        }
    }
}

pub fn positive_rational(rng: &mut ChaCha8Rng) -> Rational {
    q(rng.gen_range(1..=10), rng.gen_range(1..=10))
}

pub fn random_terms(rng: &mut ChaCha8Rng, len: usize) -> Vec<Rational> {
    (0..len).map(|_| small_rational(rng)).collect()
}

/// Entries from `{-1, 0, 1}` with zeros twice as likely, so that vanishing
/// determinants show up often.
pub fn sparse_terms(rng: &mut ChaCha8Rng, len: usize) -> Vec<Rational> {
    (0..len)
        .map(|_| match rng.gen_range(0..4) {
            0 => q(1, 1),
            1 => q(-1, 1),
            _ => Rational::new(),
        })
        .collect()
}

pub fn seq(terms: Vec<Rational>) -> MomentSequence {
    MomentSequence::new(terms).unwrap()
}

/// Laplace expansion along the first row, memoised on the set of columns
/// still available.
pub fn cofactor_det(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    assert!(n <= 20);
    let mut memo: HashMap<u32, Rational> = HashMap::new();
    expand(m, 0, (1u32 << n) - 1, &mut memo)
}

fn expand(
    m: &[Vec<Rational>],
    row: usize,
    cols: u32,
    memo: &mut HashMap<u32, Rational>,
) -> Rational {
    if row == m.len() {
        return q(1, 1);
    }
    if let Some(v) = memo.get(&cols) {
        return v.clone();
    }
    let mut acc = Rational::new();
    let mut sign = 1;
    for c in 0..m.len() {
        if cols & (1 << c) == 0 {
            continue;
        }
        if m[row][c] != 0 {
            let minor = expand(m, row + 1, cols & !(1 << c), memo);
            let term = Rational::from(&m[row][c] * &minor);
            if sign > 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        sign = -sign;
    }
    memo.insert(cols, acc.clone());
    acc
}

pub fn hankel_matrix(s: &[Rational], n: usize, shift: usize) -> Vec<Vec<Rational>> {
    (0..=n)
        .map(|i| (0..=n).map(|j| s[i + j + shift].clone()).collect())
        .collect()
}

/// `D_n` by cofactor expansion.
pub fn det_oracle(s: &[Rational], n: usize) -> Rational {
    cofactor_det(&hankel_matrix(s, n, 0))
}

/// `D_n` for every `n` with `2n < s.len()`.
pub fn d_profile_oracle(s: &[Rational]) -> Vec<Rational> {
    (0..=(s.len() - 1) / 2).map(|n| det_oracle(s, n)).collect()
}

/// `D'_n`: `D_{n-1}` with its last column shifted one step further along.
pub fn d_prime_oracle(s: &[Rational], n: usize) -> Rational {
    if n == 0 {
        return Rational::new();
    }
    let m: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if j + 1 == n {
                        s[i + j + 1].clone()
                    } else {
                        s[i + j].clone()
                    }
                })
                .collect()
        })
        .collect();
    cofactor_det(&m)
}

/// `P_n`: the Hankel determinant with its last row replaced by `1, x, ..., x^n`,
/// expanded along that row.
pub fn p_oracle(s: &[Rational], n: usize) -> Polynomial {
    let coeffs = (0..=n)
        .map(|k| {
            let minor: Vec<Vec<Rational>> = (0..n)
                .map(|i| {
                    (0..=n)
                        .filter(|&j| j != k)
                        .map(|j| s[i + j].clone())
                        .collect()
                })
                .collect();
            let v = cofactor_det(&minor);
            if (n + k).is_multiple_of(2) {
                v
            } else {
                -v
            }
        })
        .collect();
    Polynomial::new(coeffs)
}

/// `Q_n(x) = L_t[(P_n(x) - P_n(t)) / (x - t)]`.
pub fn q_oracle(s: &[Rational], n: usize) -> Polynomial {
    let p = p_oracle(s, n);
    let mut coeffs = vec![Rational::new(); n.max(1)];
    // (x^k - t^k)/(x - t) = Σ_{j<k} x^j t^{k-1-j}
    for k in 1..=n {
        for (j, c) in coeffs.iter_mut().enumerate().take(k) {
            *c += p.coeff(k) * &s[k - 1 - j];
        }
    }
    Polynomial::new(coeffs)
}

pub fn rank_oracle(m: &[Vec<Rational>]) -> usize {
    let mut a: Vec<Vec<Rational>> = m.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(rank, p);
        let pivot = a[rank][c].clone();
        for x in a[rank].iter_mut() {
            *x /= &pivot;
        }
        for i in 0..rows {
            if i != rank && a[i][c] != 0 {
                let f = a[i][c].clone();
                for j in 0..cols {
                    let t = Rational::from(&f * &a[rank][j]);
                    a[i][j] -= t;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// `Σ_k w_k x_k^n` for `n < len`.
pub fn measure_moments(atoms: &[(Rational, Rational)], len: usize) -> Vec<Rational> {
    (0..len)
        .map(|n| {
            atoms
                .iter()
                .map(|(x, w)| {
                    let mut p = q(1, 1);
                    for _ in 0..n {
                        p *= x;
                    }
                    p * w
                })
                .sum()
        })
        .collect()
}

/// `r` distinct atoms in `[-5, 5]` with positive weights, sorted by location.
pub fn random_measure(rng: &mut ChaCha8Rng, r: usize) -> Vec<(Rational, Rational)> {
    let mut atoms: Vec<(Rational, Rational)> = Vec::with_capacity(r);
    while atoms.len() < r {
        let x = q(rng.gen_range(-50..=50), rng.gen_range(1..=10));
        if atoms.iter().any(|(y, _)| *y == x) {
            continue;
        }
        atoms.push((x, positive_rational(rng)));
    }
    atoms.sort_by(|a, b| a.0.cmp(&b.0));
    atoms
}

/// Extends `seed` by `s_{m+r} = Σ_k d_k s_{m+k}`.
pub fn extend_recurrence(seed: &[Rational], d: &[Rational], len: usize) -> Vec<Rational> {
    let r = d.len();
    let mut s = seed.to_vec();
    while s.len() < len {
        let m = s.len() - r;
        let next: Rational = (0..r).map(|k| Rational::from(&d[k] * &s[m + k])).sum();
        s.push(next);
    }
    s.truncate(len);
    s
}

/// `(-1)^e`.
pub fn sign(e: usize) -> i32 {
    if e.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

pub mod strategies {
    use hankel::Rational;
    use proptest::prelude::*;

    pub fn rational() -> impl Strategy<Value = Rational> {
        (-10i64..=10, 1i64..=10).prop_map(|(p, q)| Rational::from((p, q)))
    }

    pub fn nonzero() -> impl Strategy<Value = Rational> {
        rational().prop_filter("nonzero", |x| *x != 0)
    }

    pub fn terms(len: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<Rational>> {
        prop::collection::vec(rational(), len)
    }

    /// Mostly zeros, so that singular leading blocks are common.
    pub fn sparse_terms(
        len: std::ops::RangeInclusive<usize>,
    ) -> impl Strategy<Value = Vec<Rational>> {
        prop::collection::vec(
            prop_oneof![3 => Just(Rational::new()), 1 => rational()],
            len,
        )
    }
}
