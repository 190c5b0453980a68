//! Fraction-free elimination over the integers.
//!
//! Rational matrices are first scaled row by row to integer matrices; the
//! Bareiss recurrence then keeps every intermediate entry an integer minor of
//! the scaled matrix, so all divisions are exact.

use rug::{Integer, Rational};

/// Integer matrix obtained from a rational one by multiplying each row by the
/// lcm of its denominators. `scale` is the product of those multipliers.
#[derive(Debug, Clone)]
pub struct IntegerMatrix {
    pub rows: Vec<Vec<Integer>>,
    pub scale: Integer,
}

pub fn clear_denominators(rows: &[Vec<Rational>]) -> IntegerMatrix {
    let mut scale = Integer::from(1);
    let rows = rows
        .iter()
        .map(|row| {
            let mut lcm = Integer::from(1);
            for x in row {
                lcm.lcm_mut(x.denom());
            }
            scale *= &lcm;
            row.iter()
                .map(|x| x.numer() * Integer::from(&lcm / x.denom()))
                .collect()
        })
        .collect();
    IntegerMatrix { rows, scale }
}

/// Row echelon form produced by fraction-free elimination with row pivoting.
///
/// Columns without a usable pivot are skipped, so `pivot_cols` lists the
/// pivot column of each leading row. After elimination the pivot of row `k`
/// equals, up to `sign`, the minor on rows `0..=k` (in swapped order) and
/// columns `pivot_cols[0..=k]`.
#[derive(Debug, Clone)]
pub struct Echelon {
    pub rows: Vec<Vec<Integer>>,
    pub pivot_cols: Vec<usize>,
    pub sign: i32,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivot_cols.len()
    }

    pub fn last_pivot(&self) -> Option<&Integer> {
        let k = self.pivot_cols.len().checked_sub(1)?;
        Some(&self.rows[k][self.pivot_cols[k]])
    }
}

pub fn echelon(mut rows: Vec<Vec<Integer>>) -> Echelon {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivot_cols = Vec::new();
    let mut sign = 1;
    let mut prev = Integer::from(1);
    let mut k = 0;
    for c in 0..ncols {
        if k == nrows {
            break;
        }
        let Some(p) = (k..nrows).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        if p != k {
            rows.swap(p, k);
            sign = -sign;
        }
        let (head, tail) = rows.split_at_mut(k + 1);
        let pivot_row = &head[k];
        let pivot = &pivot_row[c];
        for row in tail.iter_mut() {
            for j in c + 1..ncols {
                let mut v = Integer::from(pivot * &row[j]);
                v -= Integer::from(&row[c] * &pivot_row[j]);
                v.div_exact_mut(&prev);
                row[j] = v;
            }
            row[c] = Integer::new();
        }
        prev = pivot.clone();
        pivot_cols.push(c);
        k += 1;
    }
    Echelon {
        rows,
        pivot_cols,
        sign,
    }
}

/// Determinant of a square rational matrix. The empty matrix has determinant 1.
pub fn determinant(rows: &[Vec<Rational>]) -> Rational {
    let n = rows.len();
    if n == 0 {
        return Rational::from(1);
    }
    debug_assert!(rows.iter().all(|r| r.len() == n));
    let IntegerMatrix { rows, scale } = clear_denominators(rows);
    let e = echelon(rows);
    if e.rank() < n {
        return Rational::new();
    }
    let det = Integer::from(e.sign) * e.last_pivot().expect("full rank");
    Rational::from((det, scale))
}

/// Rank by fraction-free elimination with full pivoting.
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let IntegerMatrix { mut rows, .. } = clear_denominators(rows);
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    let mut prev = Integer::from(1);
    for k in 0..nrows.min(ncols) {
        let found = (k..nrows)
            .flat_map(|i| (k..ncols).map(move |j| (i, j)))
            .find(|&(i, j)| rows[i][j] != 0);
        let Some((pi, pj)) = found else {
            return k;
        };
        rows.swap(k, pi);
        for row in rows.iter_mut() {
            row.swap(k, pj);
        }
        let (head, tail) = rows.split_at_mut(k + 1);
        let pivot_row = &head[k];
        for row in tail.iter_mut() {
            for j in k + 1..ncols {
                let mut v = Integer::from(&pivot_row[k] * &row[j]);
                v -= Integer::from(&row[k] * &pivot_row[j]);
                v.div_exact_mut(&prev);
                row[j] = v;
            }
            row[k] = Integer::new();
        }
        prev = pivot_row[k].clone();
    }
    nrows.min(ncols)
}

/// Solves `a x = b` for square nonsingular `a`; `None` when `a` is singular.
pub fn solve(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.len();
    assert_eq!(b.len(), n, "right-hand side length mismatch");
    if n == 0 {
        return Some(Vec::new());
    }
    let augmented: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let e = echelon(clear_denominators(&augmented).rows);
    if e.pivot_cols.len() < n || e.pivot_cols[n - 1] != n - 1 {
        return None;
    }
    let mut x = vec![Rational::new(); n];
    for i in (0..n).rev() {
        let row = &e.rows[i];
        let mut acc = Rational::from(&row[n]);
        for j in i + 1..n {
            acc -= Rational::from(&row[j]) * &x[j];
        }
        x[i] = acc / Rational::from(&row[i]);
    }
    Some(x)
}

/// Signed maximal minors of an `n × (n+1)` matrix: entry `k` is
/// `(-1)^(n+k) det(a without column k)`, the cofactor row obtained by
/// appending one more row to `a` and expanding along it.
pub fn cofactor_row(a: &[Vec<Rational>]) -> Vec<Rational> {
    let n = a.len();
    if n == 0 {
        return vec![Rational::from(1)];
    }
    debug_assert!(a.iter().all(|r| r.len() == n + 1));
    let e = echelon(clear_denominators(a).rows);
    if e.rank() < n {
        return vec![Rational::new(); n + 1];
    }
    let free = (0..=n)
        .find(|c| !e.pivot_cols.contains(c))
        .expect("one column is free");
    let without = |row: &Vec<Rational>| -> Vec<Rational> {
        row.iter()
            .enumerate()
            .filter(|&(j, _)| j != free)
            .map(|(_, x)| x.clone())
            .collect()
    };
    let square: Vec<Vec<Rational>> = a.iter().map(without).collect();
    let rhs: Vec<Rational> = a.iter().map(|row| Rational::from(-&row[free])).collect();
    let v = solve(&square, &rhs).expect("pivot columns are independent");
    let mut c_free = determinant(&square);
    if (n + free) % 2 == 1 {
        c_free = -c_free;
    }
    let mut out = Vec::with_capacity(n + 1);
    let mut vi = v.into_iter();
    for k in 0..=n {
        if k == free {
            out.push(c_free.clone());
        } else {
            out.push(vi.next().expect("kernel entry") * &c_free);
        }
    }
    out
}
