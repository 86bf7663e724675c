//! Dense linear algebra over the Novikov field.
//!
//! Elimination always pivots on the entry of least valuation (ties go to
//! the lowest row index), which keeps truncation loss bounded.

use alloc::vec::Vec;

use crate::novikov::{NovikovError, NovikovSeries, Rational, Valuation};

pub type Matrix = Vec<Vec<NovikovSeries>>;

pub fn zeros(rows: usize, cols: usize) -> Matrix {
    (0..rows).map(|_| (0..cols).map(|_| NovikovSeries::zero()).collect()).collect()
}

pub fn identity(n: usize) -> Matrix {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = NovikovSeries::one();
    }
    m
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let m = b.first().map_or(0, Vec::len);
    let mut out = zeros(n, m);
    for i in 0..n {
        for (k, bk) in b.iter().enumerate() {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..m {
                if !bk[j].is_zero() {
                    out[i][j] = &out[i][j] + &(&a[i][k] * &bk[j]);
                }
            }
        }
    }
    out
}

/// Row index of the least-valuation nonzero entry of column `col` among `rows`.
fn pivot_row(m: &Matrix, col: usize, rows: core::ops::Range<usize>) -> Option<usize> {
    let mut best: Option<(usize, Valuation)> = None;
    for r in rows {
        let v = m[r][col].val();
        if v.is_infinite() {
            continue;
        }
        if best.as_ref().map_or(true, |(_, bv)| v < *bv) {
            best = Some((r, v));
        }
    }
    best.map(|(r, _)| r)
}

/// Determinant by Gaussian elimination with valuation pivoting.
pub fn determinant(m: &Matrix, working: &Rational) -> Result<NovikovSeries, NovikovError> {
    let n = m.len();
    let mut a = m.clone();
    let mut det = NovikovSeries::one();
    for c in 0..n {
        let Some(p) = pivot_row(&a, c, c..n) else {
            return Ok(NovikovSeries::zero());
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        let inv = a[c][c].invert_to(working)?;
        det = &det * &a[c][c];
        for r in c + 1..n {
            if a[r][c].is_zero() {
                continue;
            }
            let f = &a[r][c] * &inv;
            for j in c..n {
                let t = &f * &a[c][j];
                a[r][j] = &a[r][j] - &t;
            }
        }
    }
    Ok(det)
}

/// Solves `m·x = b` for square invertible `m`; `None` when singular.
pub fn solve(m: &Matrix, b: &[NovikovSeries], working: &Rational) -> Result<Option<Vec<NovikovSeries>>, NovikovError> {
    let n = m.len();
    let mut a = m.clone();
    let mut rhs: Vec<NovikovSeries> = b.to_vec();
    for c in 0..n {
        let Some(p) = pivot_row(&a, c, c..n) else {
            return Ok(None);
        };
        a.swap(p, c);
        rhs.swap(p, c);
        let inv = a[c][c].invert_to(working)?;
        for r in 0..n {
            if r == c || a[r][c].is_zero() {
                continue;
            }
            let f = &a[r][c] * &inv;
            for j in c..n {
                let t = &f * &a[c][j];
                a[r][j] = &a[r][j] - &t;
            }
            let t = &f * &rhs[c];
            rhs[r] = &rhs[r] - &t;
        }
    }
    let mut x = Vec::with_capacity(n);
    for c in 0..n {
        let inv = a[c][c].invert_to(working)?;
        x.push(&rhs[c] * &inv);
    }
    Ok(Some(x))
}

/// Rank over Λ; entries known to be zero only up to truncation count as zero.
pub fn rank(m: &Matrix, working: &Rational) -> Result<usize, NovikovError> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut a = m.clone();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = pivot_row(&a, c, r..rows) else {
            continue;
        };
        a.swap(p, r);
        let inv = a[r][c].invert_to(working)?;
        for i in r + 1..rows {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] * &inv;
            for j in c..cols {
                let t = &f * &a[r][j];
                a[i][j] = &a[i][j] - &t;
            }
        }
        r += 1;
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::novikov::int;

    fn s(t: &str) -> NovikovSeries {
        t.parse().unwrap()
    }

    #[test]
    fn determinant_of_diagonal_and_swapped() {
        let m = alloc::vec![
            alloc::vec![s("2*T^(1/2)"), s("0")],
            alloc::vec![s("0"), s("-2*T^(1/2)")],
        ];
        assert_eq!(determinant(&m, &int(16)).unwrap(), s("-4*T^(1)"));
        let p = alloc::vec![alloc::vec![s("0"), s("1")], alloc::vec![s("1"), s("0")]];
        assert_eq!(determinant(&p, &int(16)).unwrap(), s("-1"));
    }

    #[test]
    fn solve_and_multiply_back() {
        let m = alloc::vec![
            alloc::vec![s("1 + T^(1)"), s("T^(1)")],
            alloc::vec![s("2"), s("3")],
        ];
        let b = alloc::vec![s("1"), s("T^(2)")];
        let x = solve(&m, &b, &int(12)).unwrap().unwrap();
        for i in 0..2 {
            let lhs = &(&m[i][0] * &x[0]) + &(&m[i][1] * &x[1]);
            assert!(lhs.agrees_with(&b[i]), "{lhs} vs {}", b[i]);
        }
    }

    #[test]
    fn rank_detects_dependence() {
        let m = alloc::vec![
            alloc::vec![s("1"), s("T^(1)")],
            alloc::vec![s("T^(-1)"), s("1")],
        ];
        assert_eq!(rank(&m, &int(8)).unwrap(), 1);
        assert_eq!(rank(&identity(3), &int(8)).unwrap(), 3);
        assert!(solve(&m, &[s("1"), s("1")], &int(8)).unwrap().is_none());
    }
}
