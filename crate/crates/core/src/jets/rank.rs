//! Rank computations: fraction-free elimination over the integers and
//! relative singular-value thresholding in floating point.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::scalar::Rational;

/// Rank of a rational matrix given as columns, by Bareiss elimination after
/// clearing denominators column by column.
pub fn rank_exact(columns: &[Vec<Rational>]) -> usize {
    if columns.is_empty() {
        return 0;
    }
    let rows = columns[0].len();
    let cols = columns.len();
    // integer matrix a[row][col]
    let mut a: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); cols]; rows];
    for (j, col) in columns.iter().enumerate() {
        let lcm = col.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        for (i, q) in col.iter().enumerate() {
            a[i][j] = q.numer() * (&lcm / q.denom());
        }
    }
    bareiss_rank(a)
}

fn bareiss_rank(mut a: Vec<Vec<BigInt>>) -> usize {
    let rows = a.len();
    if rows == 0 {
        return 0;
    }
    let cols = a[0].len();
    let mut prev = BigInt::one();
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for r in rank + 1..rows {
            for k in c + 1..cols {
                let v = &a[rank][c] * &a[r][k] - &a[r][c] * &a[rank][k];
                a[r][k] = v / &prev;
            }
            a[r][c] = BigInt::zero();
        }
        prev = a[rank][c].clone();
        rank += 1;
    }
    rank
}

/// Singular values in decreasing order.
pub fn singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    s
}

/// Numerical rank with a relative threshold, plus the ratio between the last
/// accepted and the first rejected singular value (when one was rejected).
pub fn rank_float(m: &DMatrix<f64>, rank_tol: f64) -> (usize, Option<f64>) {
    let s = singular_values(m);
    let Some(&smax) = s.first() else {
        return (0, None);
    };
    if smax == 0.0 || !smax.is_finite() {
        return (0, None);
    }
    let rank = s.iter().take_while(|&&v| v > rank_tol * smax).count();
    let gap = if rank < s.len() && rank > 0 {
        let rejected = s[rank];
        Some(if rejected == 0.0 { f64::INFINITY } else { s[rank - 1] / rejected })
    } else {
        None
    };
    (rank, gap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn exact_rank_of_dependent_columns() {
        let c1 = vec![rat(1, 2), rat(1, 3), rat(0, 1)];
        let c2 = vec![rat(1, 1), rat(2, 3), rat(0, 1)];
        let c3 = vec![rat(0, 1), rat(0, 1), rat(5, 7)];
        assert_eq!(rank_exact(std::slice::from_ref(&c1)), 1);
        assert_eq!(rank_exact(&[c1.clone(), c2.clone()]), 1);
        assert_eq!(rank_exact(&[c1, c2, c3]), 2);
        assert_eq!(rank_exact(&[vec![rat(0, 1); 3]]), 0);
    }

    #[test]
    fn float_rank_with_gap() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 1e-12]);
        let (r, gap) = rank_float(&m, 1e-8);
        assert_eq!(r, 1);
        assert!(gap.unwrap() > 1e11);
        let (r, gap) = rank_float(&DMatrix::identity(3, 3), 1e-8);
        assert_eq!(r, 3);
        assert!(gap.is_none());
    }
}
