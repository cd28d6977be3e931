//! Exact linear algebra: Gaussian elimination over the scalar field and
//! fraction-free rank over the integers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::scalar::Scalar;

/// Row-reduces `m` in place and returns the pivot columns.
pub fn row_reduce(m: &mut [Vec<Scalar>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv().expect("nonzero pivot");
        for v in m[r].iter_mut() {
            *v = v.mul(&inv);
        }
        let pivot = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let factor = row[c].clone();
                for (v, p) in row[c..].iter_mut().zip(&pivot[c..]) {
                    *v = v.sub(&factor.mul(p));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &[Vec<Scalar>]) -> usize {
    let mut work = m.to_vec();
    row_reduce(&mut work).len()
}

/// One solution of `a x = b`, free variables set to zero.
pub fn solve(a: &[Vec<Scalar>], b: &[Scalar]) -> Option<Vec<Scalar>> {
    let cols = a.first().map_or(0, Vec::len);
    let mut aug: Vec<Vec<Scalar>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = row_reduce(&mut aug);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![Scalar::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[r][cols].clone();
    }
    Some(x)
}

/// Inverse of a square matrix, `None` when singular.
pub fn inverse(m: &[Vec<Scalar>]) -> Option<Vec<Vec<Scalar>>> {
    let n = m.len();
    let mut aug: Vec<Vec<Scalar>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }));
            r
        })
        .collect();
    let pivots = row_reduce(&mut aug);
    if !pivots.iter().take(n).copied().eq(0..n) {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Rank of a rational matrix by Bareiss elimination on cleared
/// denominators.
pub fn rational_rank(m: &[Vec<BigRational>]) -> usize {
    let mut ints: Vec<Vec<BigInt>> = m
        .iter()
        .map(|row| {
            let lcm = row
                .iter()
                .fold(BigInt::one(), |acc, q| num_integer::lcm(acc, q.denom().clone()));
            row.iter()
                .map(|q| (q * BigRational::from_integer(lcm.clone())).to_integer())
                .collect()
        })
        .collect();
    integer_rank(&mut ints)
}

pub fn integer_rank(m: &mut [Vec<BigInt>]) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = &m[r][c] * &m[i][j] - &m[i][c] * &m[r][j];
                m[i][j] = v / &prev;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn bareiss_matches_field_rank() {
        let m = vec![
            vec![q(2), q(4), q(6)],
            vec![q(1), q(2), q(3)],
            vec![q(0), q(1), q(5)],
        ];
        assert_eq!(rational_rank(&m), 2);
        let s: Vec<Vec<Scalar>> = m
            .iter()
            .map(|r| r.iter().cloned().map(Scalar::from_rational).collect())
            .collect();
        assert_eq!(rank(&s), 2);
    }

    #[test]
    fn solve_with_parameter() {
        let t = Scalar::param(0);
        let one = Scalar::one();
        // [t 1; 1 1] x = [1; 0]
        let a = vec![vec![t.clone(), one.clone()], vec![one.clone(), one.clone()]];
        let x = solve(&a, &[one.clone(), Scalar::zero()]).unwrap();
        assert_eq!(x[0].mul(&t).add(&x[1]), one);
        assert!(x[0].add(&x[1]).is_zero());
        let singular = vec![vec![one.clone(), one.clone()], vec![one.clone(), one.clone()]];
        assert!(solve(&singular, &[one.clone(), Scalar::zero()]).is_none());
    }
}
