//! Exact Gaussian elimination over the Gaussian rationals.

use alloc::vec;
use alloc::vec::Vec;

use crate::charts::SuperFunction;
use crate::scalar::Gq;

pub type Matrix = Vec<Vec<Gq>>;

pub fn zeros(r: usize, c: usize) -> Matrix {
    vec![vec![Gq::zero(); c]; r]
}

pub fn identity(n: usize) -> Matrix {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Gq::one();
    }
    m
}

pub fn transpose(m: &Matrix) -> Matrix {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len()).map(|j| m.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| {
                    let mut s = Gq::zero();
                    for (k, x) in row.iter().enumerate() {
                        if !x.is_zero() && !b[k][j].is_zero() {
                            s += &(x * &b[k][j]);
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

/// Something that can ride along as a right-hand side during elimination.
pub trait Rhs: Clone {
    /// `self -= c * other`
    fn sub_scaled(&mut self, c: &Gq, other: &Self);
    fn scale_by(&mut self, c: &Gq);
    fn is_zero_rhs(&self) -> bool;
}

impl Rhs for Gq {
    fn sub_scaled(&mut self, c: &Gq, other: &Self) {
        *self -= &(c * other);
    }
    fn scale_by(&mut self, c: &Gq) {
        *self = &*self * c;
    }
    fn is_zero_rhs(&self) -> bool {
        self.is_zero()
    }
}

impl Rhs for SuperFunction {
    fn sub_scaled(&mut self, c: &Gq, other: &Self) {
        *self = &*self - &other.scale(c);
    }
    fn scale_by(&mut self, c: &Gq) {
        *self = self.scale(c);
    }
    fn is_zero_rhs(&self) -> bool {
        self.is_zero()
    }
}

impl Rhs for () {
    fn sub_scaled(&mut self, _: &Gq, _: &Self) {}
    fn scale_by(&mut self, _: &Gq) {}
    fn is_zero_rhs(&self) -> bool {
        true
    }
}

impl<T: Rhs> Rhs for Vec<T> {
    fn sub_scaled(&mut self, c: &Gq, other: &Self) {
        for (a, b) in self.iter_mut().zip(other) {
            a.sub_scaled(c, b);
        }
    }
    fn scale_by(&mut self, c: &Gq) {
        for a in self.iter_mut() {
            a.scale_by(c);
        }
    }
    fn is_zero_rhs(&self) -> bool {
        self.iter().all(|a| a.is_zero_rhs())
    }
}

/// Result of reducing `A x = b` to reduced row echelon form.
pub struct Reduced<T> {
    pub matrix: Matrix,
    pub rhs: Vec<T>,
    pub pivots: Vec<usize>,
    pub cols: usize,
}

impl<T: Rhs> Reduced<T> {
    /// Rows whose coefficient part vanished but whose right-hand side did not.
    pub fn inconsistent_rows(&self) -> Vec<usize> {
        (self.pivots.len()..self.matrix.len()).filter(|&i| !self.rhs[i].is_zero_rhs()).collect()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Particular solution with free variables set to zero.
    pub fn particular(&self, zero: T) -> Option<Vec<T>> {
        if !self.inconsistent_rows().is_empty() {
            return None;
        }
        let mut x = vec![zero; self.cols];
        for (r, &c) in self.pivots.iter().enumerate() {
            x[c] = self.rhs[r].clone();
        }
        Some(x)
    }

    /// Basis of the kernel of the coefficient matrix.
    pub fn kernel(&self) -> Vec<Vec<Gq>> {
        let mut out = Vec::new();
        let free: Vec<usize> = (0..self.cols).filter(|c| !self.pivots.contains(c)).collect();
        for f in free {
            let mut v = vec![Gq::zero(); self.cols];
            v[f] = Gq::one();
            for (r, &c) in self.pivots.iter().enumerate() {
                v[c] = -self.matrix[r][f].clone();
            }
            out.push(v);
        }
        out
    }
}

/// Row-reduces `a` with right-hand sides carried along.
pub fn reduce<T: Rhs>(mut a: Matrix, mut rhs: Vec<T>, cols: usize) -> Reduced<T> {
    let rows = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, pr);
        rhs.swap(r, pr);
        let inv = a[r][c].inv().unwrap();
        for x in a[r].iter_mut() {
            *x = &*x * &inv;
        }
        rhs[r].scale_by(&inv);
        let pivot_row = a[r].clone();
        let pivot_rhs = rhs[r].clone();
        for i in 0..rows {
            if i == r || a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone();
            for (x, y) in a[i].iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &(&f * y);
                }
            }
            rhs[i].sub_scaled(&f, &pivot_rhs);
        }
        pivots.push(c);
        r += 1;
    }
    Reduced { matrix: a, rhs, pivots, cols }
}

pub fn rank(a: &Matrix) -> usize {
    let cols = a.first().map_or(0, |r| r.len());
    reduce(a.clone(), vec![(); a.len()], cols).rank()
}

pub fn kernel(a: &Matrix, cols: usize) -> Vec<Vec<Gq>> {
    reduce(a.clone(), vec![(); a.len()], cols).kernel()
}

pub fn solve(a: &Matrix, b: &[Gq]) -> Option<Vec<Gq>> {
    let cols = a.first().map_or(0, |r| r.len());
    reduce(a.clone(), b.to_vec(), cols).particular(Gq::zero())
}

pub fn inverse(a: &Matrix) -> Option<Matrix> {
    let n = a.len();
    let red = reduce(a.clone(), identity(n), n);
    if red.rank() < n {
        return None;
    }
    Some(red.rhs)
}

/// Pivot columns of `a`, leftmost first.
pub fn pivot_columns(a: &Matrix) -> Vec<usize> {
    let cols = a.first().map_or(0, |r| r.len());
    reduce(a.clone(), vec![(); a.len()], cols).pivots
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&x| Gq::int(x)).collect()).collect()
    }

    #[test]
    fn rank_and_kernel() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        assert_eq!(rank(&a), 2);
        let k = kernel(&a, 3);
        assert_eq!(k.len(), 1);
        let prod = matmul(&a, &transpose(&k));
        assert!(prod.iter().all(|r| r.iter().all(|x| x.is_zero())));
    }

    #[test]
    fn inconsistent_system_detected() {
        let a = m(&[&[1, 1], &[2, 2]]);
        assert!(solve(&a, &[Gq::int(1), Gq::int(3)]).is_none());
        assert_eq!(solve(&a, &[Gq::int(1), Gq::int(2)]).unwrap(), vec![Gq::int(1), Gq::zero()]);
    }

    proptest! {
        #[test]
        fn inverse_is_two_sided(v in proptest::collection::vec(-5i64..6, 9)) {
            let a: Matrix = v.chunks(3).map(|r| r.iter().map(|&x| Gq::int(x)).collect()).collect();
            if let Some(inv) = inverse(&a) {
                prop_assert_eq!(matmul(&a, &inv), identity(3));
                prop_assert_eq!(matmul(&inv, &a), identity(3));
            } else {
                prop_assert!(rank(&a) < 3);
            }
        }
    }
}
