use std::ops::{Index, IndexMut};

use crate::scalar::{Scalar, C64};

/// Column-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

pub type CMatrix = Matrix<C64>;

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for j in 0..cols {
            for i in 0..rows {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Builds from row-major nested data.
    pub fn from_rows(rows: &[Vec<S>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        Self::from_fn(r, c, |i, j| rows[i][j])
    }

    pub fn from_diag(d: &[S]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, &x) in d.iter().enumerate() {
            m[(i, i)] = x;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[S] {
        &self.data
    }

    pub fn col(&self, j: usize) -> &[S] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn col_mut(&mut self, j: usize) -> &mut [S] {
        let r = self.rows;
        &mut self.data[j * r..(j + 1) * r]
    }

    /// Two distinct columns, mutably.
    pub fn col_pair_mut(&mut self, a: usize, b: usize) -> (&mut [S], &mut [S]) {
        assert!(a < b);
        let r = self.rows;
        let (lo, hi) = self.data.split_at_mut(b * r);
        (&mut lo[a * r..(a + 1) * r], &mut hi[..r])
    }

    pub fn diag(&self) -> Vec<S> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matmul");
        let mut out = Self::zeros(self.rows, other.cols);
        for j in 0..other.cols {
            let oc = other.col(j);
            let dst = &mut out.data[j * self.rows..(j + 1) * self.rows];
            for (k, &b) in oc.iter().enumerate() {
                if b == S::zero() {
                    continue;
                }
                for (d, &a) in dst.iter_mut().zip(self.col(k)) {
                    *d += a * b;
                }
            }
        }
        out
    }

    pub fn matvec(&self, x: &[S]) -> Vec<S> {
        assert_eq!(self.cols, x.len());
        let mut y = vec![S::zero(); self.rows];
        for (k, &b) in x.iter().enumerate() {
            if b == S::zero() {
                continue;
            }
            for (d, &a) in y.iter_mut().zip(self.col(k)) {
                *d += a * b;
            }
        }
        y
    }

    /// Copy of the block with rows `r0..r1` and columns `c0..c1`.
    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        Self::from_fn(r1 - r0, c1 - c0, |i, j| self[(r0 + i, c0 + j)])
    }

    /// Leading principal `n x n` block.
    pub fn leading(&self, n: usize) -> Self {
        self.block(0, n, 0, n)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| a + b).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| a - b).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scaled(&self, s: S) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| a * s).collect() }
    }

    /// `self - z I` on the leading square part.
    pub fn shifted(&self, z: S) -> Self {
        let mut m = self.clone();
        for i in 0..self.rows.min(self.cols) {
            m[(i, i)] -= z;
        }
        m
    }

    pub fn norm_fro(&self) -> f64 {
        self.data.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, a| m.max(a.abs()))
    }

    /// Max absolute column sum.
    pub fn norm_1(&self) -> f64 {
        (0..self.cols).map(|j| self.col(j).iter().map(|a| a.abs()).sum::<f64>()).fold(0.0, f64::max)
    }

    /// Max absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        let mut sums = vec![0.0; self.rows];
        for j in 0..self.cols {
            for (s, a) in sums.iter_mut().zip(self.col(j)) {
                *s += a.abs();
            }
        }
        sums.into_iter().fold(0.0, f64::max)
    }

    pub fn to_c64(&self) -> CMatrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a.to_c64()).collect() }
    }

    /// Shrinks to the leading `r x c` block in place.
    pub fn truncate(&mut self, r: usize, c: usize) {
        assert!(r <= self.rows && c <= self.cols);
        if r == self.rows {
            self.data.truncate(r * c);
        } else {
            let old = self.rows;
            for j in 0..c {
                for i in 0..r {
                    self.data[j * r + i] = self.data[j * old + i];
                }
            }
            self.data.truncate(r * c);
        }
        self.rows = r;
        self.cols = c;
    }
}

impl CMatrix {
    pub fn is_real(&self) -> bool {
        self.data.iter().all(|z| z.im == 0.0)
    }

    pub fn re_part(&self) -> Matrix<f64> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z.re).collect() }
    }
}

impl<S> Index<(usize, usize)> for Matrix<S> {
    type Output = S;
    #[inline(always)]
    fn index(&self, (i, j): (usize, usize)) -> &S {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[j * self.rows + i]
    }
}

impl<S> IndexMut<(usize, usize)> for Matrix<S> {
    #[inline(always)]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[j * self.rows + i]
    }
}

pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    // conjugate-linear in the first argument
    let mut s = S::zero();
    for (&x, &y) in a.iter().zip(b) {
        s += x.conj() * y;
    }
    s
}

pub fn norm2<S: Scalar>(a: &[S]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c64;

    #[test]
    fn matmul_small() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]);
        let b = Matrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]);
        let c = a.matmul(&b);
        assert_eq!(c, Matrix::from_rows(&[vec![2.0, 1.0], vec![4.0, 3.0]]));
    }

    #[test]
    fn truncate_keeps_leading_block() {
        let mut a = Matrix::from_fn(4, 4, |i, j| (10 * i + j) as f64);
        a.truncate(2, 3);
        assert_eq!(a, Matrix::from_fn(2, 3, |i, j| (10 * i + j) as f64));
    }

    #[test]
    fn adjoint_conjugates() {
        let a = CMatrix::from_rows(&[vec![c64(1.0, 2.0), c64(0.0, 1.0)]]);
        let b = a.adjoint();
        assert_eq!(b[(0, 0)], c64(1.0, -2.0));
        assert_eq!(b[(1, 0)], c64(0.0, -1.0));
    }
}
