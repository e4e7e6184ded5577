//! Dense complex matrices sized for few-qubit work.
//!
//! Everything in this crate operates on matrices whose side is a product of
//! small subsystem dimensions (typically 4..=16), so a row-major `Vec` of
//! `Complex64` with straightforward O(n^3) kernels is both fast enough and
//! easy to audit.

use num_complex::Complex64;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        CMatrix { rows, cols, data }
    }

    /// Builds a matrix from nested rows; every row must have the same length.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        CMatrix {
            rows: r,
            cols: c,
            data: rows.iter().flatten().copied().collect(),
        }
    }

    pub fn diag(entries: &[Complex64]) -> Self {
        let n = entries.len();
        let mut m = CMatrix::zeros(n, n);
        for (i, &e) in entries.iter().enumerate() {
            m[(i, i)] = e;
        }
        m
    }

    /// Rank-one projector `v v^dag` (the vector need not be normalized).
    pub fn outer(v: &[Complex64], w: &[Complex64]) -> Self {
        CMatrix::from_fn(v.len(), w.len(), |i, j| v[i] * w[j].conj())
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

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn trace(&self) -> Complex64 {
        debug_assert!(self.is_square());
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        debug_assert!(self.is_square());
        (0..self.rows).map(|i| self[(i, i)]).collect()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entry of `|self - other|`; both shapes must agree.
    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entry of `|A - A^dag|`; zero for exactly Hermitian matrices.
    pub fn hermiticity_residual(&self) -> f64 {
        debug_assert!(self.is_square());
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                let d = (self[(i, j)] - self[(j, i)].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// `(A + A^dag) / 2`, the Hermitian part.
    pub fn hermitian_part(&self) -> Self {
        debug_assert!(self.is_square());
        CMatrix::from_fn(self.rows, self.cols, |i, j| {
            (self[(i, j)] + self[(j, i)].conj()) * 0.5
        })
    }

    /// Largest entry of `|U^dag U - I|`; zero for exactly unitary matrices.
    pub fn unitarity_residual(&self) -> f64 {
        let gram = self.adjoint().matmul(self);
        gram.max_abs_diff(&CMatrix::identity(self.cols))
    }

    pub fn matmul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    /// `self * v` for a column vector.
    pub fn matvec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    /// Kronecker product; rows and columns follow the usual block layout
    /// where the left factor indexes blocks.
    pub fn kron(&self, other: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for ia in 0..self.rows {
            for ja in 0..self.cols {
                let a = self[(ia, ja)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for ib in 0..other.rows {
                    for jb in 0..other.cols {
                        out[(ia * other.rows + ib, ja * other.cols + jb)] = a * other[(ib, jb)];
                    }
                }
            }
        }
        out
    }

    /// `U^dag A U` for square `A` and `U` of matching side.
    pub fn conjugate_by(&self, u: &CMatrix) -> CMatrix {
        u.adjoint().matmul(self).matmul(u)
    }
}

/// Kronecker product of a list of factors, left to right.
pub fn kron_all(factors: &[CMatrix]) -> CMatrix {
    assert!(!factors.is_empty());
    let mut acc = factors[0].clone();
    for f in &factors[1..] {
        acc = acc.kron(f);
    }
    acc
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;

    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;

    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;

    fn mul(self, rhs: &CMatrix) -> CMatrix {
        self.matmul(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn matmul_against_hand_product() {
        let a = CMatrix::from_rows(&[vec![c(1.0, 1.0), c(0.0, 2.0)], vec![c(3.0, 0.0), c(1.0, -1.0)]]);
        let b = CMatrix::from_rows(&[vec![c(0.0, 1.0), c(1.0, 0.0)], vec![c(2.0, 0.0), c(0.0, -1.0)]]);
        let p = a.matmul(&b);
        // (1+i)(i) + (2i)(2) = i - 1 + 4i = -1 + 5i
        assert_abs_diff_eq!(p[(0, 0)].re, -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(p[(0, 0)].im, 5.0, epsilon = 1e-14);
        // (1+i)(1) + (2i)(-i) = 1 + i + 2 = 3 + i
        assert_abs_diff_eq!(p[(0, 1)].re, 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(p[(0, 1)].im, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn kron_block_layout() {
        let a = CMatrix::from_rows(&[vec![c(1.0, 0.0), c(2.0, 0.0)], vec![c(0.0, 0.0), c(1.0, 0.0)]]);
        let b = CMatrix::from_rows(&[vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 0.0)]]);
        let k = a.kron(&b);
        assert_eq!(k.rows(), 4);
        // top-right block is 2 * b
        assert_abs_diff_eq!(k[(0, 3)].re, 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(k[(1, 2)].re, 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(k[(0, 2)].re, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn adjoint_and_hermiticity() {
        let m = CMatrix::from_rows(&[vec![c(1.0, 0.0), c(2.0, 3.0)], vec![c(2.0, -3.0), c(4.0, 0.0)]]);
        assert!(m.hermiticity_residual() < 1e-15);
        assert_eq!(m.adjoint(), m);

        let skew = CMatrix::from_rows(&[vec![c(1.0, 0.0), c(2.0, 3.0)], vec![c(2.0, 3.0), c(4.0, 0.0)]]);
        assert_abs_diff_eq!(skew.hermiticity_residual(), 6.0, epsilon = 1e-14);
        assert!(skew.hermitian_part().hermiticity_residual() < 1e-15);
    }

    #[test]
    fn identity_is_unitary() {
        assert!(CMatrix::identity(5).unitarity_residual() < 1e-15);
        let half = CMatrix::identity(3).scale_re(0.5);
        assert!(half.unitarity_residual() > 0.7);
    }
}
