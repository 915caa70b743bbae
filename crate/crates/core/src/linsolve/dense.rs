use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::math::abs;

/// Dense column-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_col_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, found: data.len() });
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for j in 0..cols {
            for i in 0..rows {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
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

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub fn col(&self, j: usize) -> &[f64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn col_mut(&mut self, j: usize) -> &mut [f64] {
        &mut self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// `y = A x`.
    pub fn matvec_into(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.cols);
        assert_eq!(y.len(), self.rows);
        y.fill(0.0);
        for (j, &xj) in x.iter().enumerate() {
            if xj == 0.0 {
                continue;
            }
            for (yi, &a) in y.iter_mut().zip(self.col(j)) {
                *yi += a * xj;
            }
        }
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.rows];
        self.matvec_into(x, &mut y);
        y
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let mut c = Matrix::zeros(self.rows, other.cols);
        for j in 0..other.cols {
            let cj = &mut c.data[j * self.rows..(j + 1) * self.rows];
            for k in 0..self.cols {
                let b = other[(k, j)];
                if b == 0.0 {
                    continue;
                }
                for (ci, &a) in cj.iter_mut().zip(&self.data[k * self.rows..(k + 1) * self.rows]) {
                    *ci += a * b;
                }
            }
        }
        Ok(c)
    }

    /// `A Bᵀ`.
    pub fn matmul_transb(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.cols });
        }
        let mut c = Matrix::zeros(self.rows, other.rows);
        for k in 0..self.cols {
            let ak = &self.data[k * self.rows..(k + 1) * self.rows];
            for j in 0..other.rows {
                let b = other[(j, k)];
                if b == 0.0 {
                    continue;
                }
                let cj = &mut c.data[j * self.rows..(j + 1) * self.rows];
                for (ci, &a) in cj.iter_mut().zip(ak) {
                    *ci += a * b;
                }
            }
        }
        Ok(c)
    }

    /// Maximum absolute row sum.
    pub fn inf_norm(&self) -> f64 {
        let mut sums = vec![0.0; self.rows];
        for j in 0..self.cols {
            for (s, &a) in sums.iter_mut().zip(self.col(j)) {
                *s += abs(a);
            }
        }
        sums.into_iter().fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        crate::math::norm2(&self.data)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, &a| f64::max(m, abs(a)))
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i + j * self.rows]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i + j * self.rows]
    }
}

/// LU factorization with partial (row) pivoting, `P A = L U`.
#[derive(Debug, Clone)]
pub struct LuFactor {
    lu: Matrix,
    perm: Vec<usize>,
}

impl LuFactor {
    pub fn new(a: &Matrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::DimensionMismatch { expected: a.rows(), found: a.cols() });
        }
        let n = a.rows();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let tiny = f64::EPSILON * a.max_abs() * n as f64;
        for k in 0..n {
            let col = lu.col(k);
            let (p, pmax) = (k..n)
                .map(|i| (i, abs(col[i])))
                .fold((k, -1.0), |best, c| if c.1 > best.1 { c } else { best });
            if !(pmax > tiny) {
                return Err(Error::Singular { column: k });
            }
            if p != k {
                perm.swap(p, k);
                for j in 0..n {
                    lu.data.swap(p + j * n, k + j * n);
                }
            }
            let pivot = lu[(k, k)];
            for v in &mut lu.data[k * n + k + 1..(k + 1) * n] {
                *v /= pivot;
            }
            let (left, right) = lu.data.split_at_mut((k + 1) * n);
            let lk = &left[k * n + k + 1..(k + 1) * n];
            for j in k + 1..n {
                let cj = &mut right[(j - k - 1) * n..(j - k) * n];
                let ukj = cj[k];
                if ukj == 0.0 {
                    continue;
                }
                for (c, &l) in cj[k + 1..].iter_mut().zip(lk) {
                    *c -= l * ukj;
                }
            }
        }
        Ok(LuFactor { lu, perm })
    }

    pub fn order(&self) -> usize {
        self.lu.rows()
    }

    pub fn solve_in_place(&self, b: &mut [f64]) {
        let n = self.order();
        assert_eq!(b.len(), n);
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for k in 0..n {
            let xk = x[k];
            if xk != 0.0 {
                for (xi, &l) in x[k + 1..].iter_mut().zip(&self.lu.col(k)[k + 1..]) {
                    *xi -= l * xk;
                }
            }
        }
        for k in (0..n).rev() {
            x[k] /= self.lu[(k, k)];
            let xk = x[k];
            if xk != 0.0 {
                for (xi, &u) in x[..k].iter_mut().zip(&self.lu.col(k)[..k]) {
                    *xi -= u * xk;
                }
            }
        }
        b.copy_from_slice(&x);
    }

    pub fn inverse(&self) -> Matrix {
        let n = self.order();
        let mut inv = Matrix::identity(n);
        for j in 0..n {
            self.solve_in_place(inv.col_mut(j));
        }
        inv
    }
}

#[cfg(feature = "dense-faer")]
mod backend {
    use super::*;
    use faer::linalg::solvers::{DenseSolveCore, Solve};

    /// Below this order the in-crate LU is as fast and avoids the copy.
    pub(super) const THRESHOLD: usize = 96;

    fn to_faer(a: &Matrix) -> faer::Mat<f64> {
        faer::MatRef::from_column_major_slice(a.data(), a.rows(), a.cols()).to_owned()
    }

    fn check_finite(v: &[f64]) -> Result<()> {
        match v.iter().position(|x| !x.is_finite()) {
            Some(i) => Err(Error::Singular { column: i }),
            None => Ok(()),
        }
    }

    pub(super) fn solve(a: &Matrix, b: &[f64]) -> Result<Vec<f64>> {
        let lu = to_faer(a).partial_piv_lu();
        let rhs = faer::MatRef::from_column_major_slice(b, b.len(), 1);
        let x = lu.solve(rhs);
        let x: Vec<f64> = (0..b.len()).map(|i| x[(i, 0)]).collect();
        check_finite(&x)?;
        Ok(x)
    }

    pub(super) fn inverse(a: &Matrix) -> Result<Matrix> {
        let n = a.rows();
        let inv = to_faer(a).partial_piv_lu().inverse();
        let out = Matrix::from_fn(n, n, |i, j| inv[(i, j)]);
        check_finite(out.data())?;
        Ok(out)
    }
}

/// Solves `A x = b` by Gaussian elimination with partial pivoting.
pub fn lu_solve(a: &Matrix, b: &[f64]) -> Result<Vec<f64>> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch { expected: a.rows(), found: a.cols() });
    }
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch { expected: a.rows(), found: b.len() });
    }
    #[cfg(feature = "dense-faer")]
    if a.rows() > backend::THRESHOLD {
        return backend::solve(a, b);
    }
    let lu = LuFactor::new(a)?;
    let mut x = b.to_vec();
    lu.solve_in_place(&mut x);
    Ok(x)
}

pub fn inverse(a: &Matrix) -> Result<Matrix> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch { expected: a.rows(), found: a.cols() });
    }
    #[cfg(feature = "dense-faer")]
    if a.rows() > backend::THRESHOLD {
        return backend::inverse(a);
    }
    Ok(LuFactor::new(a)?.inverse())
}
