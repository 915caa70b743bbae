use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::dense::Matrix;
use crate::error::{Error, Result};

/// A square linear map on vectors of length [`dim`](LinearOperator::dim).
pub trait LinearOperator {
    fn dim(&self) -> usize;

    /// `y = A x`; returns the number of floating-point operations spent.
    fn apply(&self, x: &[f64], y: &mut [f64]) -> u64;
}

impl LinearOperator for Matrix {
    fn dim(&self) -> usize {
        self.rows()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) -> u64 {
        self.matvec_into(x, y);
        2 * (self.rows() * self.cols()) as u64
    }
}

/// Row generator for kernel matrices too large to store: fills row `i`.
pub type RowFn = Arc<dyn Fn(usize, &mut [f64]) + Send + Sync>;

/// The kernel matrix `K_N` of a factored operator, stored or generated per row.
#[derive(Clone)]
pub enum KernelMatrix {
    Stored(Matrix),
    OnTheFly { dim: usize, row: RowFn },
}

impl KernelMatrix {
    pub fn dim(&self) -> usize {
        match self {
            KernelMatrix::Stored(m) => m.rows(),
            KernelMatrix::OnTheFly { dim, .. } => *dim,
        }
    }

    /// Dense copy; generates every row for the on-the-fly variant.
    pub fn to_matrix(&self) -> Matrix {
        match self {
            KernelMatrix::Stored(m) => m.clone(),
            KernelMatrix::OnTheFly { dim, row } => {
                let mut m = Matrix::zeros(*dim, *dim);
                let mut buf = vec![0.0; *dim];
                for i in 0..*dim {
                    row(i, &mut buf);
                    for (j, &v) in buf.iter().enumerate() {
                        m[(i, j)] = v;
                    }
                }
                m
            }
        }
    }
}

impl fmt::Debug for KernelMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KernelMatrix::Stored(m) => f.debug_tuple("Stored").field(&(m.rows(), m.cols())).finish(),
            KernelMatrix::OnTheFly { dim, .. } => f.debug_struct("OnTheFly").field("dim", dim).finish(),
        }
    }
}

#[derive(Debug, Clone)]
pub enum Realization {
    /// Assembled `F_N`.
    Dense(Matrix),
    /// `F_N q = q − u ∘ (K_N (d ∘ q))`.
    Factored { u: Vec<f64>, d: Vec<f64>, kernel: KernelMatrix },
    /// `F_N q = vec(Q − Φ¹ Q Φ²ᵀ)` with `Q = fold(q)`.
    Separable { phi1: Matrix, phi2: Matrix },
}

/// The Nyström system matrix `I − U K U⁻¹ Λ` over an `n1 × n2` grid.
#[derive(Debug, Clone)]
pub struct SystemOperator {
    n1: usize,
    n2: usize,
    realization: Realization,
}

impl SystemOperator {
    pub fn dense(n1: usize, n2: usize, f: Matrix) -> Result<Self> {
        let n = n1 * n2;
        if f.rows() != n || f.cols() != n {
            return Err(Error::DimensionMismatch { expected: n, found: f.rows().max(f.cols()) });
        }
        Ok(SystemOperator { n1, n2, realization: Realization::Dense(f) })
    }

    pub fn factored(n1: usize, n2: usize, u: Vec<f64>, d: Vec<f64>, kernel: KernelMatrix) -> Result<Self> {
        let n = n1 * n2;
        for len in [u.len(), d.len(), kernel.dim()] {
            if len != n {
                return Err(Error::DimensionMismatch { expected: n, found: len });
            }
        }
        Ok(SystemOperator { n1, n2, realization: Realization::Factored { u, d, kernel } })
    }

    pub fn separable(phi1: Matrix, phi2: Matrix) -> Result<Self> {
        if !phi1.is_square() {
            return Err(Error::DimensionMismatch { expected: phi1.rows(), found: phi1.cols() });
        }
        if !phi2.is_square() {
            return Err(Error::DimensionMismatch { expected: phi2.rows(), found: phi2.cols() });
        }
        Ok(SystemOperator { n1: phi1.rows(), n2: phi2.rows(), realization: Realization::Separable { phi1, phi2 } })
    }

    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn n2(&self) -> usize {
        self.n2
    }

    pub fn realization(&self) -> &Realization {
        &self.realization
    }

    pub fn is_separable(&self) -> bool {
        matches!(self.realization, Realization::Separable { .. })
    }

    /// Floating-point operations of one matvec.
    pub fn matvec_flops(&self) -> u64 {
        let (n1, n2) = (self.n1 as u64, self.n2 as u64);
        let n = n1 * n2;
        match self.realization {
            Realization::Dense(_) => 2 * n * n,
            Realization::Factored { .. } => 2 * n * n + 3 * n,
            Realization::Separable { .. } => 2 * n1 * n1 * n2 + 2 * n1 * n2 * n2 + n,
        }
    }

    /// Assembles `F_N` explicitly.
    pub fn to_dense(&self) -> Matrix {
        let n = self.n1 * self.n2;
        match &self.realization {
            Realization::Dense(f) => f.clone(),
            Realization::Factored { u, d, kernel } => {
                let mut f = kernel.to_matrix();
                for j in 0..n {
                    let col = f.col_mut(j);
                    for (i, v) in col.iter_mut().enumerate() {
                        *v = -u[i] * *v * d[j];
                    }
                    col[j] += 1.0;
                }
                f
            }
            Realization::Separable { phi1, phi2 } => {
                let n1 = self.n1;
                Matrix::from_fn(n, n, |r, c| {
                    let (i1, i2, j1, j2) = (r % n1, r / n1, c % n1, c / n1);
                    let delta = if r == c { 1.0 } else { 0.0 };
                    delta - phi1[(i1, j1)] * phi2[(i2, j2)]
                })
            }
        }
    }
}

impl LinearOperator for SystemOperator {
    fn dim(&self) -> usize {
        self.n1 * self.n2
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) -> u64 {
        let n = self.dim();
        assert_eq!(x.len(), n);
        assert_eq!(y.len(), n);
        match &self.realization {
            Realization::Dense(f) => {
                f.matvec_into(x, y);
            }
            Realization::Factored { u, d, kernel } => {
                let dq: Vec<f64> = d.iter().zip(x).map(|(a, b)| a * b).collect();
                match kernel {
                    KernelMatrix::Stored(k) => k.matvec_into(&dq, y),
                    KernelMatrix::OnTheFly { row, .. } => {
                        let mut buf = vec![0.0; n];
                        for (i, yi) in y.iter_mut().enumerate() {
                            row(i, &mut buf);
                            *yi = crate::math::dot(&buf, &dq);
                        }
                    }
                }
                for ((yi, &ui), &xi) in y.iter_mut().zip(u).zip(x) {
                    *yi = xi - ui * *yi;
                }
            }
            Realization::Separable { phi1, phi2 } => {
                let q = Matrix::from_col_major(self.n1, self.n2, x.to_vec()).expect("length checked");
                let t = phi1.matmul(&q).expect("square factors");
                let t = t.matmul_transb(phi2).expect("square factors");
                for ((yi, &xi), &ti) in y.iter_mut().zip(x).zip(t.data()) {
                    *yi = xi - ti;
                }
            }
        }
        self.matvec_flops()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pseudo(seed: &mut u64) -> f64 {
        *seed ^= *seed << 13;
        *seed ^= *seed >> 7;
        *seed ^= *seed << 17;
        (*seed % 20_000) as f64 / 10_000.0 - 1.0
    }

    #[test]
    fn separable_matches_kronecker() {
        let mut s = 0x9e37_79b9_u64;
        let phi1 = Matrix::from_fn(5, 5, |_, _| pseudo(&mut s) * 0.3);
        let phi2 = Matrix::from_fn(7, 7, |_, _| pseudo(&mut s) * 0.3);
        let op = SystemOperator::separable(phi1, phi2).unwrap();
        let dense = SystemOperator::dense(5, 7, op.to_dense()).unwrap();
        let x: Vec<f64> = (0..35).map(|_| pseudo(&mut s)).collect();
        let (mut y1, mut y2) = (vec![0.0; 35], vec![0.0; 35]);
        op.apply(&x, &mut y1);
        dense.apply(&x, &mut y2);
        for (a, b) in y1.iter().zip(&y2) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn factored_stored_and_generated_agree() {
        let mut s = 0x1234_5678_u64;
        let n = 12;
        let k = Matrix::from_fn(n, n, |_, _| pseudo(&mut s));
        let u: Vec<f64> = (0..n).map(|i| 1.0 + i as f64 / 10.0).collect();
        let d: Vec<f64> = (0..n).map(|i| 0.1 / (1.0 + i as f64)).collect();
        let kk = k.clone();
        let row: RowFn = Arc::new(move |i, out: &mut [f64]| {
            for (j, o) in out.iter_mut().enumerate() {
                *o = kk[(i, j)];
            }
        });
        let a = SystemOperator::factored(3, 4, u.clone(), d.clone(), KernelMatrix::Stored(k)).unwrap();
        let b = SystemOperator::factored(3, 4, u, d, KernelMatrix::OnTheFly { dim: n, row }).unwrap();
        let x: Vec<f64> = (0..n).map(|_| pseudo(&mut s)).collect();
        let (mut ya, mut yb, mut yd) = (vec![0.0; n], vec![0.0; n], vec![0.0; n]);
        a.apply(&x, &mut ya);
        b.apply(&x, &mut yb);
        a.to_dense().apply(&x, &mut yd);
        for i in 0..n {
            assert!((ya[i] - yb[i]).abs() < 1e-15);
            assert!((ya[i] - yd[i]).abs() < 1e-14);
        }
    }

    #[test]
    fn zero_vector_maps_to_zero() {
        let op = SystemOperator::separable(Matrix::identity(2), Matrix::identity(3)).unwrap();
        let mut y = vec![1.0; 6];
        op.apply(&[0.0; 6], &mut y);
        assert!(y.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn shape_validation() {
        assert!(SystemOperator::dense(2, 3, Matrix::identity(5)).is_err());
        assert!(SystemOperator::separable(Matrix::zeros(2, 3), Matrix::identity(2)).is_err());
    }
}
