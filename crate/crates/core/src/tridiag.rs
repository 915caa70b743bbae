//! Symmetric tridiagonal eigensolver returning eigenvalues and the first
//! component of each normalized eigenvector.
//!
//! Implicit QL sweeps with a Wilkinson shift. Rotations are applied to the
//! first row of the eigenvector matrix only, so the cost stays `O(n²)`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{abs, copysign, hypot};

/// Sweeps allowed per eigenvalue before giving up.
pub const MAX_SWEEPS: usize = 30;

#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiag {
    diag: Vec<f64>,
    offdiag: Vec<f64>,
}

impl SymTridiag {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::Parameter("tridiagonal matrix must be non-empty".into()));
        }
        if offdiag.len() + 1 != diag.len() {
            return Err(Error::DimensionMismatch { expected: diag.len() - 1, found: offdiag.len() });
        }
        Ok(SymTridiag { diag, offdiag })
    }

    pub fn order(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    pub fn trace(&self) -> f64 {
        self.diag.iter().sum()
    }

    /// Leading `k × k` principal submatrix.
    pub fn leading(&self, k: usize) -> Result<SymTridiag> {
        if k == 0 || k > self.order() {
            return Err(Error::Parameter(alloc::format!("leading block of order {k}")));
        }
        SymTridiag::new(self.diag[..k].to_vec(), self.offdiag[..k - 1].to_vec())
    }
}

/// Ascending eigenvalues with the first eigenvector components permuted alongside.
#[derive(Debug, Clone, PartialEq)]
pub struct EigFirstComponents {
    pub values: Vec<f64>,
    pub firstcomp: Vec<f64>,
}

pub fn eig_tridiag(t: &SymTridiag) -> Result<EigFirstComponents> {
    let n = t.order();
    let mut d = t.diag.clone();
    let mut e = t.offdiag.clone();
    e.push(0.0);
    let mut z = vec![0.0; n];
    z[0] = 1.0;

    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = abs(d[m]) + abs(d[m + 1]);
                if abs(e[m]) <= f64::EPSILON * dd || abs(e[m]) < f64::MIN_POSITIVE {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            if sweeps == MAX_SWEEPS {
                return Err(Error::EigenNoConvergence { index: l, iterations: sweeps });
            }
            sweeps += 1;

            // Wilkinson shift from the leading 2×2 block of the active window.
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + copysign(r, g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = hypot(f, g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                let zf = z[i + 1];
                z[i + 1] = s * z[i] + c * zf;
                z[i] = c * z[i] - s * zf;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].total_cmp(&d[j]));
    Ok(EigFirstComponents {
        values: order.iter().map(|&i| d[i]).collect(),
        firstcomp: order.iter().map(|&i| z[i]).collect(),
    })
}
