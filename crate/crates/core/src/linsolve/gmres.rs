//! Full (unrestarted) GMRES with modified Gram–Schmidt Arnoldi and Givens
//! rotations on the Hessenberg least-squares problem.

use alloc::vec;
use alloc::vec::Vec;

use super::operator::LinearOperator;
use crate::error::{Error, Result};
use crate::math::{abs, dot, hypot, norm2};

pub const DEFAULT_TOL: f64 = 1e-14;

/// Orthogonality loss of a new Arnoldi vector that triggers a second pass.
const REORTH_THRESHOLD: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GmresOptions {
    /// Stop once `‖b − A x‖ / ‖b‖ ≤ tol`.
    pub tol: f64,
    /// Defaults to the system dimension.
    pub maxiter: Option<usize>,
    /// Recompute `‖b − A x‖ / ‖b‖` with one extra matvec at the end.
    pub true_residual: bool,
}

impl Default for GmresOptions {
    fn default() -> Self {
        GmresOptions { tol: DEFAULT_TOL, maxiter: None, true_residual: false }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct KrylovStats {
    pub iterations: usize,
    /// Relative residual norms from the least-squares recurrence; entry 0 is `1`.
    pub residuals: Vec<f64>,
    pub matvecs: usize,
    pub flops: u64,
    pub true_residual: Option<f64>,
}

impl KrylovStats {
    pub fn final_residual(&self) -> f64 {
        self.residuals.last().copied().unwrap_or(0.0)
    }
}

#[derive(Debug, Clone)]
pub struct GmresOutput {
    pub x: Vec<f64>,
    pub stats: KrylovStats,
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// Solves `A x = b` from `x0 = 0`.
pub fn gmres<O: LinearOperator + ?Sized>(op: &O, b: &[f64], opts: GmresOptions) -> Result<GmresOutput> {
    let n = op.dim();
    if b.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: b.len() });
    }
    if !(opts.tol > 0.0) {
        return Err(Error::Parameter(alloc::format!("GMRES tolerance must be positive, got {}", opts.tol)));
    }
    let maxiter = opts.maxiter.unwrap_or(n).min(n).max(1);
    let mut stats = KrylovStats { residuals: vec![1.0], ..KrylovStats::default() };

    let beta = norm2(b);
    if beta == 0.0 {
        stats.residuals = vec![0.0];
        stats.true_residual = opts.true_residual.then_some(0.0);
        return Ok(GmresOutput { x: vec![0.0; n], stats });
    }

    let mut basis: Vec<Vec<f64>> = vec![b.iter().map(|v| v / beta).collect()];
    // column k of the Hessenberg matrix, already rotated
    let mut h_cols: Vec<Vec<f64>> = Vec::new();
    let (mut cs, mut sn) = (Vec::<f64>::new(), Vec::<f64>::new());
    let mut g = vec![beta];
    let mut w = vec![0.0; n];
    let mut converged = false;

    for k in 0..maxiter {
        stats.flops += op.apply(&basis[k], &mut w);
        stats.matvecs += 1;
        let mut h = vec![0.0; k + 2];
        for (i, v) in basis.iter().enumerate() {
            let c = dot(v, &w);
            h[i] = c;
            axpy(-c, v, &mut w);
        }
        let mut wnorm = norm2(&w);
        if wnorm > 0.0 {
            let loss = basis.iter().map(|v| abs(dot(v, &w))).fold(0.0, f64::max) / wnorm;
            if loss > REORTH_THRESHOLD {
                for (i, v) in basis.iter().enumerate() {
                    let c = dot(v, &w);
                    h[i] += c;
                    axpy(-c, v, &mut w);
                }
                wnorm = norm2(&w);
            }
        }
        h[k + 1] = wnorm;

        for i in 0..k {
            let t = cs[i] * h[i] + sn[i] * h[i + 1];
            h[i + 1] = -sn[i] * h[i] + cs[i] * h[i + 1];
            h[i] = t;
        }
        let r = hypot(h[k], h[k + 1]);
        let (c, s) = if r == 0.0 { (1.0, 0.0) } else { (h[k] / r, h[k + 1] / r) };
        h[k] = r;
        h[k + 1] = 0.0;
        cs.push(c);
        sn.push(s);
        g.push(-s * g[k]);
        g[k] *= c;
        h.truncate(k + 1);
        h_cols.push(h);

        let rel = abs(g[k + 1]) / beta;
        stats.residuals.push(rel);
        stats.iterations = k + 1;
        if rel <= opts.tol {
            converged = true;
            break;
        }
        // exact breakdown with a nonzero residual cannot happen for nonsingular A
        if wnorm == 0.0 {
            break;
        }
        basis.push(w.iter().map(|v| v / wnorm).collect());
    }

    let m = stats.iterations;
    let mut y = vec![0.0; m];
    for i in (0..m).rev() {
        let mut s = g[i];
        for j in i + 1..m {
            s -= h_cols[j][i] * y[j];
        }
        y[i] = s / h_cols[i][i];
    }
    let mut x = vec![0.0; n];
    for (yi, v) in y.iter().zip(&basis) {
        axpy(*yi, v, &mut x);
    }

    if opts.true_residual {
        let mut ax = vec![0.0; n];
        stats.flops += op.apply(&x, &mut ax);
        stats.matvecs += 1;
        let res: Vec<f64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
        stats.true_residual = Some(norm2(&res) / beta);
    }

    if !converged {
        return Err(Error::GmresNoConvergence {
            iterations: stats.iterations,
            residual: stats.final_residual(),
            tol: opts.tol,
            history: stats.residuals,
        });
    }
    Ok(GmresOutput { x, stats })
}
