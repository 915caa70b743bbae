//! Stein equation `Φ¹ A Φ²ᵀ − A + H = 0` by squared Smith iteration.
//!
//! With `M_0 = Φ¹`, `P_0 = Φ²`, `A_0 = H` the update
//! `A_{k+1} = A_k + M_k A_k P_kᵀ`, `M_{k+1} = M_k²`, `P_{k+1} = P_k²`
//! sums `2^k` terms of the Neumann series per step.

use alloc::vec::Vec;

use super::dense::Matrix;
use crate::error::{Error, Result};
use crate::math::{exp, ln, norm2, sqrt};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteinOptions {
    /// Stop once `‖Φ¹AΦ²ᵀ − A + H‖_F ≤ tol ‖H‖_F`.
    pub tol: f64,
    pub max_iter: usize,
    /// Power-iteration steps for the spectral-radius precheck.
    pub power_steps: usize,
}

impl Default for SteinOptions {
    fn default() -> Self {
        SteinOptions { tol: 1e-13, max_iter: 200, power_steps: 50 }
    }
}

/// Residual level accepted when the iteration stalls above `tol` in floating point.
const ACCEPT_STALLED: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct SteinOutput {
    pub a: Matrix,
    pub iterations: usize,
    pub residual: f64,
    pub rho_estimate: f64,
}

/// Power-iteration estimate of the spectral radius, as the geometric mean of
/// the growth factors over the second half of the run.
pub fn spectral_radius_estimate(m: &Matrix, steps: usize) -> f64 {
    let n = m.rows();
    if n == 0 {
        return 0.0;
    }
    let mut state = 0x853c_49e6_748f_ea9b_u64;
    let mut v: Vec<f64> = (0..n)
        .map(|_| {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            0.5 + (state % 1_000_003) as f64 / 1_000_003.0
        })
        .collect();
    let s = norm2(&v);
    v.iter_mut().for_each(|x| *x /= s);
    let steps = steps.max(2);
    let (mut logsum, mut counted) = (0.0, 0usize);
    for k in 0..steps {
        let w = m.matvec(&v);
        let g = norm2(&w);
        if g == 0.0 {
            return 0.0;
        }
        if k >= steps / 2 {
            logsum += ln(g);
            counted += 1;
        }
        v = w.into_iter().map(|x| x / g).collect();
    }
    exp(logsum / counted as f64)
}

fn residual(phi1: &Matrix, phi2: &Matrix, a: &Matrix, h: &Matrix) -> Result<f64> {
    let mut r = phi1.matmul(a)?.matmul_transb(phi2)?;
    for ((ri, &ai), &hi) in r.data_mut().iter_mut().zip(a.data()).zip(h.data()) {
        *ri += hi - ai;
    }
    Ok(r.frobenius_norm())
}

pub fn stein_solve(phi1: &Matrix, phi2: &Matrix, h: &Matrix, opts: SteinOptions) -> Result<SteinOutput> {
    let (n1, n2) = (phi1.rows(), phi2.rows());
    if !phi1.is_square() {
        return Err(Error::DimensionMismatch { expected: n1, found: phi1.cols() });
    }
    if !phi2.is_square() {
        return Err(Error::DimensionMismatch { expected: n2, found: phi2.cols() });
    }
    if h.rows() != n1 || h.cols() != n2 {
        return Err(Error::DimensionMismatch { expected: n1 * n2, found: h.rows() * h.cols() });
    }
    let rho1 = spectral_radius_estimate(phi1, opts.power_steps);
    let rho2 = spectral_radius_estimate(phi2, opts.power_steps);
    let rho = rho1 * rho2;
    if !(rho < 1.0) {
        return Err(Error::SteinSpectralRadius { estimate: rho });
    }

    let hnorm = h.frobenius_norm();
    if hnorm == 0.0 {
        return Ok(SteinOutput { a: h.clone(), iterations: 0, residual: 0.0, rho_estimate: rho });
    }

    // Rescale so both factors have comparable radius; the product M A Pᵀ is unchanged.
    let scale = if rho1 > 0.0 && rho2 > 0.0 { sqrt(rho1 / rho2) } else { 1.0 };
    let mut m = phi1.clone();
    let mut p = phi2.clone();
    m.data_mut().iter_mut().for_each(|x| *x /= scale);
    p.data_mut().iter_mut().for_each(|x| *x *= scale);

    let mut a = h.clone();
    let mut best = f64::INFINITY;
    let mut stalled = 0;
    for k in 1..=opts.max_iter {
        let update = m.matmul(&a)?.matmul_transb(&p)?;
        for (ai, &ui) in a.data_mut().iter_mut().zip(update.data()) {
            *ai += ui;
        }
        let rel = residual(phi1, phi2, &a, h)? / hnorm;
        if !rel.is_finite() {
            return Err(Error::SteinStagnation { iterations: k, residual: rel });
        }
        if rel <= opts.tol {
            return Ok(SteinOutput { a, iterations: k, residual: rel, rho_estimate: rho });
        }
        if rel < 0.5 * best {
            stalled = 0;
        } else {
            stalled += 1;
        }
        best = best.min(rel);
        if stalled >= 3 {
            if best <= ACCEPT_STALLED {
                return Ok(SteinOutput { a, iterations: k, residual: rel, rho_estimate: rho });
            }
            return Err(Error::SteinStagnation { iterations: k, residual: rel });
        }
        m = m.matmul(&m)?;
        p = p.matmul(&p)?;
    }
    Err(Error::SteinStagnation { iterations: opts.max_iter, residual: best })
}
