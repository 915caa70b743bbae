use alloc::vec;
use alloc::vec::Vec;

use super::solve::NystromSolution;
use super::{Kernel, SpaceWeight};
use crate::error::{Error, Result};
use crate::linsolve::{condition_inf, LinearOperator, Matrix, SystemOperator};
use crate::math::{abs, compensated_sum};
use crate::rules::RuleKind;

/// Points per axis of the error grid.
pub const ERROR_GRID: usize = 50;

/// Largest dimension [`condition_number_inf`] accepts unless told otherwise.
pub const DEFAULT_COND_CAP: usize = 4096;

/// `y_k = −1 + 2k/(ERROR_GRID + 1)` for `k = 1..=ERROR_GRID`; the endpoints are excluded.
pub fn error_grid_points() -> Vec<f64> {
    (1..=ERROR_GRID).map(|k| -1.0 + 2.0 * k as f64 / (ERROR_GRID + 1) as f64).collect()
}

impl NystromSolution {
    /// `(f u)(y) = (g u)(y) + u(y) Σ_j (λ_j / u(x_j)) k(x_j, y) a*_j`.
    pub fn eval_weighted(&self, y1: f64, y2: f64) -> Result<f64> {
        let p = &self.problem;
        let uy = p.space_weight().eval(y1, y2);
        let terms = self
            .rule
            .nodes()
            .iter()
            .zip(self.rule.weights())
            .zip(self.u_nodes.iter().zip(&self.coeffs))
            .map(|((&[x1, x2], &w), (&ux, &a))| w / ux * p.kernel_value(x1, x2, y1, y2) * a);
        let v = p.rhs(y1, y2) * uy + uy * compensated_sum(terms);
        if !v.is_finite() {
            return Err(Error::NonFinite { what: "interpolant", x1: y1, x2: y2 });
        }
        Ok(v)
    }

    /// `f̂(y)`, defined where `u(y) ≠ 0`.
    pub fn eval(&self, y1: f64, y2: f64) -> Result<f64> {
        let uy = self.problem.space_weight().eval(y1, y2);
        if uy == 0.0 {
            return Err(Error::UnweightedUndefined { y1, y2 });
        }
        Ok(self.eval_weighted(y1, y2)? / uy)
    }

    /// Weighted values on the tensor grid `ys1 × ys2`; entry `(a, b)` is at `(ys1[a], ys2[b])`.
    pub fn eval_weighted_grid(&self, ys1: &[f64], ys2: &[f64]) -> Result<Matrix> {
        let p = &self.problem;
        let u = p.space_weight();
        let mut out = match p.kernel() {
            Kernel::Separable(k1, k2) => {
                // Σ_j d_j k1 k2 a_j = V1 (D ∘ A) V2ᵀ with the weights split per axis
                let (r1, r2) = (self.rule.rule1(), self.rule.rule2());
                let (n1, n2) = (r1.len(), r2.len());
                let mut da = Matrix::zeros(n1, n2);
                for (l, v) in da.data_mut().iter_mut().enumerate() {
                    *v = self.rule.weights()[l] / self.u_nodes[l] * self.coeffs[l];
                }
                let v1 = Matrix::from_fn(ys1.len(), n1, |a, j| p.multiplier() * k1(r1.nodes()[j], ys1[a]));
                let v2 = Matrix::from_fn(ys2.len(), n2, |b, j| k2(r2.nodes()[j], ys2[b]));
                v1.matmul(&da)?.matmul_transb(&v2)?
            }
            Kernel::Zero => Matrix::zeros(ys1.len(), ys2.len()),
            Kernel::General(_) => {
                let d: Vec<f64> = self
                    .rule
                    .weights()
                    .iter()
                    .zip(&self.u_nodes)
                    .zip(&self.coeffs)
                    .map(|((w, ux), a)| w / ux * a)
                    .collect();
                let mut m = Matrix::zeros(ys1.len(), ys2.len());
                let mut terms = vec![0.0; d.len()];
                for (b, &y2) in ys2.iter().enumerate() {
                    for (a, &y1) in ys1.iter().enumerate() {
                        for (t, (&[x1, x2], &dj)) in terms.iter_mut().zip(self.rule.nodes().iter().zip(&d)) {
                            *t = dj * p.kernel_value(x1, x2, y1, y2);
                        }
                        m[(a, b)] = compensated_sum(terms.iter().copied());
                    }
                }
                m
            }
        };
        for (b, &y2) in ys2.iter().enumerate() {
            for (a, &y1) in ys1.iter().enumerate() {
                let uy = u.eval(y1, y2);
                let v = p.rhs(y1, y2) * uy + uy * out[(a, b)];
                if !v.is_finite() {
                    return Err(Error::NonFinite { what: "interpolant", x1: y1, x2: y2 });
                }
                out[(a, b)] = v;
            }
        }
        Ok(out)
    }

    /// Weighted values on the error grid, in the grid's column-major order.
    pub fn eval_error_grid(&self) -> Result<Matrix> {
        let g = error_grid_points();
        self.eval_weighted_grid(&g, &g)
    }
}

/// Pointwise mean of a Gauss and an anti-Gauss interpolant of one problem.
#[derive(Debug, Clone, Copy)]
pub struct AveragedInterpolant<'a> {
    gauss: &'a NystromSolution,
    anti: &'a NystromSolution,
}

impl AveragedInterpolant<'_> {
    pub fn eval_weighted(&self, y1: f64, y2: f64) -> Result<f64> {
        Ok(0.5 * (self.gauss.eval_weighted(y1, y2)? + self.anti.eval_weighted(y1, y2)?))
    }

    pub fn eval(&self, y1: f64, y2: f64) -> Result<f64> {
        Ok(0.5 * (self.gauss.eval(y1, y2)? + self.anti.eval(y1, y2)?))
    }

    pub fn eval_weighted_grid(&self, ys1: &[f64], ys2: &[f64]) -> Result<Matrix> {
        let mut g = self.gauss.eval_weighted_grid(ys1, ys2)?;
        let a = self.anti.eval_weighted_grid(ys1, ys2)?;
        for (x, y) in g.data_mut().iter_mut().zip(a.data()) {
            *x = 0.5 * (*x + y);
        }
        Ok(g)
    }
}

pub fn averaged_interpolant<'a>(
    gauss: &'a NystromSolution,
    anti: &'a NystromSolution,
) -> Result<AveragedInterpolant<'a>> {
    if gauss.kind() != RuleKind::Gauss || anti.kind() != RuleKind::AntiGauss {
        return Err(Error::Mismatch("expected one Gauss and one anti-Gauss solution".into()));
    }
    if gauss.sizes() != anti.sizes() {
        return Err(Error::Mismatch(alloc::format!(
            "Gauss sizes {:?} and anti-Gauss sizes {:?} differ",
            gauss.sizes(),
            anti.sizes()
        )));
    }
    if !gauss.problem().same_as(anti.problem()) {
        return Err(Error::Mismatch("the solutions belong to different problems".into()));
    }
    Ok(AveragedInterpolant { gauss, anti })
}

/// `max |(f̂ − f_ref) u| / max |f_ref u|` on the error grid, for unweighted evaluators.
pub fn relative_error(approx: impl Fn(f64, f64) -> f64, reference: impl Fn(f64, f64) -> f64, u: &SpaceWeight) -> f64 {
    let g = error_grid_points();
    let (mut num, mut den) = (0.0f64, 0.0f64);
    for &y2 in &g {
        for &y1 in &g {
            let uy = u.eval(y1, y2);
            let r = reference(y1, y2) * uy;
            num = num.max(abs(approx(y1, y2) * uy - r));
            den = den.max(abs(r));
        }
    }
    num / den
}

/// The same ratio for precomputed weighted grid values.
pub fn weighted_relative_error(approx: &[f64], reference: &[f64]) -> Result<f64> {
    if approx.len() != reference.len() {
        return Err(Error::DimensionMismatch { expected: reference.len(), found: approx.len() });
    }
    let num = approx.iter().zip(reference).fold(0.0f64, |m, (a, r)| m.max(abs(a - r)));
    let den = reference.iter().fold(0.0f64, |m, r| m.max(abs(*r)));
    Ok(num / den)
}

/// `κ_∞(F_N)` through an explicit inverse; refuses systems larger than `cap`.
pub fn condition_number_inf(op: &SystemOperator, cap: usize) -> Result<f64> {
    let n = op.dim();
    if n > cap {
        return Err(Error::Capacity { n, cap });
    }
    match op.realization() {
        crate::linsolve::Realization::Dense(f) => condition_inf(f),
        _ => condition_inf(&op.to_dense()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BracketPoint {
    pub y1: f64,
    pub y2: f64,
    /// Weighted Gauss and anti-Gauss interpolant values.
    pub gauss: f64,
    pub anti: f64,
    pub reference: Option<f64>,
    /// Whether the reference lies between the two interpolants.
    pub bracketed: Option<bool>,
    /// Sign of `gauss − anti`.
    pub sign: i8,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BracketReport {
    pub points: Vec<BracketPoint>,
    /// All points bracketed; `None` without a reference.
    pub all_bracketed: Option<bool>,
    /// `max |f_G − f_A| / 2` over the grid (weighted).
    pub max_half_gap: f64,
}

/// Compares the two interpolants on `ys1 × ys2`, against the weighted
/// reference values (same grid order) when given.
pub fn bracketing_check(
    gauss: &NystromSolution,
    anti: &NystromSolution,
    ys1: &[f64],
    ys2: &[f64],
    reference: Option<&[f64]>,
) -> Result<BracketReport> {
    averaged_interpolant(gauss, anti)?;
    let g = gauss.eval_weighted_grid(ys1, ys2)?;
    let a = anti.eval_weighted_grid(ys1, ys2)?;
    if let Some(r) = reference {
        if r.len() != g.data().len() {
            return Err(Error::DimensionMismatch { expected: g.data().len(), found: r.len() });
        }
    }
    let mut points = Vec::with_capacity(g.data().len());
    let mut max_half_gap = 0.0f64;
    for (b, &y2) in ys2.iter().enumerate() {
        for (ia, &y1) in ys1.iter().enumerate() {
            let l = ia + b * ys1.len();
            let (fg, fa) = (g.data()[l], a.data()[l]);
            let reference = reference.map(|r| r[l]);
            let bracketed = reference.map(|r| fg.min(fa) <= r && r <= fg.max(fa));
            let sign = if fg > fa {
                1
            } else if fg < fa {
                -1
            } else {
                0
            };
            max_half_gap = max_half_gap.max(0.5 * abs(fg - fa));
            points.push(BracketPoint { y1, y2, gauss: fg, anti: fa, reference, bracketed, sign });
        }
    }
    let all_bracketed = reference.map(|_| points.iter().all(|p| p.bracketed == Some(true)));
    Ok(BracketReport { points, all_bracketed, max_half_gap })
}
