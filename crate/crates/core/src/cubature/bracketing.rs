//! Sufficient conditions for `I(f)` to lie between the Gauss and anti-Gauss
//! cubatures, evaluated from truncated orthonormal expansions
//! `f = Σ α_{ij} p̂_i(x1) p̂_j(x2)`.

use alloc::vec::Vec;

use super::gauss_cubature;
use crate::error::{Error, Result};
use crate::linsolve::Matrix;
use crate::math::{abs, sqrt};
use crate::orthopoly::{orthonormal_table, recurrence_coeffs, JacobiWeight};
use crate::rules::{antigauss_rule, gauss_rule, QuadRule1D};

/// Extra oracle points beyond `2·cutoff` per axis.
const ORACLE_MARGIN: usize = 16;

/// Split of the Gauss and anti-Gauss errors into a leading term and remainders:
/// `(I − G)(f) = −S + E1` and `(I − A)(f) = S + E2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BracketingReport {
    pub s: f64,
    pub e1: f64,
    pub e2: f64,
    /// `max(|E1|, |E2|) < |S|`.
    pub holds: bool,
    /// Highest expansion index kept on each axis.
    pub cutoffs: (usize, usize),
}

/// Terms of the simplified test for two first-kind Chebyshev weights, in the
/// scaled form where `S = ±√2·π·s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChebyshevBracketing {
    /// `α_{2n1,0} + α_{0,2n2}`.
    pub s: f64,
    pub e1: f64,
    pub e2: f64,
    pub theta: f64,
    /// `max(|e1|, |e2|) < |s|`.
    pub holds: bool,
    /// `θ < |s|`, the cruder triangle-inequality form.
    pub holds_theta: bool,
    pub cutoffs: (usize, usize),
}

/// `α_{ij}` for `i ≤ c1`, `j ≤ c2`, by a Gauss cubature with `2c + 16` points per axis.
pub fn expansion_coefficients(
    f: impl Fn(f64, f64) -> f64,
    w1: JacobiWeight,
    w2: JacobiWeight,
    c1: usize,
    c2: usize,
) -> Result<Matrix> {
    let (m1, m2) = (2 * c1 + ORACLE_MARGIN, 2 * c2 + ORACLE_MARGIN);
    let oracle = gauss_cubature(w1, w2, m1, m2)?;
    let p1 = basis_matrix(oracle.rule1(), c1)?;
    let p2 = basis_matrix(oracle.rule2(), c2)?;
    let mut wf = Matrix::zeros(m1, m2);
    for (k, (&[x1, x2], &w)) in oracle.nodes().iter().zip(oracle.weights()).enumerate() {
        let v = f(x1, x2);
        if !v.is_finite() {
            return Err(Error::NonFinite { what: "integrand", x1, x2 });
        }
        wf.data_mut()[k] = w * v;
    }
    p1.transpose().matmul(&wf)?.matmul(&p2)
}

/// `p̂_j(x_i)` for the nodes of `rule`, as an `nodes × (degree + 1)` matrix.
fn basis_matrix(rule: &QuadRule1D, degree: usize) -> Result<Matrix> {
    let c = recurrence_coeffs(rule.weight_fn(), degree.max(1))?;
    let table = orthonormal_table(&c, rule.nodes(), degree)?;
    let cols = degree + 1;
    Ok(Matrix::from_fn(rule.len(), cols, |i, j| table[i * cols + j]))
}

/// `Q(p̂_i)` for `i = 0..=degree`.
fn rule_on_basis(rule: &QuadRule1D, degree: usize) -> Result<Vec<f64>> {
    let p = basis_matrix(rule, degree)?;
    Ok((0..=degree)
        .map(|j| p.col(j).iter().zip(rule.weights()).map(|(a, w)| a * w).sum())
        .collect())
}

fn resolve_cutoffs(n1: usize, n2: usize, cutoffs: Option<(usize, usize)>) -> Result<(usize, usize)> {
    if n1 == 0 || n2 == 0 {
        return Err(Error::Parameter(alloc::format!("rule sizes must be >= 1, got ({n1}, {n2})")));
    }
    let (c1, c2) = cutoffs.unwrap_or_else(|| {
        let c = 6 * n1.max(n2);
        (c, c)
    });
    if c1 < 2 * n1 + 1 || c2 < 2 * n2 + 1 {
        return Err(Error::Parameter(alloc::format!(
            "cutoffs ({c1}, {c2}) must reach indices ({}, {})",
            2 * n1 + 1,
            2 * n2 + 1
        )));
    }
    Ok((c1, c2))
}

/// Values of a univariate rule on `p̂_i` with the exactness of the Gauss rule
/// imposed: `√b_0` at `i = 0`, zero for `1 ≤ i < 2n`.
fn with_exact_zeros(mut v: Vec<f64>, b0: f64, n: usize) -> Vec<f64> {
    v[0] = sqrt(b0);
    for x in v.iter_mut().take(2 * n).skip(1) {
        *x = 0.0;
    }
    v
}

pub fn bracketing_diagnostic(
    f: impl Fn(f64, f64) -> f64,
    w1: JacobiWeight,
    w2: JacobiWeight,
    n1: usize,
    n2: usize,
    cutoffs: Option<(usize, usize)>,
) -> Result<BracketingReport> {
    let (c1, c2) = resolve_cutoffs(n1, n2, cutoffs)?;
    let alpha = expansion_coefficients(f, w1, w2, c1, c2)?;
    let (b01, b02) = (w1.moment0(), w2.moment0());

    let g1 = with_exact_zeros(rule_on_basis(&gauss_rule(w1, n1)?, c1)?, b01, n1);
    let g2 = with_exact_zeros(rule_on_basis(&gauss_rule(w2, n2)?, c2)?, b02, n2);
    // A(p̂_i) = −G(p̂_i) for 1 ≤ i ≤ 2n+1
    let mut a1 = with_exact_zeros(rule_on_basis(&antigauss_rule(w1, n1)?, c1)?, b01, n1);
    let mut a2 = with_exact_zeros(rule_on_basis(&antigauss_rule(w2, n2)?, c2)?, b02, n2);
    for i in 2 * n1..=2 * n1 + 1 {
        a1[i] = -g1[i];
    }
    for j in 2 * n2..=2 * n2 + 1 {
        a2[j] = -g2[j];
    }

    let s = sqrt(b02) * (2 * n1..=2 * n1 + 1).map(|i| alpha[(i, 0)] * g1[i]).sum::<f64>()
        + sqrt(b01) * (2 * n2..=2 * n2 + 1).map(|j| alpha[(0, j)] * g2[j]).sum::<f64>();

    // Σ α_{ij} q1_i q2_j over the pairs outside the exactness box.
    let tail = |q1: &[f64], q2: &[f64]| -> f64 {
        let mut total = 0.0;
        for j in 0..=c2 {
            if q2[j] == 0.0 {
                continue;
            }
            let start = if j < 2 * n2 { 2 * n1 } else { 0 };
            for i in start..=c1 {
                total += alpha[(i, j)] * q1[i] * q2[j];
            }
        }
        total
    };
    let e1 = s - tail(&g1, &g2);
    let e2 = -tail(&a1, &a2) - s;
    Ok(BracketingReport { s, e1, e2, holds: abs(e1).max(abs(e2)) < abs(s), cutoffs: (c1, c2) })
}

pub fn chebyshev_bracketing_terms(
    f: impl Fn(f64, f64) -> f64,
    w1: JacobiWeight,
    w2: JacobiWeight,
    n1: usize,
    n2: usize,
    cutoffs: Option<(usize, usize)>,
) -> Result<ChebyshevBracketing> {
    let cheb = JacobiWeight::CHEBYSHEV_FIRST;
    if w1 != cheb || w2 != cheb {
        return Err(Error::Parameter("the simplified test needs first-kind Chebyshev weights on both axes".into()));
    }
    let (c1, c2) = resolve_cutoffs(n1, n2, cutoffs)?;
    let alpha = expansion_coefficients(f, w1, w2, c1, c2)?;
    let a = |i: usize, j: usize| alpha[(i, j)];
    let r2 = core::f64::consts::SQRT_2;
    let (p, q) = (2 * n1, 2 * n2);
    let k1max = c1 / p;
    let k2max = c2 / q;
    let sign = |k: usize| if k % 2 == 0 { 1.0 } else { -1.0 };

    let mut e1 = r2 * a(p, q);
    let mut e2 = r2 * a(p, q);
    let mut theta = r2 * abs(a(p, q));
    for k1 in 2..=k1max {
        e1 += sign(k1) * (a(p * k1, 0) - r2 * a(p * k1, q));
        e2 += a(p * k1, 0) + r2 * a(p * k1, q);
        theta += abs(a(p * k1, 0)) + r2 * abs(a(p * k1, q));
        for k2 in 2..=k2max {
            e1 += r2 * sign(k1 + k2) * a(p * k1, q * k2);
            e2 += r2 * a(p * k1, q * k2);
            theta += r2 * abs(a(p * k1, q * k2));
        }
    }
    for k2 in 2..=k2max {
        e1 += sign(k2) * (a(0, q * k2) - r2 * a(p, q * k2));
        e2 += a(0, q * k2) + r2 * a(p, q * k2);
        theta += abs(a(0, q * k2)) + r2 * abs(a(p, q * k2));
    }
    let s = a(p, 0) + a(0, q);
    Ok(ChebyshevBracketing {
        s,
        e1,
        e2,
        theta,
        holds: abs(e1).max(abs(e2)) < abs(s),
        holds_theta: theta < abs(s),
        cutoffs: (c1, c2),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    const CHEB: JacobiWeight = JacobiWeight::CHEBYSHEV_FIRST;

    #[test]
    fn polynomial_in_exactness_box() {
        let w1 = JacobiWeight::LEGENDRE;
        let w2 = JacobiWeight::new(0.5, -0.25).unwrap();
        let p = |x: f64, y: f64| 1.0 + x.powi(5) * y.powi(3) - 2.0 * x * y.powi(2);
        let r = bracketing_diagnostic(p, w1, w2, 3, 2, None).unwrap();
        assert!(r.s.abs() < 1e-13 && r.e1.abs() < 1e-13 && r.e2.abs() < 1e-13, "{r:?}");
        let c = chebyshev_bracketing_terms(p, CHEB, CHEB, 3, 2, None).unwrap();
        // θ sums a few hundred round-off sized coefficients
        assert!(c.theta < 1e-12, "{c:?}");
    }

    #[test]
    fn cutoff_too_small() {
        let f = |x: f64, _| x;
        assert!(bracketing_diagnostic(f, CHEB, CHEB, 4, 4, Some((8, 20))).is_err());
        assert!(chebyshev_bracketing_terms(f, JacobiWeight::LEGENDRE, CHEB, 4, 4, None).is_err());
    }

    #[test]
    fn single_leading_coefficient() {
        // f = p̂_{2n1}(x1) p̂_0(x2) for n1 = 3 under Chebyshev weights
        let n1 = 3;
        let f = |x: f64, _y: f64| (2.0 / PI).sqrt() * libm::cos(2.0 * n1 as f64 * libm::acos(x)) / PI.sqrt();
        let c = chebyshev_bracketing_terms(f, CHEB, CHEB, n1, 2, None).unwrap();
        assert!((c.s - 1.0).abs() < 1e-12);
        assert!(c.holds && c.holds_theta);
        let r = bracketing_diagnostic(f, CHEB, CHEB, n1, 2, None).unwrap();
        assert!(r.holds);
        assert!((r.s.abs() - 2f64.sqrt() * PI).abs() < 1e-11);
    }

    #[test]
    fn split_reproduces_errors() {
        let w1 = JacobiWeight::new(-0.3, 0.6).unwrap();
        let w2 = JacobiWeight::LEGENDRE;
        let f = |x: f64, y: f64| libm::exp(x) * libm::cos(2.0 * y) + 1.0 / (3.0 - x - y);
        let (n1, n2) = (3, 4);
        let r = bracketing_diagnostic(f, w1, w2, n1, n2, None).unwrap();
        let exact = gauss_cubature(w1, w2, 80, 80).unwrap().apply(f).unwrap();
        let g = gauss_cubature(w1, w2, n1, n2).unwrap().apply(f).unwrap();
        let a = super::super::antigauss_cubature(w1, w2, n1, n2).unwrap().apply(f).unwrap();
        assert!(((exact - g) - (-r.s + r.e1)).abs() < 1e-13);
        assert!(((exact - a) - (r.s + r.e2)).abs() < 1e-13);
    }
}
