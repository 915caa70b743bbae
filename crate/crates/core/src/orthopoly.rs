//! Jacobi weights, their three-term recurrence coefficients, and evaluation of
//! the orthonormal Jacobi polynomials.
//!
//! The monic polynomials satisfy
//!
//! ```text
//! p_{-1} = 0,  p_0 = 1,  p_{j+1}(x) = (x - a_j) p_j(x) - b_j p_{j-1}(x)
//! ```
//!
//! and `b_0` is the zeroth moment of the weight. Downstream code that needs
//! expansion coefficients works with the orthonormal family
//! `p̂_j = p_j / sqrt(b_0 b_1 ... b_j)`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{exp, ln, ln_gamma, powf, sqrt};
use crate::tridiag::SymTridiag;

/// Univariate Jacobi weight `(1 - x)^alpha (1 + x)^beta` on `[-1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiWeight {
    alpha: f64,
    beta: f64,
}

impl JacobiWeight {
    pub const LEGENDRE: JacobiWeight = JacobiWeight { alpha: 0.0, beta: 0.0 };
    pub const CHEBYSHEV_FIRST: JacobiWeight = JacobiWeight { alpha: -0.5, beta: -0.5 };
    pub const CHEBYSHEV_SECOND: JacobiWeight = JacobiWeight { alpha: 0.5, beta: 0.5 };
    pub const CHEBYSHEV_THIRD: JacobiWeight = JacobiWeight { alpha: -0.5, beta: 0.5 };
    pub const CHEBYSHEV_FOURTH: JacobiWeight = JacobiWeight { alpha: 0.5, beta: -0.5 };

    /// Validates integrability (`alpha, beta > -1`).
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha.is_finite() && beta.is_finite() && alpha > -1.0 && beta > -1.0) {
            return Err(Error::InvalidWeight { alpha, beta });
        }
        Ok(JacobiWeight { alpha, beta })
    }

    /// [`JacobiWeight::new`] for constant contexts.
    pub const fn new_const(alpha: f64, beta: f64) -> Option<Self> {
        if alpha.is_finite() && beta.is_finite() && alpha > -1.0 && beta > -1.0 {
            Some(JacobiWeight { alpha, beta })
        } else {
            None
        }
    }

    /// Exponent at the `+1` endpoint.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Exponent at the `-1` endpoint.
    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn eval(&self, x: f64) -> f64 {
        endpoint_power(1.0 - x, self.alpha) * endpoint_power(1.0 + x, self.beta)
    }

    /// `∫ w`, via log-Gamma so moderate exponents do not overflow.
    pub fn moment0(&self) -> f64 {
        let (a, b) = (self.alpha, self.beta);
        exp(ln_gamma(a + 1.0) + ln_gamma(b + 1.0) - ln_gamma(a + b + 2.0)
            + (a + b + 1.0) * ln(2.0))
    }

    pub fn is_symmetric(&self) -> bool {
        self.alpha == self.beta
    }
}

/// `base^exponent` with `0^0 = 1` and an exact `1` for a zero exponent.
pub(crate) fn endpoint_power(base: f64, exponent: f64) -> f64 {
    if exponent == 0.0 {
        1.0
    } else {
        powf(base, exponent)
    }
}

/// Recurrence coefficients `a_0..a_n` and `b_0..b_n` of a Jacobi weight.
#[derive(Debug, Clone, PartialEq)]
pub struct RecurrenceCoeffs {
    weight: JacobiWeight,
    a: Vec<f64>,
    b: Vec<f64>,
}

impl RecurrenceCoeffs {
    pub fn weight(&self) -> JacobiWeight {
        self.weight
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    /// Number of stored coefficient pairs (`n + 1`).
    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    /// The `n × n` Jacobi matrix `J_n`.
    pub fn jacobi_matrix(&self, n: usize) -> Result<SymTridiag> {
        if n == 0 || n > self.len() {
            return Err(Error::Parameter(alloc::format!(
                "Jacobi matrix of order {n} needs 1..={} coefficients",
                self.len()
            )));
        }
        let diag = self.a[..n].to_vec();
        let off = self.b[1..n].iter().map(|&b| sqrt(b)).collect();
        SymTridiag::new(diag, off)
    }

    /// `J_n` bordered by `sqrt(2 b_n)` and corner `a_n`, whose spectrum gives
    /// the `n + 1` anti-Gauss nodes.
    pub fn antigauss_matrix(&self, n: usize) -> Result<SymTridiag> {
        if n == 0 || n + 1 > self.len() {
            return Err(Error::Parameter(alloc::format!(
                "anti-Gauss matrix for n = {n} needs {} coefficients, have {}",
                n + 1,
                self.len()
            )));
        }
        let diag = self.a[..=n].to_vec();
        let mut off: Vec<f64> = self.b[1..n].iter().map(|&b| sqrt(b)).collect();
        off.push(sqrt(2.0 * self.b[n]));
        SymTridiag::new(diag, off)
    }
}

/// Coefficients `a_0..a_n`, `b_0..b_n` in closed form.
pub fn recurrence_coeffs(w: JacobiWeight, n: usize) -> Result<RecurrenceCoeffs> {
    if n == 0 {
        return Err(Error::Parameter("recurrence needs n >= 1".into()));
    }
    let w = JacobiWeight::new(w.alpha, w.beta)?;
    let (al, be) = (w.alpha, w.beta);
    let s = al + be;
    let mut a = Vec::with_capacity(n + 1);
    let mut b = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let jf = j as f64;
        let aj = if w.is_symmetric() {
            0.0
        } else if j == 0 {
            // (β² - α²)/((α+β)(α+β+2)) with the α+β factor cancelled
            (be - al) / (s + 2.0)
        } else {
            (be * be - al * al) / ((2.0 * jf + s) * (2.0 * jf + s + 2.0))
        };
        a.push(aj);
        let bj = match j {
            0 => w.moment0(),
            // (2+s)² - 1 = (1+s)(3+s); cancel (1+s) so α+β = -1 stays finite
            1 => 4.0 * (1.0 + al) * (1.0 + be) / ((2.0 + s) * (2.0 + s) * (3.0 + s)),
            _ => {
                let t = 2.0 * jf + s;
                4.0 * jf * (jf + al) * (jf + be) * (jf + s) / (t * t * (t * t - 1.0))
            }
        };
        b.push(bj);
    }
    Ok(RecurrenceCoeffs { weight: w, a, b })
}

/// Values `p̂_0(x), ..., p̂_n(x)` of the orthonormal polynomials.
pub fn eval_orthonormal(c: &RecurrenceCoeffs, x: f64, n: usize) -> Result<Vec<f64>> {
    let mut out = vec![0.0; n + 1];
    eval_orthonormal_into(c, x, &mut out)?;
    Ok(out)
}

/// Fills `out[j] = p̂_j(x)` for `j < out.len()`.
pub fn eval_orthonormal_into(c: &RecurrenceCoeffs, x: f64, out: &mut [f64]) -> Result<()> {
    if out.len() > c.len() {
        return Err(Error::DimensionMismatch { expected: c.len(), found: out.len() });
    }
    if out.is_empty() {
        return Ok(());
    }
    out[0] = 1.0 / sqrt(c.b[0]);
    let mut prev = 0.0;
    for j in 0..out.len() - 1 {
        let cur = out[j];
        let back = if j == 0 { 0.0 } else { sqrt(c.b[j]) * prev };
        out[j + 1] = ((x - c.a[j]) * cur - back) / sqrt(c.b[j + 1]);
        prev = cur;
    }
    Ok(())
}

/// Evaluates `p̂_0..p̂_{degree}` at every point; row-major `points.len() × (degree + 1)`.
pub(crate) fn orthonormal_table(c: &RecurrenceCoeffs, points: &[f64], degree: usize) -> Result<Vec<f64>> {
    let cols = degree + 1;
    let mut table = vec![0.0; points.len() * cols];
    for (row, &x) in table.chunks_exact_mut(cols).zip(points) {
        eval_orthonormal_into(c, x, row)?;
    }
    Ok(table)
}
