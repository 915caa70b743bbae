//! Weighted Nyström method for
//!
//! ```text
//! f(y) − ∫_S k(x, y) f(x) w(x) dx = g(y),   S = [-1, 1]²,
//! ```
//!
//! solved for `a_j = (f u)(x_j)` at the nodes of a Gauss or anti-Gauss cubature.
//! `x` is the integration variable and `y` the collocation variable throughout.

mod assemble;
mod interpolant;
mod solve;

use alloc::format;
use alloc::sync::Arc;

pub use assemble::{assemble_system, assemble_system_as, nystrom_rule, Assembly, NystromSystem, STORE_KERNEL_MAX};
pub use interpolant::{
    averaged_interpolant, bracketing_check, condition_number_inf, error_grid_points, relative_error,
    weighted_relative_error, AveragedInterpolant, BracketPoint, BracketReport, DEFAULT_COND_CAP, ERROR_GRID,
};
pub use solve::{solve_nystrom, solve_system, NystromSolution, SolveOptions, SolverChoice, SolverStats, LU_MAX};

use crate::cubature::NodePolicy;
use crate::error::{Error, Result};
use crate::orthopoly::{endpoint_power, JacobiWeight};

/// `k(x1, x2, y1, y2)`.
pub type KernelFn = Arc<dyn Fn(f64, f64, f64, f64) -> f64 + Send + Sync>;
/// One factor `k_ℓ(x_ℓ, y_ℓ)` of a separable kernel.
pub type KernelFactor = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
/// `g(y1, y2)`.
pub type RhsFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// `u(x) = (1−x1)^γ1 (1+x1)^δ1 (1−x2)^γ2 (1+x2)^δ2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceWeight {
    gamma1: f64,
    delta1: f64,
    gamma2: f64,
    delta2: f64,
}

impl SpaceWeight {
    pub const ONE: SpaceWeight = SpaceWeight { gamma1: 0.0, delta1: 0.0, gamma2: 0.0, delta2: 0.0 };

    pub fn new(gamma1: f64, delta1: f64, gamma2: f64, delta2: f64) -> Result<Self> {
        for (name, value) in [("gamma1", gamma1), ("delta1", delta1), ("gamma2", gamma2), ("delta2", delta2)] {
            if !(value.is_finite() && value >= 0.0) {
                return Err(Error::InvalidSpaceWeight { name, value });
            }
        }
        Ok(SpaceWeight { gamma1, delta1, gamma2, delta2 })
    }

    /// `(γ, δ)` of axis 1 or 2.
    pub fn axis(&self, axis: usize) -> (f64, f64) {
        if axis == 1 {
            (self.gamma1, self.delta1)
        } else {
            (self.gamma2, self.delta2)
        }
    }

    pub fn eval_axis(&self, axis: usize, x: f64) -> f64 {
        let (g, d) = self.axis(axis);
        endpoint_power(1.0 - x, g) * endpoint_power(1.0 + x, d)
    }

    pub fn eval(&self, x1: f64, x2: f64) -> f64 {
        self.eval_axis(1, x1) * self.eval_axis(2, x2)
    }

    pub fn is_trivial(&self) -> bool {
        *self == SpaceWeight::ONE
    }
}

#[derive(Clone)]
pub enum Kernel {
    Zero,
    General(KernelFn),
    /// `k(x, y) = k1(x1, y1) k2(x2, y2)`.
    Separable(KernelFactor, KernelFactor),
}

impl Kernel {
    pub fn general(f: impl Fn(f64, f64, f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        Kernel::General(Arc::new(f))
    }

    pub fn separable(
        k1: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        k2: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Kernel::Separable(Arc::new(k1), Arc::new(k2))
    }

    pub fn eval(&self, x1: f64, x2: f64, y1: f64, y2: f64) -> f64 {
        match self {
            Kernel::Zero => 0.0,
            Kernel::General(k) => k(x1, x2, y1, y2),
            Kernel::Separable(k1, k2) => k1(x1, y1) * k2(x2, y2),
        }
    }

    pub fn is_separable(&self) -> bool {
        matches!(self, Kernel::Separable(..) | Kernel::Zero)
    }

    fn same_as(&self, other: &Kernel) -> bool {
        match (self, other) {
            (Kernel::Zero, Kernel::Zero) => true,
            (Kernel::General(a), Kernel::General(b)) => Arc::ptr_eq(a, b),
            (Kernel::Separable(a1, a2), Kernel::Separable(b1, b2)) => Arc::ptr_eq(a1, b1) && Arc::ptr_eq(a2, b2),
            _ => false,
        }
    }
}

impl core::fmt::Debug for Kernel {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            Kernel::Zero => "Kernel::Zero",
            Kernel::General(_) => "Kernel::General(..)",
            Kernel::Separable(..) => "Kernel::Separable(..)",
        })
    }
}

#[derive(Clone)]
pub struct FredholmProblem {
    w1: JacobiWeight,
    w2: JacobiWeight,
    u: SpaceWeight,
    kernel: Kernel,
    rhs: RhsFn,
    multiplier: f64,
    node_policy: NodePolicy,
}

impl FredholmProblem {
    /// Checks `γ_i < α_i + 1` and `δ_i < β_i + 1` on both axes.
    pub fn new(
        w1: JacobiWeight,
        w2: JacobiWeight,
        u: SpaceWeight,
        kernel: Kernel,
        rhs: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        Self::with_rhs_fn(w1, w2, u, kernel, Arc::new(rhs))
    }

    pub fn with_rhs_fn(w1: JacobiWeight, w2: JacobiWeight, u: SpaceWeight, kernel: Kernel, rhs: RhsFn) -> Result<Self> {
        let u = SpaceWeight::new(u.gamma1, u.delta1, u.gamma2, u.delta2)?;
        for (axis, w) in [(1, w1), (2, w2)] {
            let (g, d) = u.axis(axis);
            if !(g < w.alpha() + 1.0) {
                return Err(Error::Inadmissible { axis, detail: format!("gamma = {g} must be < alpha + 1 = {}", w.alpha() + 1.0) });
            }
            if !(d < w.beta() + 1.0) {
                return Err(Error::Inadmissible { axis, detail: format!("delta = {d} must be < beta + 1 = {}", w.beta() + 1.0) });
            }
        }
        Ok(FredholmProblem { w1, w2, u, kernel, rhs, multiplier: 1.0, node_policy: NodePolicy::Reject })
    }

    /// Scales the kernel by `m`.
    pub fn with_multiplier(mut self, m: f64) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::Parameter(format!("kernel multiplier must be finite, got {m}")));
        }
        self.multiplier = m;
        Ok(self)
    }

    /// Whether anti-Gauss rules failing the containment conditions may be used.
    pub fn with_node_policy(mut self, policy: NodePolicy) -> Self {
        self.node_policy = policy;
        self
    }

    pub fn weights(&self) -> (JacobiWeight, JacobiWeight) {
        (self.w1, self.w2)
    }

    pub fn space_weight(&self) -> SpaceWeight {
        self.u
    }

    pub fn kernel(&self) -> &Kernel {
        &self.kernel
    }

    pub fn multiplier(&self) -> f64 {
        self.multiplier
    }

    pub fn node_policy(&self) -> NodePolicy {
        self.node_policy
    }

    /// `multiplier · k(x, y)`.
    pub fn kernel_value(&self, x1: f64, x2: f64, y1: f64, y2: f64) -> f64 {
        self.multiplier * self.kernel.eval(x1, x2, y1, y2)
    }

    pub fn rhs(&self, y1: f64, y2: f64) -> f64 {
        (self.rhs)(y1, y2)
    }

    /// Same evaluators (by identity) and same parameters.
    pub fn same_as(&self, other: &FredholmProblem) -> bool {
        self.w1 == other.w1
            && self.w2 == other.w2
            && self.u == other.u
            && self.multiplier == other.multiplier
            && Arc::ptr_eq(&self.rhs, &other.rhs)
            && self.kernel.same_as(&other.kernel)
    }
}

impl core::fmt::Debug for FredholmProblem {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("FredholmProblem")
            .field("w1", &self.w1)
            .field("w2", &self.w2)
            .field("u", &self.u)
            .field("kernel", &self.kernel)
            .field("multiplier", &self.multiplier)
            .field("node_policy", &self.node_policy)
            .finish_non_exhaustive()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn admissibility() {
        let leg = JacobiWeight::LEGENDRE;
        let cheb = JacobiWeight::CHEBYSHEV_FIRST;
        let ok = SpaceWeight::new(0.25, 0.0, 0.25, 0.25).unwrap();
        assert!(FredholmProblem::new(leg, cheb, ok, Kernel::Zero, |_, _| 1.0).is_ok());
        let bad = SpaceWeight::new(0.0, 0.6, 0.0, 0.0).unwrap();
        assert!(matches!(
            FredholmProblem::new(cheb, leg, bad, Kernel::Zero, |_, _| 1.0),
            Err(Error::Inadmissible { axis: 1, .. })
        ));
        assert!(SpaceWeight::new(-0.1, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn space_weight_values() {
        let u = SpaceWeight::new(1.0, 0.5, 0.0, 2.0).unwrap();
        assert!((u.eval(0.0, 0.0) - 1.0).abs() < 1e-15);
        assert_eq!(u.eval(1.0, 0.3), 0.0);
        assert!((u.eval(0.5, 1.0) - 0.5 * 1.5f64.sqrt() * 4.0).abs() < 1e-14);
    }

    #[test]
    fn identity_of_problems() {
        let p = FredholmProblem::new(
            JacobiWeight::LEGENDRE,
            JacobiWeight::LEGENDRE,
            SpaceWeight::ONE,
            Kernel::separable(|x, y| x * y, |x, y| x + y),
            |y1, y2| y1 - y2,
        )
        .unwrap();
        let q = p.clone();
        assert!(p.same_as(&q));
        let r = FredholmProblem::new(JacobiWeight::LEGENDRE, JacobiWeight::LEGENDRE, SpaceWeight::ONE, Kernel::Zero, |_, _| 0.0)
            .unwrap();
        assert!(!p.same_as(&r));
        assert!(!p.same_as(&q.with_multiplier(2.0).unwrap()));
    }
}
