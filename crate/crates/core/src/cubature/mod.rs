//! Tensor-product Gauss, anti-Gauss and averaged cubature on `[-1, 1]²` for
//! the product weight `w1(x1) w2(x2)`.
//!
//! Nodes are stored in lexicographic order with the first coordinate running
//! fastest: node `ℓ = i1 + i2·n1` is `(x_{i1}, x_{i2})`.

mod bracketing;

use alloc::vec::Vec;

pub use bracketing::{
    bracketing_diagnostic, chebyshev_bracketing_terms, expansion_coefficients, BracketingReport,
    ChebyshevBracketing,
};

use crate::error::{Error, Result};
use crate::math::compensated_sum;
use crate::orthopoly::JacobiWeight;
use crate::rules::{antigauss_rule, gauss_rule, QuadRule1D, RuleKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CubatureKind {
    Gauss,
    AntiGauss,
    Averaged,
}

impl CubatureKind {
    pub fn name(self) -> &'static str {
        match self {
            CubatureKind::Gauss => "gauss",
            CubatureKind::AntiGauss => "antigauss",
            CubatureKind::Averaged => "averaged",
        }
    }
}

/// What to do with an anti-Gauss factor whose weight fails the
/// node-containment conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NodePolicy {
    #[default]
    Reject,
    Allow,
}

/// One tensor-product grid with a scalar factor on its weights.
#[derive(Debug, Clone, PartialEq)]
pub struct RuleBlock {
    pub rule1: QuadRule1D,
    pub rule2: QuadRule1D,
    pub factor: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CubatureRule2D {
    kind: CubatureKind,
    n1: usize,
    n2: usize,
    blocks: Vec<RuleBlock>,
    nodes: Vec<[f64; 2]>,
    weights: Vec<f64>,
}

impl CubatureRule2D {
    fn from_blocks(kind: CubatureKind, n1: usize, n2: usize, blocks: Vec<RuleBlock>) -> Self {
        let total = blocks.iter().map(|b| b.rule1.len() * b.rule2.len()).sum();
        let mut nodes = Vec::with_capacity(total);
        let mut weights = Vec::with_capacity(total);
        for b in &blocks {
            for (&x2, &l2) in b.rule2.nodes().iter().zip(b.rule2.weights()) {
                for (&x1, &l1) in b.rule1.nodes().iter().zip(b.rule1.weights()) {
                    nodes.push([x1, x2]);
                    weights.push(b.factor * l1 * l2);
                }
            }
        }
        CubatureRule2D { kind, n1, n2, blocks, nodes, weights }
    }

    pub fn kind(&self) -> CubatureKind {
        self.kind
    }

    /// The `(n1, n2)` the rule was requested for (anti-Gauss grids have one more point per axis).
    pub fn sizes(&self) -> (usize, usize) {
        (self.n1, self.n2)
    }

    pub fn blocks(&self) -> &[RuleBlock] {
        &self.blocks
    }

    /// Univariate factors of a Gauss or anti-Gauss rule; the Gauss pair for averaged rules.
    pub fn rule1(&self) -> &QuadRule1D {
        &self.blocks[0].rule1
    }

    pub fn rule2(&self) -> &QuadRule1D {
        &self.blocks[0].rule2
    }

    /// Grid shape `(rule1.len(), rule2.len())` of a single-block rule.
    pub fn grid_shape(&self) -> (usize, usize) {
        (self.rule1().len(), self.rule2().len())
    }

    pub fn weight_fns(&self) -> (JacobiWeight, JacobiWeight) {
        (self.rule1().weight_fn(), self.rule2().weight_fn())
    }

    pub fn nodes(&self) -> &[[f64; 2]] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `Σ weight·f(node)` with compensated summation in node order.
    pub fn apply(&self, f: impl Fn(f64, f64) -> f64) -> Result<f64> {
        let mut terms = Vec::with_capacity(self.len());
        for (&[x1, x2], &w) in self.nodes.iter().zip(&self.weights) {
            let v = f(x1, x2);
            if !v.is_finite() {
                return Err(Error::NonFinite { what: "integrand", x1, x2 });
            }
            terms.push(w * v);
        }
        Ok(compensated_sum(terms))
    }
}

fn check_sizes(n1: usize, n2: usize) -> Result<()> {
    if n1 == 0 || n2 == 0 {
        return Err(Error::Parameter(alloc::format!("rule sizes must be >= 1, got ({n1}, {n2})")));
    }
    Ok(())
}

fn checked_antigauss(w: JacobiWeight, n: usize, axis: usize, policy: NodePolicy) -> Result<QuadRule1D> {
    let r = antigauss_rule(w, n)?;
    if !r.is_contained() && policy == NodePolicy::Reject {
        return Err(Error::NodesOutside { axis, alpha: w.alpha(), beta: w.beta() });
    }
    Ok(r)
}

/// `n1·n2`-point Gauss cubature.
pub fn gauss_cubature(w1: JacobiWeight, w2: JacobiWeight, n1: usize, n2: usize) -> Result<CubatureRule2D> {
    check_sizes(n1, n2)?;
    let block = RuleBlock { rule1: gauss_rule(w1, n1)?, rule2: gauss_rule(w2, n2)?, factor: 1.0 };
    Ok(CubatureRule2D::from_blocks(CubatureKind::Gauss, n1, n2, alloc::vec![block]))
}

/// `(n1+1)(n2+1)`-point anti-Gauss cubature; rejects weights failing the
/// containment conditions.
pub fn antigauss_cubature(w1: JacobiWeight, w2: JacobiWeight, n1: usize, n2: usize) -> Result<CubatureRule2D> {
    cubature(CubatureKind::AntiGauss, w1, w2, n1, n2, NodePolicy::Reject)
}

/// Union of the Gauss and anti-Gauss grids, each with halved weights.
pub fn averaged_cubature(w1: JacobiWeight, w2: JacobiWeight, n1: usize, n2: usize) -> Result<CubatureRule2D> {
    cubature(CubatureKind::Averaged, w1, w2, n1, n2, NodePolicy::Reject)
}

pub fn cubature(
    kind: CubatureKind,
    w1: JacobiWeight,
    w2: JacobiWeight,
    n1: usize,
    n2: usize,
    policy: NodePolicy,
) -> Result<CubatureRule2D> {
    check_sizes(n1, n2)?;
    let anti = || -> Result<RuleBlock> {
        Ok(RuleBlock {
            rule1: checked_antigauss(w1, n1, 1, policy)?,
            rule2: checked_antigauss(w2, n2, 2, policy)?,
            factor: 1.0,
        })
    };
    match kind {
        CubatureKind::Gauss => gauss_cubature(w1, w2, n1, n2),
        CubatureKind::AntiGauss => Ok(CubatureRule2D::from_blocks(kind, n1, n2, alloc::vec![anti()?])),
        CubatureKind::Averaged => {
            let g = RuleBlock { rule1: gauss_rule(w1, n1)?, rule2: gauss_rule(w2, n2)?, factor: 0.5 };
            let a = RuleBlock { factor: 0.5, ..anti()? };
            Ok(CubatureRule2D::from_blocks(kind, n1, n2, alloc::vec![g, a]))
        }
    }
}

/// Rule kind of a univariate factor used by a single-block cubature kind.
pub fn factor_kind(kind: CubatureKind) -> Option<RuleKind> {
    match kind {
        CubatureKind::Gauss => Some(RuleKind::Gauss),
        CubatureKind::AntiGauss => Some(RuleKind::AntiGauss),
        CubatureKind::Averaged => None,
    }
}

/// Gauss, anti-Gauss and averaged values of one integral and the estimate
/// `R^[1] = (A − G)/2` of the Gauss error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubatureEstimates {
    pub gauss: f64,
    pub antigauss: f64,
    pub averaged: f64,
    pub error_estimate: f64,
}

pub fn estimates(
    f: impl Fn(f64, f64) -> f64,
    w1: JacobiWeight,
    w2: JacobiWeight,
    n1: usize,
    n2: usize,
    policy: NodePolicy,
) -> Result<CubatureEstimates> {
    let g = gauss_cubature(w1, w2, n1, n2)?.apply(&f)?;
    let a = cubature(CubatureKind::AntiGauss, w1, w2, n1, n2, policy)?.apply(&f)?;
    Ok(CubatureEstimates { gauss: g, antigauss: a, averaged: 0.5 * (g + a), error_estimate: 0.5 * (a - g) })
}

/// `(A_{n1+1,n2+1}(f) − G_{n1,n2}(f)) / 2`.
pub fn error_estimate(f: impl Fn(f64, f64) -> f64, w1: JacobiWeight, w2: JacobiWeight, n1: usize, n2: usize) -> Result<f64> {
    Ok(estimates(f, w1, w2, n1, n2, NodePolicy::Reject)?.error_estimate)
}

#[cfg(test)]
mod tests {
    use super::*;

    const LEG: JacobiWeight = JacobiWeight::LEGENDRE;

    #[test]
    fn constants_and_odd_functions() {
        let w1 = JacobiWeight::new(0.3, -0.4).unwrap();
        let w2 = JacobiWeight::CHEBYSHEV_SECOND;
        let total = w1.moment0() * w2.moment0();
        for kind in [CubatureKind::Gauss, CubatureKind::AntiGauss, CubatureKind::Averaged] {
            let r = cubature(kind, w1, w2, 5, 3, NodePolicy::Reject).unwrap();
            assert!((r.apply(|_, _| 1.0).unwrap() - total).abs() < 1e-13 * total, "{kind:?}");
            assert!(r.weights().iter().all(|&w| w > 0.0));
        }
        let g = gauss_cubature(LEG, LEG, 4, 7).unwrap();
        assert!(g.apply(|x, y| x * y).unwrap().abs() < 1e-15);
    }

    #[test]
    fn quadratic_exactness() {
        let g = gauss_cubature(LEG, LEG, 2, 2).unwrap();
        let v = g.apply(|x, y| x * x + y * y).unwrap();
        assert!((v - 8.0 / 3.0).abs() < 1e-14);
        assert_eq!(g.apply(|_, _| 0.0).unwrap(), 0.0);
    }

    #[test]
    fn node_order_and_counts() {
        let g = gauss_cubature(LEG, LEG, 3, 2).unwrap();
        let r1 = g.rule1().nodes().to_vec();
        let r2 = g.rule2().nodes().to_vec();
        for i2 in 0..2 {
            for i1 in 0..3 {
                assert_eq!(g.nodes()[i1 + 3 * i2], [r1[i1], r2[i2]]);
            }
        }
        let avg = averaged_cubature(LEG, LEG, 3, 5).unwrap();
        assert_eq!(avg.len(), 3 * 5 + 4 * 6);
    }

    #[test]
    fn non_finite_integrand() {
        let g = gauss_cubature(LEG, LEG, 2, 2).unwrap();
        let err = g.apply(|x, _| if x > 0.0 { f64::NAN } else { 1.0 }).unwrap_err();
        assert!(matches!(err, Error::NonFinite { .. }));
    }

    #[test]
    fn flagged_rules_need_override() {
        let bad = JacobiWeight::new(-0.5, 0.0).unwrap();
        assert!(matches!(antigauss_cubature(LEG, bad, 4, 4), Err(Error::NodesOutside { axis: 2, .. })));
        assert!(cubature(CubatureKind::AntiGauss, LEG, bad, 4, 4, NodePolicy::Allow).is_ok());
        assert!(gauss_cubature(LEG, bad, 4, 4).is_ok());
    }

    #[test]
    fn estimate_is_gauss_error_on_extended_class() {
        // degree 2·3+1 = 7 in x1, 2·2−1 = 3 in x2
        let p = |x: f64, y: f64| x.powi(7) + 0.5 * x.powi(6) * y.powi(2) - y.powi(3) + 1.0;
        let exact = 0.5 * (2.0 / 7.0) * (2.0 / 3.0) + 2.0 * 2.0;
        let e = estimates(p, LEG, LEG, 3, 2, NodePolicy::Reject).unwrap();
        assert!((e.error_estimate - (exact - e.gauss)).abs() < 1e-14);
        assert!((e.averaged - exact).abs() < 1e-14);
    }
}
