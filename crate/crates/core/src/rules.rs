//! Univariate Gauss–Jacobi and anti-Gauss rules (Golub–Welsch).

use alloc::vec::Vec;

use crate::error::Result;
use crate::math::compensated_sum;
use crate::orthopoly::{recurrence_coeffs, JacobiWeight};
use crate::tridiag::{eig_tridiag, SymTridiag};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RuleKind {
    Gauss,
    AntiGauss,
}

impl RuleKind {
    pub fn name(self) -> &'static str {
        match self {
            RuleKind::Gauss => "gauss",
            RuleKind::AntiGauss => "antigauss",
        }
    }
}

/// Nodes and positive weights of a univariate rule for a Jacobi weight.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadRule1D {
    kind: RuleKind,
    weight: JacobiWeight,
    base: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    contained: bool,
}

impl QuadRule1D {
    pub fn kind(&self) -> RuleKind {
        self.kind
    }

    pub fn weight_fn(&self) -> JacobiWeight {
        self.weight
    }

    /// The `n` the rule was built for: `n` Gauss nodes or `n + 1` anti-Gauss nodes.
    pub fn base(&self) -> usize {
        self.base
    }

    pub fn nodes(&self) -> &[f64] {
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

    /// False for an anti-Gauss rule whose weight violates the node-containment
    /// conditions, i.e. whose extreme nodes may leave `[-1, 1]`.
    pub fn is_contained(&self) -> bool {
        self.contained
    }

    pub fn apply(&self, f: impl Fn(f64) -> f64) -> f64 {
        compensated_sum(self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)))
    }
}

fn rule_from_matrix(
    kind: RuleKind,
    weight: JacobiWeight,
    base: usize,
    b0: f64,
    matrix: &SymTridiag,
    contained: bool,
) -> Result<QuadRule1D> {
    let eig = eig_tridiag(matrix)?;
    let weights = eig.firstcomp.iter().map(|v| b0 * v * v).collect();
    Ok(QuadRule1D { kind, weight, base, nodes: eig.values, weights, contained })
}

/// `n`-point Gauss–Jacobi rule.
pub fn gauss_rule(w: JacobiWeight, n: usize) -> Result<QuadRule1D> {
    let c = recurrence_coeffs(w, n)?;
    let j = c.jacobi_matrix(n)?;
    rule_from_matrix(RuleKind::Gauss, w, n, c.b()[0], &j, true)
}

/// `(n + 1)`-point anti-Gauss rule paired with the `n`-point Gauss rule.
///
/// Built even when [`nodes_contained`] is false; the rule is then flagged.
pub fn antigauss_rule(w: JacobiWeight, n: usize) -> Result<QuadRule1D> {
    let c = recurrence_coeffs(w, n)?;
    let psi = c.antigauss_matrix(n)?;
    rule_from_matrix(RuleKind::AntiGauss, w, n, c.b()[0], &psi, nodes_contained(w))
}

pub fn rule(kind: RuleKind, w: JacobiWeight, n: usize) -> Result<QuadRule1D> {
    match kind {
        RuleKind::Gauss => gauss_rule(w, n),
        RuleKind::AntiGauss => antigauss_rule(w, n),
    }
}

/// Sufficient conditions for every anti-Gauss node to lie in `[-1, 1]`.
pub fn nodes_contained(w: JacobiWeight) -> bool {
    let (a, b) = (w.alpha(), w.beta());
    let s = a + b;
    a >= -0.5
        && b >= -0.5
        && (2.0 * a + 1.0) * (s + 2.0) + 0.5 * (a + 1.0) * s * (s + 1.0) >= 0.0
        && (2.0 * b + 1.0) * (s + 2.0) + 0.5 * (b + 1.0) * s * (s + 1.0) >= 0.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn legendre_two_points() {
        let r = gauss_rule(JacobiWeight::LEGENDRE, 2).unwrap();
        let x = 1.0 / 3f64.sqrt();
        assert!((r.nodes()[0] + x).abs() < 1e-15 && (r.nodes()[1] - x).abs() < 1e-15);
        assert!(r.weights().iter().all(|w| (w - 1.0).abs() < 1e-14));
    }

    #[test]
    fn chebyshev_closed_form() {
        let r = gauss_rule(JacobiWeight::CHEBYSHEV_FIRST, 4).unwrap();
        for (j, (&x, &w)) in r.nodes().iter().zip(r.weights()).enumerate() {
            // ascending order: cos((2(4-j)-1)π/8)
            let expected = ((2.0 * (4 - j) as f64 - 1.0) * PI / 8.0).cos();
            assert!((x - expected).abs() < 1e-15, "node {j}");
            assert!((w - PI / 4.0).abs() < 1e-14);
        }
    }

    #[test]
    fn single_node_rules() {
        let w = JacobiWeight::new(0.3, -0.2).unwrap();
        let c = recurrence_coeffs(w, 1).unwrap();
        let r = gauss_rule(w, 1).unwrap();
        assert_eq!(r.nodes(), &[c.a()[0]]);
        assert!((r.weights()[0] - c.b()[0]).abs() < 1e-15);
    }

    #[test]
    fn legendre_antigauss_one() {
        let r = antigauss_rule(JacobiWeight::LEGENDRE, 1).unwrap();
        let x = (2.0f64 / 3.0).sqrt();
        assert_eq!(r.len(), 2);
        assert!((r.nodes()[0] + x).abs() < 1e-15 && (r.nodes()[1] - x).abs() < 1e-15);
        assert!(r.weights().iter().all(|w| (w - 1.0).abs() < 1e-14));
    }

    #[test]
    fn chebyshev_antigauss_hits_endpoints() {
        for n in 1..20 {
            let r = antigauss_rule(JacobiWeight::CHEBYSHEV_FIRST, n).unwrap();
            assert!((r.nodes()[0] + 1.0).abs() < 1e-14, "n = {n}");
            assert!((r.nodes()[n] - 1.0).abs() < 1e-14, "n = {n}");
            assert!((r.apply(|_| 1.0) - PI).abs() < 1e-13);
        }
    }

    #[test]
    fn containment_conditions() {
        assert!(nodes_contained(JacobiWeight::LEGENDRE));
        assert!(nodes_contained(JacobiWeight::CHEBYSHEV_FIRST));
        assert!(nodes_contained(JacobiWeight::CHEBYSHEV_SECOND));
        assert!(nodes_contained(JacobiWeight::CHEBYSHEV_THIRD));
        assert!(nodes_contained(JacobiWeight::CHEBYSHEV_FOURTH));
        assert!(!nodes_contained(JacobiWeight::new(-0.9, 0.0).unwrap()));
        let flagged = antigauss_rule(JacobiWeight::new(-0.9, 0.0).unwrap(), 5).unwrap();
        assert!(!flagged.is_contained());
        assert!(flagged.weights().iter().all(|&w| w > 0.0));
    }
}
