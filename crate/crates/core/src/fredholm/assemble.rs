use alloc::sync::Arc;
use alloc::vec::Vec;

use super::{FredholmProblem, Kernel};
use crate::cubature::{cubature, CubatureKind, CubatureRule2D};
use crate::error::{Error, Result};
use crate::linsolve::{KernelMatrix, Matrix, RowFn, SystemOperator};
use crate::rules::RuleKind;

/// Largest matricized dimension for which `K_N` is stored rather than generated per row.
pub const STORE_KERNEL_MAX: usize = 8192;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Assembly {
    /// Separable when the kernel allows it, factored otherwise.
    #[default]
    Auto,
    Dense,
    Factored,
    Separable,
}

/// An assembled system `F_N a = h` together with the rule it was built on.
#[derive(Debug, Clone)]
pub struct NystromSystem {
    pub operator: SystemOperator,
    pub rhs: Vec<f64>,
    pub rule: CubatureRule2D,
    /// `u` at the nodes, in node order.
    pub u_nodes: Vec<f64>,
}

/// The Gauss or anti-Gauss cubature a problem is discretized with.
pub fn nystrom_rule(p: &FredholmProblem, n1: usize, n2: usize, kind: RuleKind) -> Result<CubatureRule2D> {
    let (w1, w2) = p.weights();
    let ckind = match kind {
        RuleKind::Gauss => CubatureKind::Gauss,
        RuleKind::AntiGauss => CubatureKind::AntiGauss,
    };
    cubature(ckind, w1, w2, n1, n2, p.node_policy())
}

pub fn assemble_system(p: &FredholmProblem, rule: &CubatureRule2D) -> Result<NystromSystem> {
    assemble_system_as(p, rule, Assembly::Auto)
}

pub fn assemble_system_as(p: &FredholmProblem, rule: &CubatureRule2D, how: Assembly) -> Result<NystromSystem> {
    if rule.kind() == CubatureKind::Averaged {
        return Err(Error::Parameter("Nyström systems need a Gauss or anti-Gauss rule, not the averaged one".into()));
    }
    let (n1, n2) = rule.grid_shape();
    let u = p.space_weight();
    let mut u_nodes = Vec::with_capacity(rule.len());
    let mut rhs = Vec::with_capacity(rule.len());
    for &[x1, x2] in rule.nodes() {
        let un = u.eval(x1, x2);
        if !(un > 0.0 && un.is_finite()) || touches_zero(&u, x1, x2) {
            return Err(Error::VanishingSpaceWeight { x1, x2 });
        }
        let h = p.rhs(x1, x2) * un;
        if !h.is_finite() {
            return Err(Error::NonFinite { what: "right-hand side", x1, x2 });
        }
        u_nodes.push(un);
        rhs.push(h);
    }

    let how = match how {
        Assembly::Auto if p.kernel().is_separable() => Assembly::Separable,
        Assembly::Auto => Assembly::Factored,
        other => other,
    };
    let operator = match how {
        Assembly::Separable => separable_operator(p, rule)?,
        Assembly::Factored | Assembly::Dense => {
            let d: Vec<f64> = rule.weights().iter().zip(&u_nodes).map(|(w, un)| w / un).collect();
            let n = rule.len();
            let kernel = if n <= STORE_KERNEL_MAX || how == Assembly::Dense {
                KernelMatrix::Stored(kernel_matrix(p, rule)?)
            } else {
                KernelMatrix::OnTheFly { dim: n, row: kernel_rows(p, rule) }
            };
            if how == Assembly::Dense {
                let KernelMatrix::Stored(mut f) = kernel else { unreachable!() };
                for j in 0..n {
                    let col = f.col_mut(j);
                    for (i, v) in col.iter_mut().enumerate() {
                        *v = -u_nodes[i] * *v * d[j];
                    }
                    col[j] += 1.0;
                }
                SystemOperator::dense(n1, n2, f)?
            } else {
                SystemOperator::factored(n1, n2, u_nodes.clone(), d, kernel)?
            }
        }
        Assembly::Auto => unreachable!(),
    };
    Ok(NystromSystem { operator, rhs, rule: rule.clone(), u_nodes })
}

/// A node that is an endpoint up to rounding, on a side where `u` has a
/// positive exponent. Endpoint anti-Gauss nodes come out of the eigensolver
/// within a few ulps of `±1`, which would otherwise give a tiny positive `u`.
fn touches_zero(u: &super::SpaceWeight, x1: f64, x2: f64) -> bool {
    let near = |t: f64| crate::math::abs(t) <= 8.0 * f64::EPSILON;
    [(1, x1), (2, x2)].into_iter().any(|(axis, x)| {
        let (g, d) = u.axis(axis);
        (g > 0.0 && near(1.0 - x)) || (d > 0.0 && near(1.0 + x))
    })
}

/// `K_{ij} = m·k(x_j, x_i)`.
fn kernel_matrix(p: &FredholmProblem, rule: &CubatureRule2D) -> Result<Matrix> {
    let nodes = rule.nodes();
    let n = nodes.len();
    let mut k = Matrix::zeros(n, n);
    for (j, &[x1, x2]) in nodes.iter().enumerate() {
        let col = k.col_mut(j);
        for (c, &[y1, y2]) in col.iter_mut().zip(nodes) {
            *c = p.kernel_value(x1, x2, y1, y2);
        }
        if let Some(i) = col.iter().position(|v| !v.is_finite()) {
            let [y1, y2] = nodes[i];
            return Err(Error::NonFinite { what: "kernel", x1: y1, x2: y2 });
        }
    }
    Ok(k)
}

fn kernel_rows(p: &FredholmProblem, rule: &CubatureRule2D) -> RowFn {
    let nodes: Arc<[[f64; 2]]> = rule.nodes().into();
    let p = p.clone();
    Arc::new(move |i, out: &mut [f64]| {
        let [y1, y2] = nodes[i];
        for (o, &[x1, x2]) in out.iter_mut().zip(nodes.iter()) {
            *o = p.kernel_value(x1, x2, y1, y2);
        }
    })
}

/// `Φ^ℓ_{ij} = λ_j u_ℓ(x_i)/u_ℓ(x_j) k_ℓ(x_j, x_i)`, the multiplier folded into `Φ¹`.
fn separable_operator(p: &FredholmProblem, rule: &CubatureRule2D) -> Result<SystemOperator> {
    let u = p.space_weight();
    let (r1, r2) = (rule.rule1(), rule.rule2());
    let phi = |axis: usize, r: &crate::rules::QuadRule1D, k: &dyn Fn(f64, f64) -> f64, scale: f64| -> Result<Matrix> {
        let x = r.nodes();
        let ux: Vec<f64> = x.iter().map(|&t| u.eval_axis(axis, t)).collect();
        let m = Matrix::from_fn(x.len(), x.len(), |i, j| scale * r.weights()[j] * ux[i] / ux[j] * k(x[j], x[i]));
        if let Some(pos) = m.data().iter().position(|v| !v.is_finite()) {
            let (i, j) = (pos % x.len(), pos / x.len());
            return Err(Error::NonFinite { what: "kernel", x1: x[j], x2: x[i] });
        }
        Ok(m)
    };
    let (phi1, phi2) = match p.kernel() {
        Kernel::Separable(k1, k2) => (phi(1, r1, &**k1, p.multiplier())?, phi(2, r2, &**k2, 1.0)?),
        Kernel::Zero => (Matrix::zeros(r1.len(), r1.len()), Matrix::zeros(r2.len(), r2.len())),
        Kernel::General(_) => {
            return Err(Error::Parameter("the separable realization needs a separable kernel".into()));
        }
    };
    SystemOperator::separable(phi1, phi2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fredholm::SpaceWeight;
    use crate::linsolve::LinearOperator;
    use crate::orthopoly::JacobiWeight;

    fn separable_problem() -> FredholmProblem {
        FredholmProblem::new(
            JacobiWeight::CHEBYSHEV_SECOND,
            JacobiWeight::LEGENDRE,
            SpaceWeight::new(0.5, 0.25, 0.0, 0.5).unwrap(),
            Kernel::separable(|x, y| 0.3 * (-(1.0 + x) * (1.0 + y)).exp(), |x, y| (x - y).cos()),
            |y1, y2| y1 + y2,
        )
        .unwrap()
        .with_multiplier(0.7)
        .unwrap()
    }

    #[test]
    fn realizations_agree() {
        let p = separable_problem();
        for kind in [RuleKind::Gauss, RuleKind::AntiGauss] {
            let rule = nystrom_rule(&p, 4, 5, kind).unwrap();
            let sep = assemble_system_as(&p, &rule, Assembly::Separable).unwrap();
            let fac = assemble_system_as(&p, &rule, Assembly::Factored).unwrap();
            let den = assemble_system_as(&p, &rule, Assembly::Dense).unwrap();
            assert!(sep.operator.is_separable());
            let n = rule.len();
            let x: Vec<f64> = (0..n).map(|i| (i as f64 * 0.37).sin()).collect();
            let mut ys = [alloc::vec![0.0; n], alloc::vec![0.0; n], alloc::vec![0.0; n]];
            sep.operator.apply(&x, &mut ys[0]);
            fac.operator.apply(&x, &mut ys[1]);
            den.operator.apply(&x, &mut ys[2]);
            for i in 0..n {
                assert!((ys[0][i] - ys[1][i]).abs() < 1e-14);
                assert!((ys[0][i] - ys[2][i]).abs() < 1e-14);
            }
            assert_eq!(sep.rhs, fac.rhs);
        }
    }

    #[test]
    fn vanishing_weight_at_endpoint_node() {
        let p = FredholmProblem::new(
            JacobiWeight::CHEBYSHEV_FIRST,
            JacobiWeight::LEGENDRE,
            SpaceWeight::new(0.25, 0.0, 0.0, 0.0).unwrap(),
            Kernel::Zero,
            |_, _| 1.0,
        )
        .unwrap();
        let rule = nystrom_rule(&p, 3, 3, RuleKind::AntiGauss).unwrap();
        assert!(matches!(assemble_system(&p, &rule), Err(Error::VanishingSpaceWeight { .. })));
        let rule = nystrom_rule(&p, 3, 3, RuleKind::Gauss).unwrap();
        assert!(assemble_system(&p, &rule).is_ok());
    }

    #[test]
    fn general_kernel_cannot_be_separable() {
        let p = FredholmProblem::new(
            JacobiWeight::LEGENDRE,
            JacobiWeight::LEGENDRE,
            SpaceWeight::ONE,
            Kernel::general(|x1, x2, y1, y2| x1 * y2 + x2 * y1),
            |_, _| 1.0,
        )
        .unwrap();
        let rule = nystrom_rule(&p, 2, 2, RuleKind::Gauss).unwrap();
        assert!(assemble_system_as(&p, &rule, Assembly::Separable).is_err());
        assert!(!assemble_system(&p, &rule).unwrap().operator.is_separable());
    }
}
