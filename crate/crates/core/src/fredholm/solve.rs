use alloc::vec::Vec;

use super::assemble::{assemble_system_as, nystrom_rule, Assembly, NystromSystem};
use super::FredholmProblem;
use crate::cubature::CubatureRule2D;
use crate::error::{Error, Result};
use crate::linsolve::{
    fold, gmres, lu_solve, stein_solve, unfold, GmresOptions, LinearOperator, Realization, SteinOptions,
    SystemOperator, DEFAULT_TOL,
};
use crate::math::norm2;
use crate::rules::RuleKind;

/// Largest system the automatic choice hands to dense LU.
pub const LU_MAX: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SolverChoice {
    /// LU up to [`LU_MAX`] unknowns, then GMRES-SK for separable kernels and GMRES-FM otherwise.
    #[default]
    Auto,
    /// Gaussian elimination with partial pivoting on the assembled matrix.
    Lu,
    /// GMRES on the assembled matrix.
    Gmres,
    /// GMRES with the factored matvec `q − u ∘ K (d ∘ q)`.
    GmresFm,
    /// GMRES with the separable matvec `Q − Φ¹ Q Φ²ᵀ`.
    GmresSk,
    /// Squared Smith iteration on the Stein equation; falls back to GMRES-SK
    /// when the spectral-radius precheck fails.
    Stein,
}

impl SolverChoice {
    pub fn name(self) -> &'static str {
        match self {
            SolverChoice::Auto => "auto",
            SolverChoice::Lu => "lu",
            SolverChoice::Gmres => "gmres",
            SolverChoice::GmresFm => "gmres-fm",
            SolverChoice::GmresSk => "gmres-sk",
            SolverChoice::Stein => "stein",
        }
    }

    fn assembly(self) -> Assembly {
        match self {
            SolverChoice::Auto => Assembly::Auto,
            SolverChoice::Lu | SolverChoice::Gmres => Assembly::Dense,
            SolverChoice::GmresFm => Assembly::Factored,
            SolverChoice::GmresSk | SolverChoice::Stein => Assembly::Separable,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    pub solver: SolverChoice,
    /// GMRES relative-residual tolerance.
    pub tol: f64,
    pub maxiter: Option<usize>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { solver: SolverChoice::Auto, tol: DEFAULT_TOL, maxiter: None }
    }
}

impl SolveOptions {
    pub fn with_solver(solver: SolverChoice) -> Self {
        SolveOptions { solver, ..SolveOptions::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SolverStats {
    /// The solver that produced the coefficients (never `Auto`).
    pub solver: SolverChoice,
    pub iterations: usize,
    /// GMRES relative residual history, starting at `1`; empty for direct solvers.
    pub residuals: Vec<f64>,
    pub matvecs: usize,
    pub flops: u64,
    /// Final relative residual as reported by the solver.
    pub residual: f64,
    /// Stein was requested but the precheck routed the solve to GMRES-SK.
    pub fallback: bool,
}

/// Solved coefficients `a*_j = (f u)(x_j)` bound to their rule and problem.
#[derive(Debug, Clone)]
pub struct NystromSolution {
    pub(super) kind: RuleKind,
    pub(super) problem: FredholmProblem,
    pub(super) rule: CubatureRule2D,
    pub(super) coeffs: Vec<f64>,
    pub(super) u_nodes: Vec<f64>,
    pub(super) stats: SolverStats,
}

impl NystromSolution {
    pub fn kind(&self) -> RuleKind {
        self.kind
    }

    pub fn problem(&self) -> &FredholmProblem {
        &self.problem
    }

    pub fn rule(&self) -> &CubatureRule2D {
        &self.rule
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn stats(&self) -> &SolverStats {
        &self.stats
    }

    /// The `n1, n2` the solution was requested with.
    pub fn sizes(&self) -> (usize, usize) {
        self.rule.sizes()
    }
}

fn auto_choice(n: usize, separable: bool) -> SolverChoice {
    if n <= LU_MAX {
        SolverChoice::Lu
    } else if separable {
        SolverChoice::GmresSk
    } else {
        SolverChoice::GmresFm
    }
}

/// Builds the rule, assembles the system in the realization the solver needs, and solves it.
pub fn solve_nystrom(
    p: &FredholmProblem,
    n1: usize,
    n2: usize,
    kind: RuleKind,
    opts: SolveOptions,
) -> Result<NystromSolution> {
    let rule = nystrom_rule(p, n1, n2, kind)?;
    let solver = match opts.solver {
        SolverChoice::Auto => auto_choice(rule.len(), p.kernel().is_separable()),
        s => s,
    };
    if matches!(solver, SolverChoice::GmresSk | SolverChoice::Stein) && !p.kernel().is_separable() {
        return Err(Error::Parameter(alloc::format!("solver {} needs a separable kernel", solver.name())));
    }
    let system = assemble_system_as(p, &rule, solver.assembly())?;
    let (coeffs, stats) = solve_system(&system, SolveOptions { solver, ..opts })?;
    Ok(NystromSolution { kind, problem: p.clone(), rule, coeffs, u_nodes: system.u_nodes, stats })
}

/// Solves an assembled system with the requested solver; a solver whose
/// realization differs from the assembled one works on a converted copy.
pub fn solve_system(system: &NystromSystem, opts: SolveOptions) -> Result<(Vec<f64>, SolverStats)> {
    let op = &system.operator;
    let h = &system.rhs;
    let n = op.dim();
    let solver = match opts.solver {
        SolverChoice::Auto => auto_choice(n, op.is_separable()),
        s => s,
    };
    let gmres_opts = GmresOptions { tol: opts.tol, maxiter: opts.maxiter, true_residual: false };
    let run_gmres = |op: &SystemOperator, solver: SolverChoice| -> Result<(Vec<f64>, SolverStats)> {
        let out = gmres(op, h, gmres_opts)?;
        let stats = SolverStats {
            solver,
            iterations: out.stats.iterations,
            residual: out.stats.final_residual(),
            residuals: out.stats.residuals,
            matvecs: out.stats.matvecs,
            flops: out.stats.flops,
            fallback: false,
        };
        Ok((out.x, stats))
    };

    let (x, stats) = match solver {
        SolverChoice::Lu => {
            let dense = match op.realization() {
                Realization::Dense(f) => lu_solve(f, h)?,
                _ => lu_solve(&op.to_dense(), h)?,
            };
            let mut r = alloc::vec![0.0; n];
            let flops = op.apply(&dense, &mut r);
            let res: Vec<f64> = h.iter().zip(&r).map(|(a, b)| a - b).collect();
            let hn = norm2(h);
            let residual = if hn == 0.0 { norm2(&res) } else { norm2(&res) / hn };
            (dense, SolverStats { solver, residual, matvecs: 1, flops, ..SolverStats::default() })
        }
        SolverChoice::Gmres => match op.realization() {
            Realization::Dense(_) => run_gmres(op, solver)?,
            _ => run_gmres(&SystemOperator::dense(op.n1(), op.n2(), op.to_dense())?, solver)?,
        },
        SolverChoice::GmresFm => match op.realization() {
            Realization::Factored { .. } => run_gmres(op, solver)?,
            _ => return Err(Error::Parameter("GMRES-FM needs a factored system".into())),
        },
        SolverChoice::GmresSk => match op.realization() {
            Realization::Separable { .. } => run_gmres(op, solver)?,
            _ => return Err(Error::Parameter("GMRES-SK needs a separable system".into())),
        },
        SolverChoice::Stein => {
            let Realization::Separable { phi1, phi2 } = op.realization() else {
                return Err(Error::Parameter("the Stein solver needs a separable system".into()));
            };
            let hm = fold(h, op.n1(), op.n2())?;
            match stein_solve(phi1, phi2, &hm, SteinOptions::default()) {
                Ok(out) => {
                    let stats = SolverStats {
                        solver,
                        iterations: out.iterations,
                        residual: out.residual,
                        ..SolverStats::default()
                    };
                    (unfold(&out.a), stats)
                }
                Err(Error::SteinSpectralRadius { .. }) => {
                    let (x, mut stats) = run_gmres(op, SolverChoice::GmresSk)?;
                    stats.fallback = true;
                    (x, stats)
                }
                Err(e) => return Err(e),
            }
        }
        SolverChoice::Auto => unreachable!(),
    };
    if let Some(i) = x.iter().position(|v| !v.is_finite()) {
        let [x1, x2] = system.rule.nodes()[i];
        return Err(Error::NonFinite { what: "solution", x1, x2 });
    }
    Ok((x, stats))
}
