//! Runs registered cases at given sizes and compares against the stored values.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use squarequad_core::cubature::{estimates, gauss_cubature};
use squarequad_core::fredholm::{
    assemble_system_as, condition_number_inf, error_grid_points, nystrom_rule, solve_nystrom, weighted_relative_error,
    Assembly, FredholmProblem, NystromSolution, SolveOptions, SolverChoice,
};
use squarequad_core::linsolve::DEFAULT_TOL;
use squarequad_core::rules::RuleKind;

use crate::error::{AppError, AppResult};
use crate::registry::{self, CaseSpec, CubatureCase, EquationCase, Expected, Quantity, ReferenceSolution, TestCase};

/// Environment variable naming the reference-solution cache directory.
pub const CACHE_ENV: &str = "SQUAREQUAD_CACHE";

#[derive(Debug, Clone)]
pub struct RunContext {
    pub cache_dir: Option<PathBuf>,
    /// Rebuild cached references even when a cache file exists.
    pub refresh: bool,
    /// Overrides the case's solver.
    pub solver: Option<SolverChoice>,
    /// Overrides the case's condition-number cap; `0` skips the estimate.
    pub kappa_cap: Option<usize>,
    pub tol: f64,
}

impl Default for RunContext {
    fn default() -> Self {
        RunContext { cache_dir: None, refresh: false, solver: None, kappa_cap: None, tol: DEFAULT_TOL }
    }
}

impl RunContext {
    /// Picks the cache directory up from [`CACHE_ENV`].
    pub fn from_env() -> Self {
        RunContext { cache_dir: std::env::var_os(CACHE_ENV).map(PathBuf::from), ..RunContext::default() }
    }
}

/// A computed value next to the stored one it is checked against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Check {
    pub quantity: Quantity,
    pub computed: Option<f64>,
    pub expected: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RowReport {
    pub sizes: (usize, usize),
    pub values: BTreeMap<Quantity, f64>,
    pub checks: Vec<Check>,
}

impl RowReport {
    pub fn value(&self, q: Quantity) -> Option<f64> {
        self.values.get(&q).copied()
    }

    pub fn check(&self, q: Quantity) -> Option<&Check> {
        self.checks.iter().find(|c| c.quantity == q)
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseReport {
    pub case: &'static str,
    pub rows: Vec<RowReport>,
}

impl CaseReport {
    pub fn row(&self, sizes: (usize, usize)) -> Option<&RowReport> {
        self.rows.iter().find(|r| r.sizes == sizes)
    }

    pub fn passed(&self) -> bool {
        self.rows.iter().all(RowReport::passed)
    }
}

fn checks_for(case: &TestCase, sizes: (usize, usize), values: &BTreeMap<Quantity, f64>) -> Vec<Check> {
    case.expected
        .iter()
        .filter(|e| e.sizes == sizes)
        .map(|e: &Expected| {
            let computed = values.get(&e.quantity).copied();
            Check { quantity: e.quantity, computed, expected: e.value, pass: computed.is_some_and(|c| e.tol.accepts(c, e.value)) }
        })
        .collect()
}

pub fn run_case_id(id: &str, sizes: Option<&[(usize, usize)]>, ctx: &RunContext) -> AppResult<CaseReport> {
    let case = registry::get_case(id).ok_or_else(|| AppError::usage(format!("unknown case id '{id}'")))?;
    run_case(case, sizes.unwrap_or(case.sizes), ctx)
}

pub fn run_case(case: &'static TestCase, sizes: &[(usize, usize)], ctx: &RunContext) -> AppResult<CaseReport> {
    let rows = match case.spec {
        CaseSpec::Cubature(c) => {
            let exact = cubature_reference(&c)?;
            sizes
                .iter()
                .map(|&n| {
                    let values = cubature_row(&c, exact, n)?;
                    Ok(RowReport { sizes: n, checks: checks_for(case, n, &values), values })
                })
                .collect::<AppResult<Vec<_>>>()?
        }
        CaseSpec::Equation(eq) => {
            let problem = eq.problem();
            let reference = reference_grid(case.id, &eq, &problem, ctx)?;
            sizes
                .iter()
                .map(|&n| {
                    let values = equation_row(&eq, &problem, &reference, n, ctx)?;
                    Ok(RowReport { sizes: n, checks: checks_for(case, n, &values), values })
                })
                .collect::<AppResult<Vec<_>>>()?
        }
    };
    Ok(CaseReport { case: case.id, rows })
}

fn integrand_of(c: &CubatureCase) -> registry::Integrand {
    registry::integrand(c.integrand).expect("registered integrand").f
}

/// The Gauss value at the case's reference sizes, taken as the exact integral.
pub fn cubature_reference(c: &CubatureCase) -> AppResult<f64> {
    let (m1, m2) = c.reference;
    Ok(gauss_cubature(c.w1, c.w2, m1, m2)?.apply(integrand_of(c))?)
}

fn cubature_row(c: &CubatureCase, exact: f64, (n1, n2): (usize, usize)) -> AppResult<BTreeMap<Quantity, f64>> {
    let e = estimates(integrand_of(c), c.w1, c.w2, n1, n2, c.policy)?;
    Ok(BTreeMap::from([
        (Quantity::ErrGauss, exact - e.gauss),
        (Quantity::ErrAnti, exact - e.antigauss),
        (Quantity::ErrAveraged, exact - e.averaged),
        (Quantity::ErrEstimate, e.error_estimate),
    ]))
}

/// Gauss and anti-Gauss solutions of one row, with the solver the case asks for.
pub fn solve_pair(
    eq: &EquationCase,
    problem: &FredholmProblem,
    (n1, n2): (usize, usize),
    ctx: &RunContext,
) -> AppResult<(NystromSolution, NystromSolution)> {
    let opts = SolveOptions { solver: ctx.solver.unwrap_or(eq.solver), tol: ctx.tol, maxiter: None };
    let g = solve_nystrom(problem, n1, n2, RuleKind::Gauss, opts)?;
    let a = solve_nystrom(problem, n1, n2, RuleKind::AntiGauss, opts)?;
    Ok((g, a))
}

fn is_krylov(s: SolverChoice) -> bool {
    matches!(s, SolverChoice::Gmres | SolverChoice::GmresFm | SolverChoice::GmresSk)
}

fn equation_row(
    eq: &EquationCase,
    problem: &FredholmProblem,
    reference: &[f64],
    n: (usize, usize),
    ctx: &RunContext,
) -> AppResult<BTreeMap<Quantity, f64>> {
    let (g, a) = solve_pair(eq, problem, n, ctx)?;
    let fg = g.eval_error_grid()?;
    let fa = a.eval_error_grid()?;
    let favg: Vec<f64> = fg.data().iter().zip(fa.data()).map(|(x, y)| 0.5 * (x + y)).collect();
    let mut values = BTreeMap::from([
        (Quantity::XiGauss, weighted_relative_error(fg.data(), reference)?),
        (Quantity::XiAnti, weighted_relative_error(fa.data(), reference)?),
        (Quantity::XiAveraged, weighted_relative_error(&favg, reference)?),
    ]);
    if is_krylov(g.stats().solver) {
        values.insert(Quantity::ItersGauss, g.stats().iterations as f64);
    }
    if is_krylov(a.stats().solver) {
        values.insert(Quantity::ItersAnti, a.stats().iterations as f64);
    }
    drop((g, a));
    let cap = ctx.kappa_cap.unwrap_or(eq.kappa_cap);
    for (kind, q) in [(RuleKind::Gauss, Quantity::KappaGauss), (RuleKind::AntiGauss, Quantity::KappaAnti)] {
        if let Some(k) = kappa(problem, n, kind, cap)? {
            values.insert(q, k);
        }
    }
    Ok(values)
}

/// `κ_∞` of the system, or `None` when it is larger than `cap`.
pub fn kappa(problem: &FredholmProblem, (n1, n2): (usize, usize), kind: RuleKind, cap: usize) -> AppResult<Option<f64>> {
    let rule = nystrom_rule(problem, n1, n2, kind)?;
    if rule.len() > cap {
        return Ok(None);
    }
    let system = assemble_system_as(problem, &rule, Assembly::Dense)?;
    Ok(Some(condition_number_inf(&system.operator, cap)?))
}

#[derive(Debug, Serialize, Deserialize)]
struct CachedReference {
    case: String,
    sizes: (usize, usize),
    grid: Vec<f64>,
    /// Weighted values `f u` on the error grid, `y1` fastest.
    values: Vec<f64>,
}

pub fn cache_path(dir: &Path, case_id: &str, (n1, n2): (usize, usize)) -> PathBuf {
    dir.join(format!("{case_id}-{n1}x{n2}.json"))
}

/// Weighted reference values on the error grid, from the exact solution or
/// from a large Gauss solve (cached when a cache directory is set).
pub fn reference_grid(case_id: &str, eq: &EquationCase, problem: &FredholmProblem, ctx: &RunContext) -> AppResult<Vec<f64>> {
    let grid = error_grid_points();
    let (m1, m2) = match eq.reference {
        ReferenceSolution::Exact(f) => {
            let u = problem.space_weight();
            return Ok(grid.iter().flat_map(|&y2| grid.iter().map(move |&y1| f(y1, y2) * u.eval(y1, y2))).collect());
        }
        ReferenceSolution::Gauss(m1, m2) => (m1, m2),
    };
    let path = ctx.cache_dir.as_deref().map(|d| cache_path(d, case_id, (m1, m2)));
    // files written for an earlier kernel or right-hand side must not match
    let key = format!("{case_id}/{}/{}", eq.kernel, eq.rhs);
    if let (Some(p), false) = (&path, ctx.refresh) {
        if let Some(values) = read_cache(p, &key, (m1, m2), &grid)? {
            return Ok(values);
        }
    }
    let opts = SolveOptions { solver: SolverChoice::Auto, tol: ctx.tol, maxiter: None };
    let values = solve_nystrom(problem, m1, m2, RuleKind::Gauss, opts)?.eval_error_grid()?.into_data();
    if let Some(p) = path {
        write_cache(&p, &CachedReference { case: key, sizes: (m1, m2), grid, values: values.clone() })?;
    }
    Ok(values)
}

fn read_cache(path: &Path, case_id: &str, sizes: (usize, usize), grid: &[f64]) -> AppResult<Option<Vec<f64>>> {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(AppError::io(path, e)),
    };
    let c: CachedReference =
        serde_json::from_str(&text).map_err(|source| AppError::Json { path: path.into(), source })?;
    // a stale or foreign file is rebuilt rather than trusted
    if c.case != case_id || c.sizes != sizes || c.grid != grid || c.values.len() != grid.len() * grid.len() {
        return Ok(None);
    }
    Ok(Some(c.values))
}

fn write_cache(path: &Path, c: &CachedReference) -> AppResult<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| AppError::io(dir, e))?;
    }
    let text = serde_json::to_string(c).map_err(|source| AppError::Json { path: path.into(), source })?;
    fs::write(path, text).map_err(|e| AppError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_case_is_a_usage_error() {
        let e = run_case_id("nope", None, &RunContext::default()).unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn cache_round_trip_and_rejection() {
        let dir = tempfile::tempdir().unwrap();
        let grid = error_grid_points();
        let values: Vec<f64> = (0..grid.len() * grid.len()).map(|i| (i as f64).sqrt() * 1e-3 + 0.1).collect();
        let p = cache_path(dir.path(), "eq9", (3, 4));
        write_cache(&p, &CachedReference { case: "eq9".into(), sizes: (3, 4), grid: grid.clone(), values: values.clone() })
            .unwrap();
        assert_eq!(read_cache(&p, "eq9", (3, 4), &grid).unwrap().unwrap(), values);
        assert!(read_cache(&p, "eq9", (3, 5), &grid).unwrap().is_none());
        assert!(read_cache(&cache_path(dir.path(), "eq9", (1, 1)), "eq9", (1, 1), &grid).unwrap().is_none());
    }
}
