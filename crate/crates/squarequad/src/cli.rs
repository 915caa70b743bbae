//! Command-line interface: `rule`, `integrate`, `solve`, `reproduce`, `list`.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use squarequad_core::cubature::{cubature, estimates, CubatureKind, NodePolicy};
use squarequad_core::fredholm::{
    averaged_interpolant, bracketing_check, error_grid_points, solve_nystrom, weighted_relative_error,
    FredholmProblem, NystromSolution, SolveOptions, SolverChoice, DEFAULT_COND_CAP,
};
use squarequad_core::linsolve::DEFAULT_TOL;
use squarequad_core::orthopoly::JacobiWeight;
use squarequad_core::rules::RuleKind;

use crate::error::{AppError, AppResult};
use crate::formats::{self, csv_line, num, to_json, Format, ProblemFile, SolutionGrid};
use crate::registry::{self, CaseSpec, EquationCase, TestCase};
use crate::reproduce;
use crate::runner::{cubature_reference, kappa, reference_grid, RunContext, CACHE_ENV};

#[derive(Debug, Parser)]
#[command(name = "squarequad", version, about = "Gauss, anti-Gauss and averaged cubature on [-1,1]^2 and a weighted Nystrom solver")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the nodes and weights of a product rule.
    Rule(RuleArgs),
    /// Gauss, anti-Gauss and averaged values of an integral and the error estimate.
    Integrate(IntegrateArgs),
    /// Solve an integral equation with both rules and report errors, condition numbers and bracketing.
    Solve(SolveArgs),
    /// Regenerate a stored table or the bracketing figure data.
    Reproduce(ReproduceArgs),
    /// List registered cases, integrands, kernels and right-hand sides.
    List,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Gauss,
    Antigauss,
    Averaged,
}

impl From<KindArg> for CubatureKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Gauss => CubatureKind::Gauss,
            KindArg::Antigauss => CubatureKind::AntiGauss,
            KindArg::Averaged => CubatureKind::Averaged,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SolverArg {
    Auto,
    Lu,
    Gmres,
    GmresFm,
    GmresSk,
    Stein,
}

impl From<SolverArg> for SolverChoice {
    fn from(s: SolverArg) -> Self {
        match s {
            SolverArg::Auto => SolverChoice::Auto,
            SolverArg::Lu => SolverChoice::Lu,
            SolverArg::Gmres => SolverChoice::Gmres,
            SolverArg::GmresFm => SolverChoice::GmresFm,
            SolverArg::GmresSk => SolverChoice::GmresSk,
            SolverArg::Stein => SolverChoice::Stein,
        }
    }
}

/// `alpha,beta` or one of `legendre`, `cheb1`..`cheb4`. Range checks happen
/// later so that bad exponents report the library's message.
fn parse_weight(s: &str) -> Result<(f64, f64), String> {
    let named = match s {
        "legendre" => Some(JacobiWeight::LEGENDRE),
        "cheb1" => Some(JacobiWeight::CHEBYSHEV_FIRST),
        "cheb2" => Some(JacobiWeight::CHEBYSHEV_SECOND),
        "cheb3" => Some(JacobiWeight::CHEBYSHEV_THIRD),
        "cheb4" => Some(JacobiWeight::CHEBYSHEV_FOURTH),
        _ => None,
    };
    if let Some(w) = named {
        return Ok((w.alpha(), w.beta()));
    }
    let (a, b) = s.split_once(',').ok_or("expected ALPHA,BETA or a weight name")?;
    let parse = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("'{t}': {e}"));
    Ok((parse(a)?, parse(b)?))
}

#[derive(Debug, Args)]
pub struct Sizes {
    #[arg(long)]
    pub n1: Option<usize>,
    #[arg(long)]
    pub n2: Option<usize>,
}

impl Sizes {
    fn get(&self) -> AppResult<Option<(usize, usize)>> {
        match (self.n1, self.n2) {
            (Some(a), Some(b)) => Ok(Some((a, b))),
            (None, None) => Ok(None),
            _ => Err(AppError::usage("give both --n1 and --n2")),
        }
    }
}

#[derive(Debug, Args)]
pub struct Output {
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// Registered case id (see `list`).
    #[arg(long)]
    pub case: Option<String>,
    /// JSON problem file.
    #[arg(long)]
    pub problem: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RuleArgs {
    /// Weight on x1: ALPHA,BETA or legendre|cheb1|cheb2|cheb3|cheb4.
    #[arg(long, value_parser = parse_weight, allow_hyphen_values = true)]
    pub w1: (f64, f64),
    #[arg(long, value_parser = parse_weight, allow_hyphen_values = true)]
    pub w2: (f64, f64),
    #[arg(long)]
    pub n1: usize,
    #[arg(long)]
    pub n2: usize,
    #[arg(long, value_enum, default_value_t = KindArg::Gauss)]
    pub kind: KindArg,
    /// Accept anti-Gauss nodes outside [-1, 1].
    #[arg(long)]
    pub allow_outside_nodes: bool,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct IntegrateArgs {
    #[command(flatten)]
    pub source: Source,
    /// Defaults to the problem file's sizes, or every row of a case.
    #[command(flatten)]
    pub sizes: Sizes,
    /// Rule whose value fills the `value` column.
    #[arg(long, value_enum, default_value_t = KindArg::Averaged)]
    pub kind: KindArg,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct CacheArgs {
    /// Reference-solution cache directory (overrides the environment variable).
    #[arg(long, env = CACHE_ENV)]
    pub cache: Option<PathBuf>,
    /// Rebuild cached references.
    #[arg(long)]
    pub refresh: bool,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub source: Source,
    #[command(flatten)]
    pub sizes: Sizes,
    #[arg(long, value_enum)]
    pub solver: Option<SolverArg>,
    /// GMRES relative-residual tolerance.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Largest system whose condition number is computed; 0 skips it.
    #[arg(long)]
    pub kappa_cap: Option<usize>,
    /// Where to write the interpolants on the error grid (CSV: y1,y2,fG,fA,fAvg).
    #[arg(long)]
    pub solution: Option<PathBuf>,
    #[command(flatten)]
    pub cache: CacheArgs,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    /// 1, 2, 3, 4, 6, ex3, fig1-left, fig1-right or fig1.
    pub id: String,
    #[arg(long, value_enum)]
    pub solver: Option<SolverArg>,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long)]
    pub kappa_cap: Option<usize>,
    #[command(flatten)]
    pub cache: CacheArgs,
    #[command(flatten)]
    pub output: Output,
}

/// Parses `args` and runs the command; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(cli: Cli) -> AppResult<()> {
    match cli.command {
        Command::Rule(a) => cmd_rule(&a),
        Command::Integrate(a) => cmd_integrate(&a),
        Command::Solve(a) => cmd_solve(&a),
        Command::Reproduce(a) => cmd_reproduce(&a),
        Command::List => formats::emit(&list_text(), None),
    }
}

fn policy(allow: bool) -> NodePolicy {
    if allow {
        NodePolicy::Allow
    } else {
        NodePolicy::Reject
    }
}

pub fn cmd_rule(a: &RuleArgs) -> AppResult<()> {
    let w1 = JacobiWeight::new(a.w1.0, a.w1.1)?;
    let w2 = JacobiWeight::new(a.w2.0, a.w2.1)?;
    let rule = cubature(a.kind.into(), w1, w2, a.n1, a.n2, policy(a.allow_outside_nodes))?;
    let text = match a.output.format {
        Format::Csv => formats::rule_csv(&rule),
        Format::Json => formats::rule_json(&rule),
    };
    formats::emit(&text, a.output.out.as_ref())
}

fn get_case(id: &str) -> AppResult<&'static TestCase> {
    registry::get_case(id).ok_or_else(|| AppError::usage(format!("unknown case id '{id}'")))
}

#[derive(Debug, Clone, Serialize)]
pub struct IntegrateRow {
    pub n1: usize,
    pub n2: usize,
    pub kind: &'static str,
    pub value: f64,
    pub gauss: f64,
    pub antigauss: f64,
    pub averaged: f64,
    /// `(A − G)/2`.
    pub estimate: f64,
    /// Reference integral and the true errors, for registered cases.
    pub reference: Option<f64>,
    pub r_gauss: Option<f64>,
    pub r_anti: Option<f64>,
    pub r_averaged: Option<f64>,
}

pub fn cmd_integrate(a: &IntegrateArgs) -> AppResult<()> {
    let (w1, w2, f, policy, reference, default_sizes): (_, _, registry::Integrand, _, _, Vec<(usize, usize)>) =
        if let Some(id) = &a.source.case {
            let case = get_case(id)?;
            let CaseSpec::Cubature(c) = case.spec else {
                return Err(AppError::usage(format!("case '{id}' is an integral equation; use `solve`")));
            };
            let f = registry::integrand(c.integrand).expect("registered integrand").f;
            (c.w1, c.w2, f, c.policy, Some(cubature_reference(&c)?), case.sizes.to_vec())
        } else {
            let path = a.source.problem.as_ref().expect("clap enforces one source");
            let p = ProblemFile::read(path)?;
            let (w1, w2) = p.weights()?;
            (w1, w2, p.integrand()?.f, p.policy(), None, p.sizes().into_iter().collect())
        };
    let sizes = match a.sizes.get()? {
        Some(n) => vec![n],
        None if default_sizes.is_empty() => return Err(AppError::usage("no sizes: give --n1 and --n2")),
        None => default_sizes,
    };
    let kind: CubatureKind = a.kind.into();
    let mut rows = Vec::new();
    for (n1, n2) in sizes {
        let e = estimates(f, w1, w2, n1, n2, policy)?;
        let value = match kind {
            CubatureKind::Gauss => e.gauss,
            CubatureKind::AntiGauss => e.antigauss,
            CubatureKind::Averaged => e.averaged,
        };
        rows.push(IntegrateRow {
            n1,
            n2,
            kind: kind.name(),
            value,
            gauss: e.gauss,
            antigauss: e.antigauss,
            averaged: e.averaged,
            estimate: e.error_estimate,
            reference,
            r_gauss: reference.map(|i| i - e.gauss),
            r_anti: reference.map(|i| i - e.antigauss),
            r_averaged: reference.map(|i| i - e.averaged),
        });
    }
    let text = match a.output.format {
        Format::Json => to_json(&rows),
        Format::Csv => {
            let mut out = csv_line([
                "n1", "n2", "kind", "value", "gauss", "antigauss", "averaged", "R_1", "reference", "R_G", "R_A", "R_Avg",
            ]);
            for r in &rows {
                let fields = [
                    r.n1.to_string(),
                    r.n2.to_string(),
                    r.kind.to_string(),
                    num(Some(r.value)),
                    num(Some(r.gauss)),
                    num(Some(r.antigauss)),
                    num(Some(r.averaged)),
                    num(Some(r.estimate)),
                    num(r.reference),
                    num(r.r_gauss),
                    num(r.r_anti),
                    num(r.r_averaged),
                ];
                out.push_str(&csv_line(fields.iter().map(String::as_str)));
            }
            out
        }
    };
    formats::emit(&text, a.output.out.as_ref())
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    pub n1: usize,
    pub n2: usize,
    pub solver_gauss: &'static str,
    pub solver_anti: &'static str,
    pub iterations_gauss: usize,
    pub iterations_anti: usize,
    pub xi_gauss: Option<f64>,
    pub xi_anti: Option<f64>,
    pub xi_averaged: Option<f64>,
    pub kappa_gauss: Option<f64>,
    pub kappa_anti: Option<f64>,
    /// Every reference value on the grid lies between the two interpolants.
    pub all_bracketed: Option<bool>,
    /// `max |f_G − f_A| u / 2` on the grid.
    pub max_half_gap: f64,
}

fn solution_grid(g: &NystromSolution, a: &NystromSolution) -> AppResult<SolutionGrid> {
    let ys = error_grid_points();
    let avg = averaged_interpolant(g, a)?;
    let mut out = SolutionGrid { ys: ys.clone(), gauss: vec![], anti: vec![], averaged: vec![] };
    for &y2 in &ys {
        for &y1 in &ys {
            let unweighted = |r: squarequad_core::Result<f64>| r.unwrap_or(f64::NAN);
            out.gauss.push(unweighted(g.eval(y1, y2)));
            out.anti.push(unweighted(a.eval(y1, y2)));
            out.averaged.push(unweighted(avg.eval(y1, y2)));
        }
    }
    Ok(out)
}

pub fn cmd_solve(a: &SolveArgs) -> AppResult<()> {
    let ctx = RunContext {
        cache_dir: a.cache.cache.clone(),
        refresh: a.cache.refresh,
        solver: a.solver.map(Into::into),
        kappa_cap: a.kappa_cap,
        tol: a.tol,
    };
    let (problem, case, default_sizes, default_solver, default_cap): (FredholmProblem, Option<(&str, EquationCase)>, _, _, _) =
        if let Some(id) = &a.source.case {
            let case = get_case(id)?;
            let CaseSpec::Equation(eq) = case.spec else {
                return Err(AppError::usage(format!("case '{id}' is a cubature case; use `integrate`")));
            };
            (eq.problem(), Some((case.id, eq)), None, eq.solver, eq.kappa_cap)
        } else {
            let path = a.source.problem.as_ref().expect("clap enforces one source");
            let p = ProblemFile::read(path)?;
            (p.problem()?, None, p.sizes(), SolverChoice::Auto, DEFAULT_COND_CAP)
        };
    let (n1, n2) = a.sizes.get()?.or(default_sizes).ok_or_else(|| AppError::usage("no sizes: give --n1 and --n2"))?;
    let opts = SolveOptions { solver: ctx.solver.unwrap_or(default_solver), tol: a.tol, maxiter: None };
    let g = solve_nystrom(&problem, n1, n2, RuleKind::Gauss, opts)?;
    let an = solve_nystrom(&problem, n1, n2, RuleKind::AntiGauss, opts)?;

    let reference = match case {
        Some((id, eq)) => Some(reference_grid(id, &eq, &problem, &ctx)?),
        None => None,
    };
    let ys = error_grid_points();
    let br = bracketing_check(&g, &an, &ys, &ys, reference.as_deref())?;
    let (mut xg, mut xa, mut xavg) = (None, None, None);
    if let Some(r) = &reference {
        let fg: Vec<f64> = br.points.iter().map(|p| p.gauss).collect();
        let fa: Vec<f64> = br.points.iter().map(|p| p.anti).collect();
        let favg: Vec<f64> = fg.iter().zip(&fa).map(|(x, y)| 0.5 * (x + y)).collect();
        xg = Some(weighted_relative_error(&fg, r)?);
        xa = Some(weighted_relative_error(&fa, r)?);
        xavg = Some(weighted_relative_error(&favg, r)?);
    }
    let cap = a.kappa_cap.unwrap_or(default_cap);
    let report = SolveReport {
        n1,
        n2,
        solver_gauss: g.stats().solver.name(),
        solver_anti: an.stats().solver.name(),
        iterations_gauss: g.stats().iterations,
        iterations_anti: an.stats().iterations,
        xi_gauss: xg,
        xi_anti: xa,
        xi_averaged: xavg,
        kappa_gauss: kappa(&problem, (n1, n2), RuleKind::Gauss, cap)?,
        kappa_anti: kappa(&problem, (n1, n2), RuleKind::AntiGauss, cap)?,
        all_bracketed: br.all_bracketed,
        max_half_gap: br.max_half_gap,
    };
    if let Some(path) = &a.solution {
        formats::emit(&formats::solution_csv(&solution_grid(&g, &an)?), Some(path))?;
    }
    let text = match a.output.format {
        Format::Json => to_json(&report),
        Format::Csv => {
            let mut out = csv_line(["quantity", "value"]);
            let r = &report;
            let fields: [(&str, String); 13] = [
                ("n1", r.n1.to_string()),
                ("n2", r.n2.to_string()),
                ("solver_G", r.solver_gauss.to_string()),
                ("solver_A", r.solver_anti.to_string()),
                ("iter_G", r.iterations_gauss.to_string()),
                ("iter_A", r.iterations_anti.to_string()),
                ("xi_G", num(r.xi_gauss)),
                ("xi_A", num(r.xi_anti)),
                ("xi_Avg", num(r.xi_averaged)),
                ("kappa_G", num(r.kappa_gauss)),
                ("kappa_A", num(r.kappa_anti)),
                ("all_bracketed", r.all_bracketed.map(|b| b.to_string()).unwrap_or_default()),
                ("max_half_gap", num(Some(r.max_half_gap))),
            ];
            for (k, v) in fields {
                out.push_str(&csv_line([k, v.as_str()]));
            }
            out
        }
    };
    formats::emit(&text, a.output.out.as_ref())
}

pub fn cmd_reproduce(a: &ReproduceArgs) -> AppResult<()> {
    let ctx = RunContext {
        cache_dir: a.cache.cache.clone(),
        refresh: a.cache.refresh,
        solver: a.solver.map(Into::into),
        kappa_cap: a.kappa_cap,
        tol: a.tol,
    };
    let text = reproduce::reproduce(&a.id, a.output.format, &ctx)?;
    formats::emit(&text, a.output.out.as_ref())
}

pub fn list_text() -> String {
    let mut out = String::from("cases:\n");
    for c in registry::CASES {
        let kind = match c.spec {
            CaseSpec::Cubature(_) => "integral",
            CaseSpec::Equation(_) => "equation",
        };
        out.push_str(&format!("  {:<6} {kind:<9} {}\n", c.id, c.title));
    }
    out.push_str("tables: ");
    out.push_str(&reproduce::known_ids());
    out.push_str("\nintegrands:\n");
    for i in registry::INTEGRANDS {
        out.push_str(&format!("  {:<18} {}\n", i.id, i.description));
    }
    out.push_str("kernels:\n");
    for k in registry::KERNELS {
        out.push_str(&format!("  {:<18} {}\n", k.id, k.description));
    }
    out.push_str("right-hand sides:\n");
    for r in registry::RHS {
        out.push_str(&format!("  {:<18} {}\n", r.id, r.description));
    }
    out
}
