//! Problem files (JSON) and the CSV/JSON outputs of the CLI.
//!
//! Numbers are written with Rust's shortest round-trip formatting, so the same
//! computation always produces the same bytes.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use squarequad_core::cubature::{CubatureRule2D, NodePolicy};
use squarequad_core::fredholm::{FredholmProblem, SpaceWeight};
use squarequad_core::orthopoly::JacobiWeight;

use crate::error::{AppError, AppResult};
use crate::registry;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// A user problem: weights and registry ids.
///
/// ```json
/// { "w1": [0.5, 0.5], "w2": [0, 0], "u": [1, 1.25, 0.67, 0.67],
///   "kernel": "sin-sum", "rhs": "log-sin", "multiplier": 0.3,
///   "n1": 16, "n2": 16 }
/// ```
///
/// `integrand` is read by `integrate`; `u`, `kernel`, `rhs` and `multiplier`
/// by `solve`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub w1: (f64, f64),
    pub w2: (f64, f64),
    #[serde(default)]
    pub u: Option<[f64; 4]>,
    #[serde(default)]
    pub integrand: Option<String>,
    #[serde(default)]
    pub kernel: Option<String>,
    #[serde(default)]
    pub rhs: Option<String>,
    #[serde(default = "one")]
    pub multiplier: f64,
    #[serde(default)]
    pub n1: Option<usize>,
    #[serde(default)]
    pub n2: Option<usize>,
    /// Accept anti-Gauss factors whose nodes leave `[-1, 1]`.
    #[serde(default)]
    pub allow_outside_nodes: bool,
}

fn one() -> f64 {
    1.0
}

impl ProblemFile {
    pub fn read(path: &Path) -> AppResult<Self> {
        let text = fs::read_to_string(path).map_err(|e| AppError::io(path, e))?;
        serde_json::from_str(&text).map_err(|source| AppError::Json { path: path.into(), source })
    }

    pub fn weights(&self) -> AppResult<(JacobiWeight, JacobiWeight)> {
        Ok((JacobiWeight::new(self.w1.0, self.w1.1)?, JacobiWeight::new(self.w2.0, self.w2.1)?))
    }

    pub fn policy(&self) -> NodePolicy {
        if self.allow_outside_nodes {
            NodePolicy::Allow
        } else {
            NodePolicy::Reject
        }
    }

    pub fn sizes(&self) -> Option<(usize, usize)> {
        self.n1.zip(self.n2)
    }

    pub fn integrand(&self) -> AppResult<&'static registry::NamedIntegrand> {
        let id = self.integrand.as_deref().ok_or_else(|| AppError::usage("problem file has no \"integrand\""))?;
        registry::integrand(id).ok_or_else(|| AppError::usage(format!("unknown integrand '{id}'")))
    }

    pub fn problem(&self) -> AppResult<FredholmProblem> {
        let (w1, w2) = self.weights()?;
        let [g1, d1, g2, d2] = self.u.unwrap_or([0.0; 4]);
        let u = SpaceWeight::new(g1, d1, g2, d2)?;
        let kid = self.kernel.as_deref().ok_or_else(|| AppError::usage("problem file has no \"kernel\""))?;
        let k = registry::kernel(kid).ok_or_else(|| AppError::usage(format!("unknown kernel '{kid}'")))?;
        let rid = self.rhs.as_deref().ok_or_else(|| AppError::usage("problem file has no \"rhs\""))?;
        let g = registry::rhs(rid).ok_or_else(|| AppError::usage(format!("unknown right-hand side '{rid}'")))?.g;
        Ok(FredholmProblem::with_rhs_fn(w1, w2, u, k, Arc::new(g))?
            .with_multiplier(self.multiplier)?
            .with_node_policy(self.policy()))
    }
}

pub fn weight_label(w: JacobiWeight) -> String {
    format!("({},{})", w.alpha(), w.beta())
}

/// Header line, column names, then one `x1,x2,weight` row per node.
pub fn rule_csv(rule: &CubatureRule2D) -> String {
    let (w1, w2) = rule.weight_fns();
    let (n1, n2) = rule.sizes();
    let mut out = format!(
        "# kind={} w1={} w2={} n1={n1} n2={n2}\nx1,x2,weight\n",
        rule.kind().name(),
        weight_label(w1),
        weight_label(w2)
    );
    for (&[x1, x2], &w) in rule.nodes().iter().zip(rule.weights()) {
        let _ = writeln!(out, "{x1:e},{x2:e},{w:e}");
    }
    out
}

#[derive(Debug, Serialize)]
struct RuleJson<'a> {
    kind: &'a str,
    w1: (f64, f64),
    w2: (f64, f64),
    n1: usize,
    n2: usize,
    nodes: &'a [[f64; 2]],
    weights: &'a [f64],
}

pub fn rule_json(rule: &CubatureRule2D) -> String {
    let (w1, w2) = rule.weight_fns();
    let (n1, n2) = rule.sizes();
    let j = RuleJson {
        kind: rule.kind().name(),
        w1: (w1.alpha(), w1.beta()),
        w2: (w2.alpha(), w2.beta()),
        n1,
        n2,
        nodes: rule.nodes(),
        weights: rule.weights(),
    };
    to_json(&j)
}

/// Unweighted Gauss, anti-Gauss and averaged interpolants on a grid, `y1`
/// fastest. A value is `NaN` where `u` vanishes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolutionGrid {
    pub ys: Vec<f64>,
    pub gauss: Vec<f64>,
    pub anti: Vec<f64>,
    pub averaged: Vec<f64>,
}

pub fn solution_csv(s: &SolutionGrid) -> String {
    let mut out = String::from("y1,y2,fG,fA,fAvg\n");
    let m = s.ys.len();
    for (k, ((g, a), avg)) in s.gauss.iter().zip(&s.anti).zip(&s.averaged).enumerate() {
        let _ = writeln!(out, "{:e},{:e},{g:e},{a:e},{avg:e}", s.ys[k % m], s.ys[k / m]);
    }
    out
}

pub fn csv_line<'a>(fields: impl IntoIterator<Item = &'a str>) -> String {
    let mut line = fields.into_iter().collect::<Vec<_>>().join(",");
    line.push('\n');
    line
}

/// Shortest round-trip form; `None` becomes an empty field.
pub fn num(v: Option<f64>) -> String {
    v.map(|x| format!("{x:e}")).unwrap_or_default()
}

pub fn to_json<T: Serialize + ?Sized>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report types serialise");
    s.push('\n');
    s
}

/// Writes to `out`, or to stdout when no path is given.
pub fn emit(text: &str, out: Option<&PathBuf>) -> AppResult<()> {
    match out {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir).map_err(|e| AppError::io(dir, e))?;
            }
            fs::write(p, text).map_err(|e| AppError::io(p, e))
        }
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|e| AppError::io("<stdout>", e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use squarequad_core::cubature::gauss_cubature;

    #[test]
    fn problem_file_round_trip() {
        let text = r#"{"w1":[0.5,0.5],"w2":[0,0],"u":[1,1.25,0.5,0.5],"kernel":"sin-sum","rhs":"log-sin","multiplier":0.3,"n1":4,"n2":3}"#;
        let p: ProblemFile = serde_json::from_str(text).unwrap();
        assert_eq!(p.sizes(), Some((4, 3)));
        assert!(p.problem().is_ok());
        let back: ProblemFile = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn problem_file_rejects_unknown_ids_and_fields() {
        let p: ProblemFile = serde_json::from_str(r#"{"w1":[0,0],"w2":[0,0],"kernel":"nope","rhs":"one"}"#).unwrap();
        assert_eq!(p.problem().unwrap_err().exit_code(), 2);
        assert!(serde_json::from_str::<ProblemFile>(r#"{"w1":[0,0],"w2":[0,0],"typo":1}"#).is_err());
    }

    #[test]
    fn rule_csv_layout() {
        let r = gauss_cubature(JacobiWeight::LEGENDRE, JacobiWeight::LEGENDRE, 2, 2).unwrap();
        let text = rule_csv(&r);
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "# kind=gauss w1=(0,0) w2=(0,0) n1=2 n2=2");
        assert_eq!(lines[1], "x1,x2,weight");
        assert_eq!(lines.len(), 6);
    }

    #[test]
    fn solution_csv_orders_y1_fastest() {
        let s = SolutionGrid { ys: vec![-0.5, 0.5], gauss: vec![1.0; 4], anti: vec![2.0; 4], averaged: vec![1.5; 4] };
        let text = solution_csv(&s);
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[1], "-5e-1,-5e-1,1e0,2e0,1.5e0");
        assert_eq!(lines[2], "5e-1,-5e-1,1e0,2e0,1.5e0");
    }
}
