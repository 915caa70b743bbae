//! Table and figure data for the registered cases, with verdicts against the
//! stored values.

use serde::Serialize;
use squarequad_core::cubature::{bracketing_diagnostic, estimates};

use crate::error::{AppError, AppResult};
use crate::formats::{csv_line, num, to_json, Format};
use crate::registry::{self, CaseSpec, CubatureCase, TestCase};
use crate::runner::{cubature_reference, run_case, CaseReport, RunContext};

pub const TABLE_IDS: &[(&str, &str)] =
    &[("1", "cub1"), ("2", "cub2"), ("3", "eq1"), ("4", "eq2"), ("ex3", "eq3"), ("6", "eq4")];

pub const FIGURE_IDS: &[&str] = &["fig1-left", "fig1-right", "fig1"];

/// Largest `n` plotted in the bracketing figure.
pub const FIG1_MAX_N: usize = 30;

/// Fixed `n2` of the left panel.
pub const FIG1_LEFT_N2: usize = 8;

pub fn case_for_table(id: &str) -> Option<&'static TestCase> {
    TABLE_IDS.iter().find(|(t, _)| *t == id).and_then(|(_, c)| registry::get_case(c))
}

pub fn known_ids() -> String {
    TABLE_IDS.iter().map(|(t, _)| *t).chain(FIGURE_IDS.iter().copied()).collect::<Vec<_>>().join(", ")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableEntry {
    pub quantity: &'static str,
    pub computed: Option<f64>,
    pub expected: Option<f64>,
    pub tolerance: Option<String>,
    /// `Some(true)` when the computed value is within tolerance.
    pub pass: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRow {
    pub n1: usize,
    pub n2: usize,
    pub entries: Vec<TableEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableReport {
    pub table: String,
    pub case: &'static str,
    pub title: &'static str,
    pub rows: Vec<TableRow>,
}

impl TableReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().flat_map(|r| &r.entries).all(|e| e.pass != Some(false))
    }

    pub fn to_csv(&self) -> String {
        let Some(first) = self.rows.first() else { return String::new() };
        let mut header = vec!["n1".to_string(), "n2".to_string()];
        for e in &first.entries {
            header.extend([e.quantity.to_string(), format!("{}_expected", e.quantity), format!("{}_verdict", e.quantity)]);
        }
        let mut out = csv_line(header.iter().map(String::as_str));
        for r in &self.rows {
            let mut fields = vec![r.n1.to_string(), r.n2.to_string()];
            for e in &r.entries {
                let verdict = match e.pass {
                    Some(true) => "pass",
                    Some(false) => "FAIL",
                    None => "",
                };
                fields.extend([num(e.computed), num(e.expected), verdict.to_string()]);
            }
            out.push_str(&csv_line(fields.iter().map(String::as_str)));
        }
        out
    }
}

pub fn table_from_report(table: &str, case: &'static TestCase, report: &CaseReport) -> TableReport {
    let rows = report
        .rows
        .iter()
        .map(|row| TableRow {
            n1: row.sizes.0,
            n2: row.sizes.1,
            entries: case
                .quantities()
                .iter()
                .filter(|&&q| row.value(q).is_some() || case.expected_at(row.sizes, q).is_some())
                .map(|&q| {
                    let exp = case.expected_at(row.sizes, q);
                    TableEntry {
                        quantity: q.name(),
                        computed: row.value(q),
                        expected: exp.map(|e| e.value),
                        tolerance: exp.map(|e| e.tol.describe()),
                        pass: row.check(q).map(|c| c.pass),
                    }
                })
                .collect(),
        })
        .collect();
    TableReport { table: table.to_string(), case: case.id, title: case.title, rows }
}

pub fn reproduce_table(id: &str, ctx: &RunContext) -> AppResult<TableReport> {
    let case = case_for_table(id).ok_or_else(|| unknown(id))?;
    let report = run_case(case, case.sizes, ctx)?;
    Ok(table_from_report(id, case, &report))
}

fn unknown(id: &str) -> AppError {
    AppError::usage(format!("unknown table or figure id '{id}' (known: {})", known_ids()))
}

/// One point of the bracketing figure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FigurePoint {
    pub panel: &'static str,
    pub n1: usize,
    pub n2: usize,
    pub abs_s: f64,
    pub max_e: f64,
    pub holds: bool,
    /// `I − G` and `I − A` at the same sizes.
    pub r_gauss: f64,
    pub r_anti: f64,
}

fn cubature_of(case_id: &str) -> CubatureCase {
    match registry::get_case(case_id).map(|c| c.spec) {
        Some(CaseSpec::Cubature(c)) => c,
        _ => unreachable!("{case_id} is a registered cubature case"),
    }
}

fn figure_panel(panel: &'static str, case_id: &str, sizes: impl Iterator<Item = (usize, usize)>) -> AppResult<Vec<FigurePoint>> {
    let c = cubature_of(case_id);
    let f = registry::integrand(c.integrand).expect("registered integrand").f;
    let exact = cubature_reference(&c)?;
    sizes
        .map(|(n1, n2)| {
            let d = bracketing_diagnostic(f, c.w1, c.w2, n1, n2, None)?;
            let e = estimates(f, c.w1, c.w2, n1, n2, c.policy)?;
            Ok(FigurePoint {
                panel,
                n1,
                n2,
                abs_s: d.s.abs(),
                max_e: d.e1.abs().max(d.e2.abs()),
                holds: d.holds,
                r_gauss: exact - e.gauss,
                r_anti: exact - e.antigauss,
            })
        })
        .collect()
}

/// Left panel: the first cubature case at `n2 = 8`; right panel: the second
/// case with `n1 = n2`.
pub fn reproduce_figure(id: &str) -> AppResult<Vec<FigurePoint>> {
    let left = || figure_panel("left", "cub1", (1..=FIG1_MAX_N).map(|n| (n, FIG1_LEFT_N2)));
    let right = || figure_panel("right", "cub2", (1..=FIG1_MAX_N).map(|n| (n, n)));
    match id {
        "fig1-left" => left(),
        "fig1-right" => right(),
        "fig1" => Ok([left()?, right()?].concat()),
        _ => Err(unknown(id)),
    }
}

pub fn figure_csv(points: &[FigurePoint]) -> String {
    let mut out = csv_line(["panel", "n1", "n2", "abs_S", "max_E", "holds", "R_G", "R_A"]);
    for p in points {
        let fields = [
            p.panel.to_string(),
            p.n1.to_string(),
            p.n2.to_string(),
            num(Some(p.abs_s)),
            num(Some(p.max_e)),
            p.holds.to_string(),
            num(Some(p.r_gauss)),
            num(Some(p.r_anti)),
        ];
        out.push_str(&csv_line(fields.iter().map(String::as_str)));
    }
    out
}

/// Rendered output of any reproducible id.
pub fn reproduce(id: &str, format: Format, ctx: &RunContext) -> AppResult<String> {
    if FIGURE_IDS.contains(&id) {
        let points = reproduce_figure(id)?;
        return Ok(match format {
            Format::Csv => figure_csv(&points),
            Format::Json => to_json(&points),
        });
    }
    let t = reproduce_table(id, ctx)?;
    Ok(match format {
        Format::Csv => t.to_csv(),
        Format::Json => to_json(&t),
    })
}
