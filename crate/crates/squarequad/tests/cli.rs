use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use squarequad::registry::{get_case, rhs, Quantity};

fn squarequad(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_squarequad"))
        .args(args)
        .env_remove("SQUAREQUAD_CACHE")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "failed: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Rows of a CSV with a header, as `column -> value` lookups.
fn csv_rows(text: &str) -> Vec<Vec<(String, String)>> {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header: Vec<String> = lines.next().unwrap().split(',').map(String::from).collect();
    lines.map(|l| header.iter().cloned().zip(l.split(',').map(String::from)).collect()).collect()
}

fn field(row: &[(String, String)], name: &str) -> f64 {
    row.iter().find(|(k, _)| k == name).unwrap_or_else(|| panic!("no column {name}")).1.parse().unwrap()
}

/// `quantity,value` report as lookups.
fn report_value(text: &str, name: &str) -> String {
    text.lines().find_map(|l| l.strip_prefix(&format!("{name},"))).unwrap_or_else(|| panic!("no {name}")).to_string()
}

fn write_problem(dir: &Path, json: &str) -> String {
    let p = dir.join("problem.json");
    fs::write(&p, json).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn legendre_product_rule_has_unit_weights() {
    let out = stdout(&squarequad(&["rule", "--w1", "legendre", "--w2", "0,0", "--n1", "2", "--n2", "2"]));
    assert!(out.starts_with("# kind=gauss w1=(0,0) w2=(0,0) n1=2 n2=2\n"));
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 4);
    for r in &rows {
        assert!((field(r, "weight") - 1.0).abs() < 1e-14);
        assert!((field(r, "x1").abs() - 3f64.sqrt().recip()).abs() < 1e-15);
    }
}

#[test]
fn chebyshev_antigauss_rule_reaches_the_endpoints() {
    let out = stdout(&squarequad(&["rule", "--w1", "cheb1", "--w2", "legendre", "--n1", "3", "--n2", "3", "--kind", "antigauss"]));
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 16);
    let at_end = rows.iter().filter(|r| (field(r, "x1").abs() - 1.0).abs() < 1e-14).count();
    assert_eq!(at_end, 8);
}

#[test]
fn rule_json_output() {
    let out = stdout(&squarequad(&["rule", "--w1=-0.5,0", "--w2", "cheb2", "--n1", "3", "--n2", "2", "--format", "json"]));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["nodes"].as_array().unwrap().len(), 6);
    assert_eq!(v["w1"][0], -0.5);
}

#[test]
fn invalid_exponent_is_a_usage_error() {
    let o = squarequad(&["rule", "--w1=-1.5,0", "--w2", "legendre", "--n1", "2", "--n2", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("alpha = -1.5"));
}

#[test]
fn integrate_first_example_matches_its_table_row() {
    let out = stdout(&squarequad(&["integrate", "--case", "cub1", "--n1", "8", "--n2", "8"]));
    let row = &csv_rows(&out)[0];
    let case = get_case("cub1").unwrap();
    for (q, col) in [
        (Quantity::ErrGauss, "R_G"),
        (Quantity::ErrAnti, "R_A"),
        (Quantity::ErrAveraged, "R_Avg"),
        (Quantity::ErrEstimate, "R_1"),
    ] {
        let e = case.expected_at((8, 8), q).unwrap();
        assert!(e.tol.accepts(field(row, col), e.value), "{col}");
    }
}

#[test]
fn integrate_second_example_estimate() {
    let out = stdout(&squarequad(&["integrate", "--case", "cub2", "--n1", "16", "--n2", "16"]));
    let r1 = field(&csv_rows(&out)[0], "R_1");
    assert!(r1 < 0.0 && (r1 / -4.69e-7 - 1.0).abs() < 0.01, "{r1}");
}

#[test]
fn integrate_constant_gives_the_weight_mass() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_problem(dir.path(), r#"{"w1":[-0.5,-0.5],"w2":[0.5,0.5],"integrand":"one","n1":5,"n2":4}"#);
    let out = stdout(&squarequad(&["integrate", "--problem", &p, "--kind", "gauss"]));
    let row = &csv_rows(&out)[0];
    let b0 = std::f64::consts::PI * std::f64::consts::FRAC_PI_2;
    assert!((field(row, "value") - b0).abs() < 1e-13);
    assert!(field(row, "R_1").abs() < 1e-13);
}

#[test]
fn solve_first_example_smallest_row() {
    let out = stdout(&squarequad(&["solve", "--case", "eq1", "--n1", "2", "--n2", "2"]));
    let xi: f64 = report_value(&out, "xi_Avg").parse().unwrap();
    assert!(xi > 2.43e-3 / 2.0 && xi < 2.43e-3 * 2.0, "{xi}");
    let kappa: f64 = report_value(&out, "kappa_G").parse().unwrap();
    assert!((kappa - 2.678).abs() < 5e-4);
}

#[test]
fn zero_kernel_reproduces_the_right_hand_side() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_problem(dir.path(), r#"{"w1":[0,0],"w2":[-0.5,-0.5],"kernel":"zero","rhs":"exp-sin","n1":3,"n2":3}"#);
    let sol = dir.path().join("sol.csv");
    stdout(&squarequad(&["solve", "--problem", &p, "--solution", sol.to_str().unwrap()]));
    let g = rhs("exp-sin").unwrap().g;
    let rows = csv_rows(&fs::read_to_string(sol).unwrap());
    assert_eq!(rows.len(), 2500);
    for r in &rows {
        let expect = g(field(r, "y1"), field(r, "y2"));
        for col in ["fG", "fA", "fAvg"] {
            assert!((field(r, col) - expect).abs() < 1e-15, "{col}");
        }
    }
}

#[test]
fn stein_and_separable_gmres_agree() {
    let xi = |solver: &str| -> f64 {
        let out = stdout(&squarequad(&["solve", "--case", "eq3", "--n1", "32", "--n2", "32", "--solver", solver]));
        assert_eq!(report_value(&out, "solver_G"), solver);
        report_value(&out, "xi_G").parse().unwrap()
    };
    let (a, b) = (xi("stein"), xi("gmres-sk"));
    assert!((a - b).abs() <= 1e-10, "{a} vs {b}");
}

#[test]
fn solve_json_report_and_bracketing() {
    let out = stdout(&squarequad(&["solve", "--case", "eq1", "--n1", "4", "--n2", "4", "--format", "json"]));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["solver_gauss"], "lu");
    assert!(v["all_bracketed"].is_boolean());
    assert!(v["max_half_gap"].as_f64().unwrap() > 0.0);
}

#[test]
fn reproduce_first_equation_table() {
    let out = stdout(&squarequad(&["reproduce", "3"]));
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 4);
    let numeric = ["xi_G", "xi_A", "xi_Avg", "kappa_G", "kappa_A"];
    for r in &rows[..3] {
        for q in numeric {
            field(r, q);
            assert_eq!(r.iter().find(|(k, _)| *k == format!("{q}_verdict")).unwrap().1, "pass");
        }
    }
}

#[test]
fn reproduce_figure_left_panel() {
    let out = stdout(&squarequad(&["reproduce", "fig1-left"]));
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 30);
    for (k, r) in rows.iter().enumerate() {
        assert_eq!(field(r, "n1") as usize, k + 1);
        assert_eq!(field(r, "n2"), 8.0);
        assert!(field(r, "abs_S") >= 0.0 && field(r, "max_E") >= 0.0);
    }
}

#[test]
fn reproduce_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for p in [&a, &b] {
        stdout(&squarequad(&["reproduce", "1", "--out", p.to_str().unwrap()]));
    }
    assert_eq!(fs::read(a).unwrap(), fs::read(b).unwrap());
}

#[test]
fn reference_cache_is_written_and_reused() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let first = stdout(&squarequad(&["solve", "--case", "eq3", "--n1", "8", "--n2", "8", "--cache", cache]));
    assert!(dir.path().join("eq3-512x512.json").exists());
    let second = stdout(&squarequad(&["solve", "--case", "eq3", "--n1", "8", "--n2", "8", "--cache", cache]));
    assert_eq!(first, second);
}

#[test]
fn usage_errors_exit_with_2() {
    for args in [
        &["reproduce", "5"][..],
        &["solve", "--n1", "2", "--n2", "2"],
        &["solve", "--case", "eq1", "--problem", "p.json", "--n1", "2", "--n2", "2"],
        &["solve", "--case", "eq1"],
        &["solve", "--case", "cub1", "--n1", "2", "--n2", "2"],
        &["integrate", "--case", "nope"],
        &["rule", "--w1", "legendre", "--w2", "legendre", "--n1", "2"],
    ] {
        assert_eq!(squarequad(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn numeric_failure_exits_with_3() {
    let o = squarequad(&["solve", "--case", "eq1", "--n1", "2", "--n2", "2", "--solver", "gmres", "--tol", "1e-300"]);
    assert_eq!(o.status.code(), Some(3));
}
