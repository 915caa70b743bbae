//! Comparisons against oracles that share no code with the library: closed
//! forms, Sturm-sequence bisection, a Stieltjes procedure on Newton-computed
//! Gauss–Legendre nodes, and a hand-built Kronecker system.

use std::f64::consts::PI;

use squarequad_core::cubature::gauss_cubature;
use squarequad_core::fredholm::{
    assemble_system_as, nystrom_rule, Assembly, FredholmProblem, Kernel, SpaceWeight,
};
use squarequad_core::orthopoly::{recurrence_coeffs, JacobiWeight};
use squarequad_core::rules::{antigauss_rule, gauss_rule, RuleKind};
use squarequad_core::tridiag::{eig_tridiag, SymTridiag};

/// Number of eigenvalues below `x` (Sturm sequence of the LDLᵀ pivots).
fn sturm_count(d: &[f64], e: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = d[0] - x;
    if q < 0.0 {
        count += 1;
    }
    for i in 1..d.len() {
        let q_prev = if q == 0.0 { f64::EPSILON * (e[i - 1].abs() + 1.0) } else { q };
        q = d[i] - x - e[i - 1] * e[i - 1] / q_prev;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

fn bisection_eigenvalues(d: &[f64], e: &[f64]) -> Vec<f64> {
    let n = d.len();
    let radius = (0..n)
        .map(|i| d[i].abs() + if i > 0 { e[i - 1].abs() } else { 0.0 } + if i + 1 < n { e[i].abs() } else { 0.0 })
        .fold(0.0, f64::max);
    (0..n)
        .map(|k| {
            let (mut lo, mut hi) = (-radius - 1.0, radius + 1.0);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if sturm_count(d, e, mid) > k {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            0.5 * (lo + hi)
        })
        .collect()
}

#[test]
fn eigenvalues_match_sturm_bisection() {
    let mut s = 7u64;
    let mut next = || {
        s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((s >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
    };
    for n in [1, 2, 3, 5, 8, 13, 21, 40] {
        let d: Vec<f64> = (0..n).map(|_| next()).collect();
        let e: Vec<f64> = (1..n).map(|_| next().abs() + 0.01).collect();
        let got = eig_tridiag(&SymTridiag::new(d.clone(), e.clone()).unwrap()).unwrap();
        let want = bisection_eigenvalues(&d, &e);
        for (a, b) in got.values.iter().zip(&want) {
            assert!((a - b).abs() < 1e-13, "n = {n}: {a} vs {b}");
        }
        let mass: f64 = got.firstcomp.iter().map(|z| z * z).sum();
        assert!((mass - 1.0).abs() < 1e-13);
    }
}

#[test]
fn chebyshev_first_kind_closed_forms() {
    let w = JacobiWeight::CHEBYSHEV_FIRST;
    for n in [1, 2, 5, 16, 33] {
        let g = gauss_rule(w, n).unwrap();
        for k in 0..n {
            let x = -((2 * k + 1) as f64 * PI / (2 * n) as f64).cos();
            assert!((g.nodes()[k] - x).abs() < 1e-14, "gauss node {k} of {n}");
            assert!((g.weights()[k] - PI / n as f64).abs() < 1e-13);
        }
        // anti-Gauss nodes are cos(kπ/n), k = 0..n, i.e. the Gauss–Lobatto points
        let a = antigauss_rule(w, n).unwrap();
        for k in 0..=n {
            let x = -(k as f64 * PI / n as f64).cos();
            assert!((a.nodes()[k] - x).abs() < 1e-14, "anti-Gauss node {k} of {n}");
        }
    }
}

#[test]
fn chebyshev_second_kind_closed_forms() {
    let w = JacobiWeight::CHEBYSHEV_SECOND;
    for n in [1, 3, 10, 25] {
        let g = gauss_rule(w, n).unwrap();
        for k in 0..n {
            let t = (n - k) as f64 * PI / (n + 1) as f64;
            assert!((g.nodes()[k] - t.cos()).abs() < 1e-14);
            let wk = PI / (n + 1) as f64 * t.sin().powi(2);
            assert!((g.weights()[k] - wk).abs() < 1e-14);
        }
    }
}

/// Gauss–Legendre nodes and weights by Newton's method on `P_n`.
fn legendre_newton(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut xs = Vec::with_capacity(n);
    let mut ws = Vec::with_capacity(n);
    for k in 0..n {
        let mut x = -(PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=n {
                let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 1 { x } else { p1 };
            let pm1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * p - pm1) / (x * x - 1.0);
            let step = p / dp;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        xs.push(x);
        ws.push(2.0 / ((1.0 - x * x) * dp * dp));
    }
    (xs, ws)
}

#[test]
fn legendre_rule_matches_newton() {
    for n in [1, 2, 7, 20, 64] {
        let (x, w) = legendre_newton(n);
        let g = gauss_rule(JacobiWeight::LEGENDRE, n).unwrap();
        for k in 0..n {
            assert!((g.nodes()[k] - x[k]).abs() < 1e-14, "n = {n}");
            assert!((g.weights()[k] - w[k]).abs() < 1e-14, "n = {n}");
        }
    }
}

/// Stieltjes procedure with a discrete inner product that is exact for the
/// polynomial weights `(1-x)^a (1+x)^b`, `a, b` nonnegative integers.
fn stieltjes(a: i32, b: i32, n: usize) -> (Vec<f64>, Vec<f64>) {
    let (x, w0) = legendre_newton(n + a as usize + b as usize + 4);
    let w: Vec<f64> = x.iter().zip(&w0).map(|(xi, wi)| wi * (1.0 - xi).powi(a) * (1.0 + xi).powi(b)).collect();
    let mut p_prev = vec![0.0; x.len()];
    let mut p = vec![1.0; x.len()];
    let (mut alpha, mut beta) = (Vec::new(), Vec::new());
    let mut norm_prev = 1.0;
    for j in 0..=n {
        let norm: f64 = p.iter().zip(&w).map(|(pi, wi)| pi * pi * wi).sum();
        let xnorm: f64 = p.iter().zip(&w).zip(&x).map(|((pi, wi), xi)| xi * pi * pi * wi).sum();
        let aj = xnorm / norm;
        let bj = if j == 0 { norm } else { norm / norm_prev };
        alpha.push(aj);
        beta.push(bj);
        let next: Vec<f64> = (0..x.len()).map(|i| (x[i] - aj) * p[i] - if j == 0 { 0.0 } else { bj * p_prev[i] }).collect();
        p_prev = std::mem::replace(&mut p, next);
        norm_prev = norm;
    }
    (alpha, beta)
}

#[test]
fn recurrence_matches_stieltjes() {
    for (a, b) in [(0, 0), (1, 0), (0, 2), (1, 1), (2, 1), (3, 2)] {
        let n = 12;
        let c = recurrence_coeffs(JacobiWeight::new(a as f64, b as f64).unwrap(), n).unwrap();
        let (alpha, beta) = stieltjes(a, b, n);
        for j in 0..=n {
            assert!((c.a()[j] - alpha[j]).abs() < 1e-13, "a_{j} for ({a}, {b})");
            assert!((c.b()[j] - beta[j]).abs() < 1e-13 * beta[j].max(1.0), "b_{j} for ({a}, {b})");
        }
    }
}

#[test]
fn jacobi_moments_by_beta_function() {
    // ∫ (1-x)^a (1+x)^b = 2^{a+b+1} Γ(a+1)Γ(b+1)/Γ(a+b+2); for a = b = 1/2 this is π/2,
    // for a = 2, b = 3 it is 2^6 · 2 · 6 / 720
    let cases = [((0.5, 0.5), PI / 2.0), ((2.0, 3.0), 64.0 * 12.0 / 720.0), ((-0.5, 0.0), 2.0 * 2f64.sqrt())];
    for ((a, b), want) in cases {
        let w = JacobiWeight::new(a, b).unwrap();
        assert!((w.moment0() - want).abs() < 1e-13, "({a}, {b})");
    }
}

#[test]
fn dense_system_matches_hand_assembly() {
    let k = |x1: f64, x2: f64, y1: f64, y2: f64| 0.3 * (x1 * y2 + 0.5).sin() * (1.0 + x2 * x2 + y1);
    let u = SpaceWeight::new(0.25, 0.5, 0.0, 0.75).unwrap();
    let (w1, w2) = (JacobiWeight::CHEBYSHEV_SECOND, JacobiWeight::new(0.5, 0.0).unwrap());
    let p = FredholmProblem::new(w1, w2, u, Kernel::general(k), |y1, y2| y1 + y2).unwrap();
    for kind in [RuleKind::Gauss, RuleKind::AntiGauss] {
        let rule = nystrom_rule(&p, 3, 4, kind).unwrap();
        let sys = assemble_system_as(&p, &rule, Assembly::Dense).unwrap();
        let f = sys.operator.to_dense();
        let nodes = rule.nodes();
        let n = nodes.len();
        for i in 0..n {
            let [y1, y2] = nodes[i];
            for j in 0..n {
                let [x1, x2] = nodes[j];
                let want = f64::from(u8::from(i == j)) - u.eval(y1, y2) * k(x1, x2, y1, y2) * rule.weights()[j] / u.eval(x1, x2);
                assert!((f[(i, j)] - want).abs() < 1e-14, "({i}, {j})");
            }
            assert!((sys.rhs[i] - (y1 + y2) * u.eval(y1, y2)).abs() < 1e-15);
        }
    }
}

#[test]
fn separable_system_is_the_kronecker_product() {
    let k1 = |x: f64, y: f64| (0.4 * x * y).exp();
    let k2 = |x: f64, y: f64| 0.5 * (x + 2.0 * y).cos();
    let u = SpaceWeight::new(0.5, 0.0, 0.25, 0.25).unwrap();
    let p = FredholmProblem::new(JacobiWeight::LEGENDRE, JacobiWeight::CHEBYSHEV_SECOND, u, Kernel::separable(k1, k2), |_, _| 1.0)
        .unwrap();
    let rule = nystrom_rule(&p, 4, 3, RuleKind::Gauss).unwrap();
    let sep = assemble_system_as(&p, &rule, Assembly::Separable).unwrap().operator.to_dense();
    let (r1, r2) = (rule.rule1(), rule.rule2());
    let u1 = |x: f64| (1.0 - x).sqrt();
    let u2 = |x: f64| ((1.0 - x) * (1.0 + x)).powf(0.25);
    // Φ^{(ℓ)}_{ij} = u_ℓ(x_i) k_ℓ(x_j, x_i) λ_j / u_ℓ(x_j)
    let phi = |r: &squarequad_core::rules::QuadRule1D, k: &dyn Fn(f64, f64) -> f64, uf: &dyn Fn(f64) -> f64, i: usize, j: usize| {
        let (x, l) = (r.nodes(), r.weights());
        uf(x[i]) * k(x[j], x[i]) * l[j] / uf(x[j])
    };
    let (n1, n2) = (4, 3);
    for r in 0..n1 * n2 {
        for c in 0..n1 * n2 {
            let (i1, i2, j1, j2) = (r % n1, r / n1, c % n1, c / n1);
            let want = f64::from(u8::from(r == c)) - phi(r1, &k1, &u1, i1, j1) * phi(r2, &k2, &u2, i2, j2);
            assert!((sep[(r, c)] - want).abs() < 1e-14, "({r}, {c})");
        }
    }
}

#[test]
fn product_rule_integrates_separable_functions_exactly() {
    let (w1, w2) = (JacobiWeight::new(1.0, 2.0).unwrap(), JacobiWeight::CHEBYSHEV_FIRST);
    let r = gauss_cubature(w1, w2, 3, 2).unwrap();
    // ∫ (1-x)(1+x)^2 x^2 dx = ∫ x^2 + x^3 - x^4 - x^5 dx = 4/15; ∫ y^2 / sqrt(1-y^2) dy = π/2
    let got = r.apply(|x, y| x * x * y * y).unwrap();
    assert!((got - 4.0 / 15.0 * PI / 2.0).abs() < 1e-14);
}
