//! Acceptance criteria. Each test prints one `criterion N: PASS|FAIL` line to stdout.

use cmapprox::cm::builtins::{chung, euler, exp, frac_tail, hille, kendall, spline, yosida};
use cmapprox::cm::bspline::{bspline, spline_power_transform};
use cmapprox::cm::{CmClass, CmFunction};
use cmapprox::functionals::{abd_g_path, b_of, c_alpha, d0_of, euler_c_alpha_exact, functional_l, g0_integral};
use cmapprox::numeric::C64;
use cmapprox::opcalc::{diag_positive, hp_apply_path, laplacian_dirichlet_1d, random_diagonalizable, semigroup_constants, HpPath};
use cmapprox::rates::{euler_sup, run_suite, test_vectors, ExperimentConfig, SpectrumKind, SuiteKind, SuiteOutput};
use cmapprox::special::ln_gamma;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::io::Write;

const DIAG_IMAG: &str = "diag_imag:k=128,min=0.1,max=100";

fn line(k: u32, pass: bool, detail: &str) {
    // bypasses the harness capture so the line shows in the test log
    let mut o = std::io::stdout().lock();
    let _ = writeln!(o, "criterion {k:>2}: {} {detail}", if pass { "PASS" } else { "FAIL" });
    drop(o);
    assert!(pass, "criterion {k} failed: {detail}");
}

fn dyadic(lo: u32, hi: u32) -> Vec<u32> {
    (lo..=hi).map(|k| 1u32 << k).collect()
}

fn m(g: &CmFunction, k: usize) -> f64 {
    g.moment(k).finite().unwrap()
}

/// Σ_{k<n} 1/k - γ, the digamma function at a positive integer.
fn psi_int(n: u32) -> f64 {
    const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
    (1..n).map(|k| 1.0 / k as f64).sum::<f64>() - EULER_GAMMA
}

#[test]
fn criterion_01_euler_digamma() {
    let mut worst: f64 = 0.0;
    for n in 1..=64u32 {
        let gn = euler().power_scale(n).unwrap();
        let nf = n as f64;
        let c0 = c_alpha(&gn, 0.0).unwrap();
        let c1 = c_alpha(&gn, 1.0).unwrap();
        worst = worst.max((c0 - (nf.ln() - psi_int(n))).abs());
        worst = worst.max((c1 - (psi_int(n + 1) - nf.ln())).abs());
    }
    for n in [1u32, 2, 3, 5, 8, 16, 32, 64] {
        let gn = euler().power_scale(n).unwrap();
        let nf = n as f64;
        for i in 1..=9 {
            let a = i as f64 / 10.0;
            let gamma = 1.0 - (ln_gamma(nf + a) - ln_gamma(nf) - a * nf.ln()).exp();
            let exact = gamma / (a * (1.0 - a));
            let q = c_alpha(&gn, a).unwrap();
            worst = worst.max((q - exact).abs());
            worst = worst.max((euler_c_alpha_exact(n, a).unwrap() - exact).abs());
        }
    }
    line(1, worst <= 1e-8, &format!("max deviation {worst:.3e} (tol 1e-8)"));
}

fn b2_builtins() -> Vec<CmFunction> {
    vec![
        exp(),
        euler(),
        spline(),
        kendall(0.25).unwrap(),
        kendall(0.5).unwrap(),
        yosida(0.5).unwrap(),
        yosida(1.0).unwrap(),
        yosida(4.0).unwrap(),
        hille(),
        chung(&[0.25, 0.5, 0.25]).unwrap(),
        chung(&[0.0, 0.3, 0.3, 0.4]).unwrap(),
    ]
}

#[test]
fn criterion_02_density_identities() {
    let (mut e_g, mut e_g0, mut e_l) = (0.0f64, 0.0f64, 0.0f64);
    let mut failures = Vec::new();
    for g in b2_builtins() {
        let a = (m(&g, 2) - 1.0) / 2.0;
        match (abd_g_path(&g), g0_integral(&g), functional_l(&g)) {
            (Ok((ig, _, _)), Ok(ig0), Ok(l)) => {
                e_g = e_g.max((ig - a).abs());
                e_g0 = e_g0.max((ig0 - 2.0 * a).abs());
                e_l = e_l.max((l.delta1_norm - 2.0 * l.l).abs());
            }
            r => failures.push(format!("{}: {:?}", g.name(), (r.0.err(), r.1.err(), r.2.err()))),
        }
    }
    let pass = failures.is_empty() && e_g <= 1e-10 && e_g0 <= 1e-10 && e_l <= 1e-12;
    line(
        2,
        pass,
        &format!("|∫G-a| {e_g:.2e}, |∫G0-(g''-1)| {e_g0:.2e}, |‖Δ1‖-2L| {e_l:.2e}; errors {failures:?}"),
    );
}

/// k-th forward difference quotient at 0 of g(z) - e^{-z}, which is O(z²) and keeps roundoff small.
fn forward_diff(g: &CmFunction, k: usize, h: f64) -> f64 {
    let mut binom = 1.0;
    let mut acc = 0.0;
    for j in 0..=k {
        if j > 0 {
            binom = binom * (k - j + 1) as f64 / j as f64;
        }
        let sign = if (k - j) % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * binom * g.excess_over_exp(C64::new(j as f64 * h, 0.0)).unwrap().re;
    }
    acc / h.powi(k as i32)
}

/// Richardson tableau over halvings of h, eliminating error terms h^{p} for p in `powers`.
fn richardson(g: &CmFunction, k: usize, h0: f64, powers: &[f64]) -> f64 {
    let mut prev: Vec<f64> = Vec::new();
    for i in 0..=powers.len() {
        let mut row = vec![forward_diff(g, k, h0 / 2f64.powi(i as i32))];
        for j in 1..=i {
            let f = 2f64.powf(powers[j - 1]);
            row.push((f * row[j - 1] - prev[j - 1]) / (f - 1.0));
        }
        prev = row;
    }
    *prev.last().unwrap()
}

#[test]
fn criterion_03_power_scale_derivatives() {
    let mut worst: f64 = 0.0;
    let mut where_ = String::new();
    let mut fns = b2_builtins();
    fns.retain(|g| g.name() != "exp");
    let integer: Vec<f64> = (1..=7).map(|p| p as f64).collect();
    for g in &fns {
        for n in [1u32, 2, 3, 5, 8] {
            let gn = g.power_scale(n).unwrap();
            // step scale from the spread of the measure
            let h0 = 0.4 / gn.moment(4).finite().map_or(m(&gn, 2).sqrt(), |m4| m4.powf(0.25)).max(1.0);
            for k in 1..=4usize {
                let Some(mk) = gn.moment(k).finite() else { continue };
                let (exact, e) = if k % 2 == 0 { (mk, 1.0) } else { (-mk, -1.0) };
                let fd = richardson(&gn, k, h0, &integer) + e;
                let rel = (fd - exact).abs() / exact.abs();
                if rel > worst {
                    worst = rel;
                    where_ = format!("{} k={k}", gn.name());
                }
            }
        }
    }
    // frac_tail: only g'(0) = -1 exists; g(h) = 1 - h + c h^{1+γ} + ...
    for gamma in [0.3, 0.5, 0.8] {
        let g = frac_tail(gamma).unwrap();
        for n in [1u32, 2, 3, 5, 8] {
            let gn = g.power_scale(n).unwrap();
            let powers = [gamma, 1.0, 1.0 + gamma, 2.0, 2.0 + gamma, 3.0, 3.0 + gamma, 4.0, 4.0 + gamma];
            let fd = richardson(&gn, 1, 0.02, &powers) - 1.0;
            let rel = (fd + 1.0).abs();
            if rel > worst {
                worst = rel;
                where_ = format!("{} k=1", gn.name());
            }
        }
    }
    let mut e_b: f64 = 0.0;
    let mut e_d: f64 = 0.0;
    for g in fns.iter().filter(|g| g.class() >= CmClass::B4) {
        let (m2, m3, m4) = (m(g, 2), m(g, 3), m(g, 4));
        let b = (-2.0 + 3.0 * m2 - m3) / 6.0;
        for n in [1u32, 2, 3, 5, 8] {
            let gn = g.power_scale(n).unwrap();
            let nf = n as f64;
            e_b = e_b.max((b_of(&gn).unwrap() * nf * nf - b).abs());
            let d0 = (m2 - 1.0).powi(2) / (4.0 * nf * nf)
                + (-6.0 + 12.0 * m2 - 3.0 * m2 * m2 - 4.0 * m3 + m4) / (12.0 * nf.powi(3));
            e_d = e_d.max((d0_of(&gn).unwrap() - d0).abs());
        }
    }
    let pass = worst <= 1e-6 && e_b <= 1e-10 && e_d <= 1e-10;
    line(
        3,
        pass,
        &format!("max rel fd deviation {worst:.2e} ({where_}), |b[gn]n²-b| {e_b:.2e}, |d0 - formula| {e_d:.2e}"),
    );
}

#[test]
fn criterion_04_c_alpha_asymptotics() {
    let ns = dyadic(2, 8);
    let mut summary = Vec::new();
    let mut pass = true;
    for (name, g) in [("euler", euler()), ("spline", spline()), ("hille", hille())] {
        let a = (m(&g, 2) - 1.0) / 2.0;
        for alpha in [0.0, 0.5, 1.0] {
            let vals: Result<Vec<f64>, _> = ns
                .iter()
                .map(|&n| {
                    let nf = n as f64;
                    c_alpha(&g.power_scale(n)?, alpha).map(|c| nf * nf * (c - a / nf).abs())
                })
                .collect();
            match vals {
                Ok(v) => {
                    let head = v[..v.len() - 1].iter().cloned().fold(0.0, f64::max);
                    let k = v.iter().cloned().fold(0.0, f64::max);
                    // bounded: finite and not growing at the end of the range
                    let mut ok = k.is_finite() && *v.last().unwrap() <= 1.1 * head;
                    if name == "euler" && alpha == 0.0 {
                        ok &= k <= 1.0 / 12.0 + 1e-6;
                    }
                    pass &= ok;
                    summary.push(format!("{name}/α={alpha}: C={k:.4}{}", if ok { "" } else { " (unbounded)" }));
                }
                Err(e) => {
                    pass = false;
                    summary.push(format!("{name}/α={alpha}: {e}"));
                }
            }
        }
    }
    line(4, pass, &summary.join("; "));
}

fn suite(json: &str) -> SuiteOutput {
    run_suite(&ExperimentConfig::from_json(json).unwrap()).unwrap()
}

fn failures(out: &SuiteOutput) -> String {
    let r = out.reports.iter().filter(|r| !r.pass).count();
    let f: Vec<String> =
        out.fits.iter().filter(|f| !f.pass).map(|f| format!("{}/t={}/α={}: {:.3}", f.scheme, f.t, f.alpha, f.slope)).collect();
    format!("{r} failing rows, failing fits {f:?}")
}

#[test]
fn criterion_05_first_order_suite() {
    let mut pass = true;
    let mut detail = Vec::new();
    let mut rows = 0;
    for s in ["kendall", "euler", "yosida", "spline", "hille"] {
        let out = suite(&format!(r#"{{"suite":"first","scheme":"{s}","generator":"{DIAG_IMAG}"}}"#));
        rows += out.reports.len();
        let theorems = ["first_a2", "first_a1", "first_frac"];
        let covered = theorems.iter().all(|t| out.reports.iter().any(|r| r.theorem == *t));
        if !out.all_pass() || !covered {
            pass = false;
            detail.push(format!("{s}: {}", failures(&out)));
        }
        if s == "kendall" {
            // t(1-t)/(2n)·‖A²x‖ with ‖A²x‖ from the eigenvalues directly
            let a = cmapprox::opcalc::parse_generator(DIAG_IMAG).unwrap();
            let vals = a.eigenvalues().unwrap().to_vec();
            let vecs = test_vectors(&a, cmapprox::rates::DEFAULT_SEED).unwrap();
            let mut worst: f64 = 0.0;
            let mut seen = 0;
            for r in out.reports.iter().filter(|r| r.theorem == "first_a2") {
                let x = &vecs.iter().find(|v| v.id == r.vector_id).unwrap().x;
                let a2x = x.iter().zip(&vals).map(|(x, l)| (l * l * x).norm_sqr()).sum::<f64>().sqrt();
                let intro = r.t * (1.0 - r.t) / (2.0 * r.n as f64) * a2x;
                worst = worst.max((r.bound - intro).abs() / intro.max(1e-300));
                seen += 1;
            }
            let ok = seen > 0 && worst <= 1e-12;
            pass &= ok;
            detail.push(format!("kendall intro bound rel deviation {worst:.1e} over {seen} rows"));
        }
    }
    line(5, pass, &format!("{rows} rows; {}", detail.join("; ")));
}

#[test]
fn criterion_06_non_b2_suite() {
    let mut pass = true;
    let mut detail = Vec::new();
    for gamma in [0.3, 0.5, 0.8] {
        let out = suite(&format!(
            r#"{{"suite":"nonb2","scheme":"frac_tail:gamma={gamma}","generator":"{DIAG_IMAG}","n":[{}]}}"#,
            dyadic(4, 14).iter().map(|n| n.to_string()).collect::<Vec<_>>().join(",")
        ));
        let env = out.fits.iter().find(|f| f.quantity == "bound_envelope" && f.alpha == 1.0).unwrap();
        let ok_fit = (env.slope + gamma / 2.0).abs() <= 0.07;
        let ok_rows = out.reports.iter().all(|r| r.pass) && !out.reports.is_empty();
        pass &= ok_fit && ok_rows;
        detail.push(format!("γ={gamma}: slope {:.3} (target {:.3}), rows {}", env.slope, -gamma / 2.0, if ok_rows { "pass" } else { "FAIL" }));
    }
    line(6, pass, &detail.join("; "));
}

#[test]
fn criterion_07_second_order_suites() {
    let mut pass = true;
    let mut detail = Vec::new();
    for s in ["kendall", "euler", "yosida", "spline", "hille"] {
        let out = suite(&format!(r#"{{"suite":"second","scheme":"{s}","generator":"{DIAG_IMAG}"}}"#));
        let worst = out.fits.iter().filter(|f| f.quantity != "exact").map(|f| f.slope).fold(f64::NEG_INFINITY, f64::max);
        let ok = out.all_pass() && out.fits.iter().all(|f| f.quantity == "exact" || f.slope <= -1.4);
        pass &= ok;
        detail.push(format!("{s}: worst slope {worst:.3}{}", if ok { "" } else { " FAIL" }));
    }
    for s in ["euler", "spline"] {
        for gen in ["laplacian:d=128", "diag_pos:k=128"] {
            let out = suite(&format!(r#"{{"suite":"holo2","scheme":"{s}","generator":"{gen}"}}"#));
            let worst = out.fits.iter().map(|f| f.slope).fold(f64::NEG_INFINITY, f64::max);
            let ok = out.all_pass() && !out.fits.is_empty() && out.fits.iter().all(|f| f.slope <= -1.85);
            pass &= ok;
            detail.push(format!("holo2 {s}/{gen}: worst slope {worst:.3}{}", if ok { "" } else { " FAIL" }));
        }
    }
    line(7, pass, &detail.join("; "));
}

#[test]
fn criterion_08_holomorphic_suite() {
    let e = std::f64::consts::E;
    let mut pass = true;
    let mut detail = Vec::new();
    for a in [laplacian_dirichlet_1d(128, 1.0).unwrap(), diag_positive(&cmapprox::numeric::logspace(1e-2, 1e2, 128)).unwrap()] {
        let mc = semigroup_constants(&a).unwrap();
        let ok = mc.m(0) == 1.0 && (mc.m(1) - 1.0 / e).abs() < 1e-14 && (mc.m(2) - 4.0 / (e * e)).abs() < 1e-14;
        pass &= ok;
        detail.push(format!("{} M0..M2 {:?}", a.label(), &mc.values[..3]));
    }
    for gen in ["laplacian:d=128", "diag_pos:k=128"] {
        for s in ["euler", "spline", "hille", "yosida", "kendall"] {
            let out = suite(&format!(r#"{{"suite":"holo","scheme":"{s}","generator":"{gen}"}}"#));
            let mut need = vec!["holo_norm", "holo_a1", "holo_frac", "holo_c_alpha"];
            if s == "euler" {
                need.push("holo_euler_sharp");
            }
            let covered = need.iter().all(|t| out.reports.iter().any(|r| r.theorem == *t));
            let sharp_alphas: Vec<f64> = [0.0, 0.25, 0.5, 0.75, 1.0]
                .into_iter()
                .filter(|&al| out.reports.iter().any(|r| r.theorem == "holo_euler_sharp" && r.alpha == al))
                .collect();
            let ok = out.all_pass() && covered && (s != "euler" || sharp_alphas.len() == 5);
            pass &= ok;
            if !ok {
                detail.push(format!("{s}/{gen}: {} covered={covered}", failures(&out)));
            }
        }
    }
    line(8, pass, &detail.join("; "));
}

#[test]
fn criterion_09_euler_sharp_constant() {
    let out = suite(r#"{"suite":"sharpness","n":[1024,2048,4096,8192,16384]}"#);
    let n = 1u32 << 14;
    let (_, s) = euler_sup(n).unwrap();
    // brute-force sup on a fine grid around the maximiser
    let nf = n as f64;
    let brute = (1..=400000)
        .map(|i| i as f64 * 1e-5)
        .map(|t| ((-nf * (t / nf).ln_1p()).exp() - (-t).exp()).abs())
        .fold(0.0, f64::max);
    let lim = 2.0 * (-2.0f64).exp();
    let ratio = nf * s / lim;
    let cfit = out.sharpness.iter().find(|r| r.check == "euler_c_fit").unwrap().value;
    let pass = (ratio - 1.0).abs() <= 0.01 && cfit.is_finite() && (s - brute).abs() <= 1e-9 * s && out.all_pass();
    line(9, pass, &format!("n·sup/2e^-2 = {ratio:.6} at n=2^14, fitted c = {cfit:.4}, grid check {:.1e}", (s - brute).abs()));
}

#[test]
fn criterion_10_optimality() {
    let mut pass = true;
    let mut detail = Vec::new();
    let runs = [
        (SpectrumKind::Imaginary, 1u32, vec![0.5, 1.0, 1.5, 2.0]),
        (SpectrumKind::Positive, 1, vec![0.0, 0.5, 1.0]),
        (SpectrumKind::Positive, 2, vec![0.0, 0.5, 1.0]),
    ];
    for (spec, order, alphas) in runs {
        let mut cfg = ExperimentConfig::new(SuiteKind::Optimality);
        cfg.scheme = Some("euler".into());
        cfg.spectrum = Some(spec);
        cfg.order = Some(order);
        cfg.alpha = Some(alphas);
        let out = run_suite(&cfg).unwrap();
        for f in &out.fits {
            let target = match (spec, order) {
                (SpectrumKind::Imaginary, _) => -f.alpha / 2.0,
                (_, o) => -(o as f64),
            };
            let ok = f.pass && f.quantity.ends_with("_pass") && (f.slope - target).abs() <= 0.1;
            pass &= ok;
            if !ok {
                detail.push(format!("{spec:?}/order{order}/t={}/α={}: {} slope {:.3}", f.t, f.alpha, f.quantity, f.slope));
            }
        }
        detail.push(format!("{spec:?} order {order}: {} fits", out.fits.len()));
    }
    line(10, pass, &detail.join("; "));
}

#[test]
fn criterion_11_shift_sharpness() {
    let out = suite(r#"{"suite":"sharpness","n":[2,4,16,64,256,1024]}"#);
    let target = 1.0 / (3.0 * (2.0 * std::f64::consts::PI).sqrt());
    let i2_ok = out.sharpness.iter().filter(|r| r.check == "shift_i2").all(|r| r.value <= 2.0 / (r.n as f64).powi(2));
    let s = out.sharpness.iter().find(|r| r.check == "shift_i1_scaled" && r.n == 1024).unwrap().value;
    let pass = i2_ok && s >= 0.95 * target;
    line(11, pass, &format!("|I2| ≤ 2/n² on the grid: {i2_ok}; n^1.5|I1| at 2^10 = {s:.4} (1/(3√(2π)) = {target:.4})"));
}

#[test]
fn criterion_12_bspline_identity() {
    let mut worst: f64 = 0.0;
    for n in 1..=8u32 {
        for z in [0.1f64, 1.0, 10.0] {
            let s = (-(-2.0 * z).exp_m1()) / (2.0 * z);
            let v = spline_power_transform(n, z).unwrap();
            worst = worst.max((v - s.powi(n as i32)).abs());
        }
    }
    // recursion sanity: B_{k} integrates to 1
    let mass: f64 = (0..4000).map(|i| bspline(3, (i as f64 + 0.5) * 1e-3)).sum::<f64>() * 1e-3;
    let pass = worst <= 1e-10 && (mass - 1.0).abs() < 1e-6;
    line(12, pass, &format!("max deviation {worst:.2e}, ∫B_3 = {mass:.8}"));
}

fn max_diff(a: &nalgebra::DMatrix<C64>, b: &nalgebra::DMatrix<C64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

#[test]
fn criterion_13_calculus_paths() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut worst: f64 = 0.0;
    let fns = [euler(), chung(&[0.25, 0.5, 0.25]).unwrap(), chung(&[0.1, 0.2, 0.3, 0.4]).unwrap()];
    for i in 0..20 {
        let a = random_diagonalizable(4 + i % 5, &mut rng).unwrap();
        for g in &fns {
            let s = hp_apply_path(g, &a, HpPath::Spectral).unwrap();
            let q = hp_apply_path(g, &a, HpPath::Quadrature).unwrap();
            let r = hp_apply_path(g, &a, HpPath::Rational).unwrap();
            worst = worst.max(max_diff(&s, &q)).max(max_diff(&s, &r));
            let g4 = g.power_scale(4).unwrap();
            let s4 = hp_apply_path(&g4, &a, HpPath::Spectral).unwrap();
            let r4 = hp_apply_path(&g4, &a, HpPath::Rational).unwrap();
            worst = worst.max(max_diff(&s4, &r4));
        }
    }
    line(13, worst <= 1e-8, &format!("max entrywise disagreement {worst:.2e} over 20 matrices"));
}
