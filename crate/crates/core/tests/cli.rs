use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cmapprox"))
}

fn run(args: &[&str]) -> (i32, String, String) {
    let o = bin().args(args).output().unwrap();
    (o.status.code().unwrap(), String::from_utf8(o.stdout).unwrap(), String::from_utf8(o.stderr).unwrap())
}

const SMALL: &[&str] = &["--suite", "first", "--scheme", "euler", "--generator", "diag_imag:k=16,min=0.1,max=100", "--n", "4,8,16,32"];

#[test]
fn verify_bounds_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for (p, jobs) in [(&a, "1"), (&b, "4")] {
        let mut args = vec!["verify-bounds", "--out", p.to_str().unwrap(), "--jobs", jobs];
        args.extend_from_slice(SMALL);
        let (code, _, err) = run(&args);
        assert_eq!(code, 0, "{err}");
    }
    let (x, y) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(x, y);
    let text = String::from_utf8(x).unwrap();
    assert!(text.starts_with("scheme,generator,t,n,alpha,vector_id,error,bound,slack,theorem,pass"));
    assert!(Path::new(&dir.path().join("a.orders.csv")).exists());
}

#[test]
fn usage_errors_exit_two() {
    let (code, _, err) = run(&["verify-bounds", "--suite", "first", "--scheme", "euler", "--generator", "diag_imag:k=8", "--n"]);
    assert_eq!(code, 2, "{err}");
    let (code, _, err) = run(&["verify-bounds", "--suite", "first", "--scheme", "nope", "--generator", "diag_imag:k=8"]);
    assert_eq!(code, 2);
    assert!(err.contains("available schemes"), "{err}");
    let (code, _, _) = run(&["no-such-command"]);
    assert_eq!(code, 2);
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    std::fs::write(&cfg, r#"{"suite":"first","scheme":"euler","generator":"diag_imag:k=8","n":[]}"#).unwrap();
    let (code, _, _) = run(&["verify-bounds", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code, 2);
    std::fs::write(&cfg, r#"{"suite":"first","bogus":1}"#).unwrap();
    let (code, _, _) = run(&["verify-bounds", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code, 2);
}

#[test]
fn runtime_errors_exit_one() {
    // hille is outside the integrability class holo2 needs
    let (code, _, err) = run(&["verify-bounds", "--suite", "holo2", "--scheme", "hille", "--generator", "diag_pos:k=8", "--n", "4,8,16,32"]);
    assert_eq!(code, 1, "{err}");
}

#[test]
fn functionals_matches_exact_euler_column() {
    let (code, out, err) = run(&["functionals", "--g", "euler", "--n", "1,4,16", "--alpha", "0.5"]);
    assert_eq!(code, 0, "{err}");
    let mut rdr = csv::Reader::from_reader(out.as_bytes());
    let h = rdr.headers().unwrap().clone();
    let iq = h.iter().position(|c| c == "c_alpha_quadrature").unwrap();
    let ie = h.iter().position(|c| c == "c_alpha_exact").unwrap();
    let mut rows = 0;
    for r in rdr.records() {
        let r = r.unwrap();
        let q: f64 = r[iq].parse().unwrap();
        let e: f64 = r[ie].parse().unwrap();
        assert!((q - e).abs() < 1e-10);
        rows += 1;
    }
    assert_eq!(rows, 3);
}

#[test]
fn report_aggregates_by_theorem() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let mut args = vec!["verify-bounds", "--out", a.to_str().unwrap()];
    args.extend_from_slice(SMALL);
    assert_eq!(run(&args).0, 0);
    let (code, out, err) = run(&["report", a.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    assert!(out.starts_with("theorem,rows,passed,failed,min_slack"));
    for t in ["first_a1", "first_a2", "first_frac"] {
        assert!(out.lines().any(|l| l.starts_with(t)), "{out}");
    }
}

#[test]
fn sharpness_and_optimality_run() {
    let (code, out, err) = run(&["sharpness", "--n", "64,256"]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("euler_sup"));
    let (code, _, err) = run(&["optimality", "--scheme", "euler", "--spectrum", "positive", "--order", "1", "--alpha", "0.5", "--t", "1"]);
    assert_eq!(code, 0, "{err}");
}
