//! Command-line front end.

use crate::cm::{parse_function, ClosedForm};
use crate::error::{Error, Result};
use crate::functionals::FunctionalValues;
use crate::rates::{run_suite, BoundReport, ExperimentConfig, OrderRow, SuiteKind, SuiteOutput};
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Parser, Debug)]
#[command(name = "cmapprox", version, about = "Rates for completely monotone approximations of semigroups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// JSON experiment config.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// CSV output path (stdout when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Optional JSON mirror of the output.
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// Worker threads.
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long)]
    pub tol_rel: Option<f64>,
    #[arg(long)]
    pub tol_abs: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub suite: Option<SuiteKind>,
    #[arg(long)]
    pub scheme: Option<String>,
    #[arg(long)]
    pub generator: Option<String>,
    #[arg(long, value_delimiter = ',')]
    pub t: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    pub n: Option<Vec<u32>>,
    #[arg(long, value_delimiter = ',')]
    pub alpha: Option<Vec<f64>>,
    #[arg(long)]
    pub spectrum: Option<crate::rates::SpectrumKind>,
    #[arg(long)]
    pub order: Option<u32>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Scalar functionals of gₙ over an n and α grid.
    Functionals {
        #[arg(long)]
        g: String,
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        n: Vec<u32>,
        #[arg(long, value_delimiter = ',', default_value = "0,0.5,1")]
        alpha: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Run a bound suite and write BoundReport rows.
    VerifyBounds(Common),
    /// Lower-bound exponent fits on scalar spectral grids.
    Optimality(Common),
    /// Fitted convergence orders of a bound suite.
    Orders(Common),
    /// Sharp-constant checks for the Euler scheme.
    Sharpness(Common),
    /// Aggregate report CSVs into a pass/fail summary per theorem tag.
    Report {
        files: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

impl std::str::FromStr for SuiteKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_value(serde_json::Value::String(s.to_string()))
            .map_err(|_| Error::InvalidParameter(format!("unknown suite '{s}'")))
    }
}

impl Common {
    fn config(&self, default_suite: Option<SuiteKind>) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(p) => {
                let text = std::fs::read_to_string(p)?;
                serde_json::from_str::<ExperimentConfig>(&text)?
            }
            None => ExperimentConfig::new(
                self.suite
                    .or(default_suite)
                    .ok_or_else(|| Error::InvalidParameter("--config or --suite required".into()))?,
            ),
        };
        if let Some(s) = self.suite {
            cfg.suite = s;
        }
        macro_rules! over {
            ($($f:ident),*) => {$(if self.$f.is_some() { cfg.$f = self.$f.clone(); })*};
        }
        over!(scheme, generator, t, n, alpha, spectrum, order, tol_rel, tol_abs, seed);
        if cfg.out.is_none() {
            cfg.out = self.out.as_ref().map(|p| p.display().to_string());
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn out_path(&self, cfg: &ExperimentConfig) -> Option<PathBuf> {
        self.out.clone().or_else(|| cfg.out.as_ref().map(PathBuf::from))
    }
}

fn write_csv<T: Serialize>(rows: &[T], out: Option<&Path>) -> Result<()> {
    let sink: Box<dyn Write> = match out {
        Some(p) => Box::new(std::fs::File::create(p)?),
        None => Box::new(std::io::stdout().lock()),
    };
    let mut w = csv::Writer::from_writer(sink);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

fn write_json<T: Serialize + ?Sized>(v: &T, out: Option<&Path>) -> Result<()> {
    if let Some(p) = out {
        std::fs::write(p, serde_json::to_string_pretty(v)?)?;
    }
    Ok(())
}

fn sidecar(out: Option<&Path>, suffix: &str) -> Option<PathBuf> {
    let p = out?;
    let stem = p.file_stem()?.to_string_lossy();
    Some(p.with_file_name(format!("{stem}.{suffix}.csv")))
}

fn print_fits(fits: &[OrderRow]) {
    for f in fits {
        eprintln!(
            "order {} {} t={} alpha={} {}: slope {:.4} (r2 {:.4}) window [{}, {}] {}",
            f.scheme,
            f.generator,
            f.t,
            f.alpha,
            f.quantity,
            f.slope,
            f.r2,
            f.lo,
            f.hi,
            if f.pass { "pass" } else { "FAIL" }
        );
    }
}

#[derive(Serialize)]
struct FunctionalRow {
    g: String,
    n: u32,
    alpha: f64,
    #[serde(rename = "L")]
    l: Option<f64>,
    a: Option<f64>,
    b: Option<f64>,
    c_alpha_quadrature: Option<f64>,
    c_alpha_exact: Option<f64>,
    d0: Option<f64>,
    d1: Option<f64>,
    residual_flags: String,
}

fn functionals(g: &str, n: &[u32], alpha: &[f64], out: Option<&Path>, json: Option<&Path>) -> Result<bool> {
    if n.is_empty() || n.contains(&0) {
        return Err(Error::InvalidParameter("n grid must be nonempty and positive".into()));
    }
    let base = parse_function(g)?;
    let is_euler = matches!(base.closed_form(), Some(ClosedForm::Euler));
    let mut rows = Vec::new();
    for &k in n {
        let gn = base.power_scale(k)?;
        let v = FunctionalValues::compute(&gn, alpha, is_euler.then_some(k));
        for (i, &al) in alpha.iter().enumerate() {
            rows.push(FunctionalRow {
                g: g.to_string(),
                n: k,
                alpha: al,
                l: v.l,
                a: v.a,
                b: v.b,
                c_alpha_quadrature: v.c_quadrature[i].1,
                c_alpha_exact: v.c_exact.get(i).and_then(|p| p.1),
                d0: v.d0,
                d1: v.d1,
                residual_flags: v.flags.join(";"),
            });
        }
    }
    write_csv(&rows, out)?;
    write_json(&rows, json)?;
    Ok(true)
}

#[derive(Serialize, Deserialize)]
struct SummaryRow {
    theorem: String,
    rows: usize,
    passed: usize,
    failed: usize,
    min_slack: f64,
}

fn report(files: &[PathBuf], out: Option<&Path>) -> Result<bool> {
    if files.is_empty() {
        return Err(Error::InvalidParameter("no report files given".into()));
    }
    let mut agg: BTreeMap<String, SummaryRow> = BTreeMap::new();
    let mut fits_ok = true;
    for f in files {
        let mut r = csv::Reader::from_path(f)?;
        let headers = r.headers()?.clone();
        if headers.iter().any(|h| h == "theorem") {
            for row in r.deserialize::<BoundReport>() {
                let row = row?;
                let e = agg.entry(row.theorem.clone()).or_insert(SummaryRow {
                    theorem: row.theorem.clone(),
                    rows: 0,
                    passed: 0,
                    failed: 0,
                    min_slack: f64::INFINITY,
                });
                e.rows += 1;
                if row.pass {
                    e.passed += 1;
                } else {
                    e.failed += 1;
                }
                e.min_slack = e.min_slack.min(row.slack);
            }
        } else if headers.iter().any(|h| h == "quantity") {
            for row in r.deserialize::<OrderRow>() {
                let row = row?;
                let key = format!("order:{}", row.quantity);
                let e = agg.entry(key.clone()).or_insert(SummaryRow {
                    theorem: key,
                    rows: 0,
                    passed: 0,
                    failed: 0,
                    min_slack: f64::INFINITY,
                });
                e.rows += 1;
                if row.pass {
                    e.passed += 1;
                } else {
                    e.failed += 1;
                    fits_ok = false;
                }
            }
        } else {
            return Err(Error::InvalidParameter(format!("{}: not a bound or order report", f.display())));
        }
    }
    let rows: Vec<SummaryRow> = agg.into_values().collect();
    let ok = fits_ok && rows.iter().all(|r| r.failed == 0);
    write_csv(&rows, out)?;
    Ok(ok)
}

fn suite_command(common: &Common, default: Option<SuiteKind>, want: &str) -> Result<bool> {
    if let Some(j) = common.jobs {
        // the global pool can only be set once per process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global();
    }
    let cfg = common.config(default)?;
    let out = common.out_path(&cfg);
    let res: SuiteOutput = run_suite(&cfg)?;
    match (want, cfg.suite) {
        ("orders", _) => {
            write_csv(&res.fits, out.as_deref())?;
        }
        (_, SuiteKind::Optimality) => {
            write_csv(&res.optimality, out.as_deref())?;
            match sidecar(out.as_deref(), "orders") {
                Some(p) => write_csv(&res.fits, Some(&p))?,
                None => print_fits(&res.fits),
            }
        }
        (_, SuiteKind::Sharpness) => {
            write_csv(&res.sharpness, out.as_deref())?;
        }
        _ => {
            write_csv(&res.reports, out.as_deref())?;
            match sidecar(out.as_deref(), "orders") {
                Some(p) => write_csv(&res.fits, Some(&p))?,
                None => print_fits(&res.fits),
            }
            let failed = res.reports.iter().filter(|r| !r.pass).count();
            eprintln!("{} rows, {} failed", res.reports.len(), failed);
        }
    }
    write_json(&res, common.json.as_deref())?;
    Ok(res.all_pass() && res.fits.iter().all(|f| f.pass))
}

/// Parse arguments and run; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let res = match &cli.command {
        Command::Functionals { g, n, alpha, out, json } => functionals(g, n, alpha, out.as_deref(), json.as_deref()),
        Command::VerifyBounds(c) => suite_command(c, None, "bounds"),
        Command::Optimality(c) => suite_command(c, Some(SuiteKind::Optimality), "optimality"),
        Command::Orders(c) => suite_command(c, None, "orders"),
        Command::Sharpness(c) => suite_command(c, Some(SuiteKind::Sharpness), "sharpness"),
        Command::Report { files, out } => report(files, out.as_deref()),
    };
    match res {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e @ (Error::InvalidParameter(_) | Error::Json(_))) => {
            eprintln!("error: {e}");
            2
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
