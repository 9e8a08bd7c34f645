//! Config-driven experiment runner.

use super::bounds::{eigenvalues, finite, first_order_bounds, non_b2_bounds, scheme_error, second_order_bounds, second_residual};
use super::holo::{fit_constants, holomorphic_bounds, holomorphic_second_order, FittedConstants};
use super::optimality::{optimality_lower, OptimalityRow, SpectrumKind};
use super::report::{fit_order, sort_reports, BoundReport, Ctx, OrderRow, Policy};
use super::sharpness::{euler_scalar_sharpness, shift_second_order_sharpness, SharpnessRow};
use super::vectors::{test_vectors, DEFAULT_SEED};
use crate::cm::{parse_function, CmClass, Family};
use crate::error::{Error, Result};
use crate::opcalc::{parse_generator, GeneratorMatrix};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SuiteKind {
    First,
    Nonb2,
    Second,
    Holo,
    Holo2,
    Optimality,
    Sharpness,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub suite: SuiteKind,
    #[serde(default)]
    pub scheme: Option<String>,
    #[serde(default)]
    pub generator: Option<String>,
    #[serde(default)]
    pub t: Option<Vec<f64>>,
    #[serde(default)]
    pub n: Option<Vec<u32>>,
    #[serde(default)]
    pub alpha: Option<Vec<f64>>,
    /// Optimality only.
    #[serde(default)]
    pub spectrum: Option<SpectrumKind>,
    #[serde(default)]
    pub order: Option<u32>,
    #[serde(default)]
    pub tol_rel: Option<f64>,
    #[serde(default)]
    pub tol_abs: Option<f64>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub out: Option<String>,
}

pub const DEFAULT_T: [f64; 3] = [0.25, 1.0, 4.0];

pub fn default_n() -> Vec<u32> {
    (2..=12).map(|k| 1u32 << k).collect()
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let c: Self = serde_json::from_str(text)?;
        c.validate()?;
        Ok(c)
    }

    pub fn new(suite: SuiteKind) -> Self {
        Self {
            suite,
            scheme: None,
            generator: None,
            t: None,
            n: None,
            alpha: None,
            spectrum: None,
            order: None,
            tol_rel: None,
            tol_abs: None,
            seed: None,
            out: None,
        }
    }

    pub fn t_grid(&self) -> Vec<f64> {
        self.t.clone().unwrap_or_else(|| DEFAULT_T.to_vec())
    }

    pub fn n_grid(&self) -> Vec<u32> {
        self.n.clone().unwrap_or_else(default_n)
    }

    pub fn alpha_grid(&self) -> Vec<f64> {
        if let Some(a) = &self.alpha {
            return a.clone();
        }
        match self.suite {
            SuiteKind::First => vec![0.5, 1.0, 2.0],
            SuiteKind::Nonb2 => vec![0.5, 1.0],
            SuiteKind::Second => vec![],
            SuiteKind::Holo | SuiteKind::Holo2 => vec![0.0, 0.25, 0.5, 0.75, 1.0],
            SuiteKind::Optimality => vec![1.0],
            SuiteKind::Sharpness => vec![],
        }
    }

    pub fn policy(&self) -> Policy {
        let d = Policy::default();
        Policy { tol_rel: self.tol_rel.unwrap_or(d.tol_rel), tol_abs: self.tol_abs.unwrap_or(d.tol_abs) }
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }

    fn alpha_range(&self) -> (f64, f64, bool) {
        // (lo, hi, lo inclusive)
        match self.suite {
            SuiteKind::First => (0.0, 2.0, false),
            SuiteKind::Nonb2 => (0.0, 1.0, false),
            SuiteKind::Holo | SuiteKind::Holo2 => (0.0, 1.0, true),
            SuiteKind::Optimality => (0.0, 2.0, true),
            SuiteKind::Second | SuiteKind::Sharpness => (0.0, f64::INFINITY, true),
        }
    }

    /// Usage-level checks; failures map to exit code 2.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if let Some(n) = &self.n {
            if n.is_empty() {
                return bad("empty n grid".into());
            }
            if n.contains(&0) {
                return bad("n must be positive".into());
            }
        }
        if let Some(t) = &self.t {
            if t.is_empty() || t.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
                return bad("t grid must be nonempty and positive".into());
            }
        }
        let (lo, hi, inc) = self.alpha_range();
        for &a in self.alpha.iter().flatten() {
            let ok = a.is_finite() && a <= hi && (a > lo || (inc && a == lo));
            if !ok {
                return bad(format!("alpha {a} outside the legal range of the {:?} suite", self.suite));
            }
        }
        match self.suite {
            SuiteKind::Sharpness => {}
            SuiteKind::Optimality => {
                if self.scheme.is_none() {
                    return bad("optimality needs a scheme".into());
                }
            }
            _ => {
                if self.scheme.is_none() || self.generator.is_none() {
                    return bad("bound suites need a scheme and a generator".into());
                }
            }
        }
        if let Some(tol) = self.tol_rel.into_iter().chain(self.tol_abs).find(|x| !(*x >= 0.0)) {
            return bad(format!("tolerance {tol} must be nonnegative"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SuiteOutput {
    pub reports: Vec<BoundReport>,
    pub fits: Vec<OrderRow>,
    pub optimality: Vec<OptimalityRow>,
    pub sharpness: Vec<SharpnessRow>,
    /// Fit summaries for optimality runs, as order rows.
    pub notes: Vec<String>,
}

impl SuiteOutput {
    pub fn all_pass(&self) -> bool {
        self.reports.iter().all(|r| r.pass)
            && self.fits.iter().all(|f| f.pass)
            && self.sharpness.iter().all(|s| s.pass != Some(false))
    }
}

const SCHEMES: &str = "exp, euler, spline, hille, kendall, yosida, chung:a=.., frac_tail:gamma=.., measure:<path>";
const GENERATORS: &str = "diag_imag:k=,min=,max= | diag_pos:k=,min=,max= | advection:d= | laplacian:d=,scale=";

pub fn parse_family(s: &str) -> Result<Family> {
    Family::parse(s).map_err(|e| Error::InvalidParameter(format!("{}; available schemes: {SCHEMES}", inner(e))))
}

pub fn parse_gen(s: &str) -> Result<GeneratorMatrix> {
    parse_generator(s).map_err(|e| Error::InvalidParameter(format!("{}; available generators: {GENERATORS}", inner(e))))
}

fn inner(e: Error) -> String {
    match e {
        Error::InvalidParameter(m) => m,
        e => e.to_string(),
    }
}

/// Target window for the fitted order of a suite at α.
fn window(suite: SuiteKind, alpha: f64, scheme: &str, envelope: bool) -> (f64, f64) {
    let inf = f64::INFINITY;
    match suite {
        SuiteKind::First if alpha == 1.0 => (-1.1, -0.4),
        SuiteKind::Nonb2 if envelope && alpha == 1.0 => match frac_gamma(scheme) {
            Some(g) => (-g * alpha / 2.0 - 0.07, -g * alpha / 2.0 + 0.07),
            None => (-inf, inf),
        },
        SuiteKind::Second => (-inf, -1.4),
        SuiteKind::Holo => (-1.15, -0.85),
        SuiteKind::Holo2 => (-inf, -1.85),
        _ => (-inf, inf),
    }
}

fn frac_gamma(scheme: &str) -> Option<f64> {
    scheme.strip_prefix("frac_tail:gamma=")?.parse().ok()
}

/// Normalized spectral sup max_j |λ_j|^{-p}|e_j| used for the order fits.
fn spectral_sup(vals: &[crate::numeric::C64], e: &[crate::numeric::C64], p: f64) -> f64 {
    vals.iter().zip(e).map(|(l, e)| e.norm() / l.norm().powf(p)).fold(0.0, f64::max)
}

struct Task {
    t: f64,
    n: u32,
}

fn run_task(
    cfg: &ExperimentConfig,
    family: &Family,
    a: &GeneratorMatrix,
    vectors: &[super::vectors::TestVector],
    fitted: Option<&FittedConstants>,
    task: &Task,
) -> Result<(Vec<BoundReport>, Vec<(f64, f64)>)> {
    let scheme = cfg.scheme.as_deref().unwrap();
    let gen = cfg.generator.as_deref().unwrap();
    let ctx = Ctx { scheme, generator: gen, t: task.t, n: task.n, policy: cfg.policy() };
    let alphas = cfg.alpha_grid();
    let reports = match cfg.suite {
        SuiteKind::First => first_order_bounds(family, a, &ctx, &alphas, vectors)?,
        SuiteKind::Nonb2 => non_b2_bounds(family, a, &ctx, &alphas, vectors)?,
        SuiteKind::Second => second_order_bounds(family, a, &ctx, vectors)?,
        SuiteKind::Holo => holomorphic_bounds(family, a, &ctx, &alphas, vectors, fitted)?,
        SuiteKind::Holo2 => holomorphic_second_order(family, a, &ctx, &alphas, vectors, fitted)?,
        _ => unreachable!(),
    };
    let g = family.at(task.t)?;
    let gn = g.power_scale(task.n)?;
    let vals = eigenvalues(a)?;
    let sups = match cfg.suite {
        SuiteKind::Second | SuiteKind::Holo2 => {
            let g2m1 = finite(g.moment(2), "m2")? - 1.0;
            let r = second_residual(&gn, vals, task.t, g2m1 / (2.0 * task.n as f64))?;
            if cfg.suite == SuiteKind::Second {
                vec![(3.0, spectral_sup(vals, &r, 3.0))]
            } else {
                alphas.iter().map(|&al| (al, spectral_sup(vals, &r, al))).collect()
            }
        }
        _ => {
            let d = scheme_error(&gn, vals, task.t)?;
            alphas.iter().map(|&al| (al, spectral_sup(vals, &d, al))).collect()
        }
    };
    Ok((reports, sups))
}

fn bound_suite(cfg: &ExperimentConfig) -> Result<SuiteOutput> {
    let scheme = cfg.scheme.clone().unwrap();
    let family = parse_family(&scheme)?;
    let a = parse_gen(cfg.generator.as_deref().unwrap())?;
    let vectors = test_vectors(&a, cfg.seed())?;
    let ts: Vec<f64> = cfg.t_grid().into_iter().filter(|&t| family.admits(t)).collect();
    if ts.is_empty() {
        return Err(Error::InvalidParameter(format!("no t in the grid admitted by {scheme}")));
    }
    let ns = cfg.n_grid();
    let alphas = cfg.alpha_grid();
    let fitted: Vec<Option<FittedConstants>> = match cfg.suite {
        SuiteKind::Holo | SuiteKind::Holo2 => ts
            .iter()
            .map(|&t| {
                let g = family.at(t)?;
                g.require(CmClass::B2)?;
                let al: &[f64] = if cfg.suite == SuiteKind::Holo { &alphas } else { &[] };
                fit_constants(&g, &ns, al).map(Some)
            })
            .collect::<Result<_>>()?,
        _ => ts.iter().map(|_| None).collect(),
    };
    let tasks: Vec<(usize, Task)> =
        ts.iter().enumerate().flat_map(|(i, &t)| ns.iter().map(move |&n| (i, Task { t, n }))).collect();
    let results: Vec<(usize, u32, Vec<BoundReport>, Vec<(f64, f64)>)> = tasks
        .par_iter()
        .map(|(i, task)| {
            run_task(cfg, &family, &a, &vectors, fitted[*i].as_ref(), task).map(|(r, s)| (*i, task.n, r, s))
        })
        .collect::<Result<_>>()?;
    let mut out = SuiteOutput::default();
    for (i, &t) in ts.iter().enumerate() {
        let mut per_alpha: Vec<(f64, Vec<(f64, f64)>)> = Vec::new();
        for (_, n, _, sups) in results.iter().filter(|r| r.0 == i) {
            for &(al, s) in sups {
                match per_alpha.iter_mut().find(|p| p.0 == al) {
                    Some(p) => p.1.push((*n as f64, s)),
                    None => per_alpha.push((al, vec![(*n as f64, s)])),
                }
            }
        }
        for (al, mut pts) in per_alpha {
            pts.sort_by(|x, y| x.0.total_cmp(&y.0));
            if pts.len() < 4 {
                continue;
            }
            let (lo, hi) = window(cfg.suite, al, &scheme, false);
            // g_t = e^{-z} has no error to fit
            let trivial = family.at(t)?.moment(2).finite().is_some_and(|m| (m - 1.0).abs() <= 1e-12);
            let row = match fit_order(&pts) {
                Ok(f) if f.exact || trivial => OrderRow {
                    scheme: scheme.clone(),
                    generator: a.label().to_string(),
                    t,
                    alpha: al,
                    quantity: "exact".into(),
                    slope: f64::NAN,
                    r2: f64::NAN,
                    lo,
                    hi,
                    pass: true,
                },
                Ok(f) => OrderRow {
                    scheme: scheme.clone(),
                    generator: a.label().to_string(),
                    t,
                    alpha: al,
                    quantity: "spectral_sup".into(),
                    slope: f.slope,
                    r2: f.r2,
                    lo,
                    hi,
                    pass: f.slope >= lo && f.slope <= hi,
                },
                Err(Error::InsufficientPoints) => continue,
                Err(e) => return Err(e),
            };
            out.fits.push(row);
        }
    }
    if cfg.suite == SuiteKind::Nonb2 && ns.len() >= 4 {
        let g = family.at(ts[0])?;
        for &al in &alphas {
            let pts: Vec<(f64, f64)> = ns
                .iter()
                .map(|&n| {
                    let gp = g.derivative(1, 1.0 / n as f64)?;
                    Ok((n as f64, (1.0 + 1.0 / gp.abs()) * (1.0 + gp).powf(al / 2.0)))
                })
                .collect::<Result<_>>()?;
            let f = fit_order(&pts)?;
            let (lo, hi) = window(cfg.suite, al, &scheme, true);
            out.fits.push(OrderRow {
                scheme: scheme.clone(),
                generator: String::new(),
                t: f64::NAN,
                alpha: al,
                quantity: "bound_envelope".into(),
                slope: f.slope,
                r2: f.r2,
                lo,
                hi,
                pass: f.slope >= lo && f.slope <= hi,
            });
        }
    }
    out.reports = results.into_iter().flat_map(|r| r.2).collect();
    for r in &mut out.reports {
        r.generator = cfg.generator.clone().unwrap();
    }
    for f in &mut out.fits {
        f.generator = cfg.generator.clone().unwrap();
    }
    sort_reports(&mut out.reports);
    Ok(out)
}

/// Run one configured experiment. Rayon's global pool sets the parallelism.
pub fn run_suite(cfg: &ExperimentConfig) -> Result<SuiteOutput> {
    cfg.validate()?;
    match cfg.suite {
        SuiteKind::Optimality => {
            let g = parse_function(cfg.scheme.as_deref().unwrap())?;
            let spectrum = cfg.spectrum.unwrap_or(SpectrumKind::Imaginary);
            let order = cfg.order.unwrap_or(1);
            let mut out = SuiteOutput::default();
            for t in cfg.t_grid() {
                for al in cfg.alpha_grid() {
                    let r = optimality_lower(&g, al, t, &cfg.n_grid(), spectrum, order)?;
                    out.fits.push(OrderRow {
                        scheme: g.name().to_string(),
                        generator: format!("{spectrum:?}:{}:{}..{}", r.grid_points, r.grid_min, r.grid_max).to_lowercase(),
                        t,
                        alpha: al,
                        quantity: format!("lower_order{order}_{}", r.status),
                        slope: r.slope,
                        r2: r.r2,
                        lo: r.target - 0.1,
                        hi: r.target + 0.1,
                        pass: r.status == "pass",
                    });
                    out.optimality.extend(r.rows);
                }
            }
            Ok(out)
        }
        SuiteKind::Sharpness => {
            let ns = cfg.n_grid();
            let mut out = SuiteOutput::default();
            out.sharpness = euler_scalar_sharpness(&ns)?;
            let shift: Vec<u32> = ns.iter().copied().filter(|&n| n >= 2).collect();
            if !shift.is_empty() {
                out.sharpness.extend(shift_second_order_sharpness(&shift)?);
            }
            Ok(out)
        }
        _ => bound_suite(cfg),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        assert!(ExperimentConfig::from_json(r#"{"suite":"first","scheme":"euler","generator":"diag_imag:k=8","n":[]}"#).is_err());
        assert!(ExperimentConfig::from_json(r#"{"suite":"holo","scheme":"euler","generator":"diag_pos:k=8","alpha":[1.5]}"#).is_err());
        assert!(ExperimentConfig::from_json(r#"{"suite":"first","scheme":"euler"}"#).is_err());
        assert!(ExperimentConfig::from_json(r#"{"suite":"sharpness","n":[4,8]}"#).is_ok());
    }

    #[test]
    fn small_first_suite_is_deterministic() {
        let cfg = ExperimentConfig::from_json(
            r#"{"suite":"first","scheme":"euler","generator":"diag_imag:k=16,min=0.1,max=100","n":[4,8,16,32,64]}"#,
        )
        .unwrap();
        let a = run_suite(&cfg).unwrap();
        let b = run_suite(&cfg).unwrap();
        assert_eq!(a.reports, b.reports);
        assert!(a.all_pass());
        assert_eq!(a.reports.len(), 3 * 5 * 8 * 4);
    }
}
