//! Report rows, the slack policy and log-log order fits.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// pass ⇔ error ≤ bound·(1 + tol_rel) + tol_abs.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Policy {
    pub tol_rel: f64,
    pub tol_abs: f64,
}

impl Default for Policy {
    fn default() -> Self {
        Self { tol_rel: 1e-9, tol_abs: 1e-13 }
    }
}

impl Policy {
    pub fn pass(&self, error: f64, bound: f64) -> bool {
        error <= bound * (1.0 + self.tol_rel) + self.tol_abs
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct BoundReport {
    pub scheme: String,
    pub generator: String,
    pub t: f64,
    pub n: u32,
    pub alpha: f64,
    pub vector_id: String,
    pub error: f64,
    pub bound: f64,
    pub slack: f64,
    pub theorem: String,
    pub pass: bool,
}

/// Shared identifying fields for a batch of reports.
#[derive(Clone, Debug)]
pub struct Ctx<'a> {
    pub scheme: &'a str,
    pub generator: &'a str,
    pub t: f64,
    pub n: u32,
    pub policy: Policy,
}

impl Ctx<'_> {
    pub fn report(&self, alpha: f64, vector_id: &str, error: f64, bound: f64, theorem: &str) -> BoundReport {
        BoundReport {
            scheme: self.scheme.to_string(),
            generator: self.generator.to_string(),
            t: self.t,
            n: self.n,
            alpha,
            vector_id: vector_id.to_string(),
            error,
            bound,
            slack: bound - error,
            theorem: theorem.to_string(),
            pass: self.policy.pass(error, bound),
        }
    }
}

/// Deterministic order: scheme, generator, t, n, α, vector, theorem.
pub fn sort_reports(r: &mut [BoundReport]) {
    r.sort_by(|a, b| {
        a.scheme
            .cmp(&b.scheme)
            .then(a.generator.cmp(&b.generator))
            .then(a.t.total_cmp(&b.t))
            .then(a.n.cmp(&b.n))
            .then(a.alpha.total_cmp(&b.alpha))
            .then(a.vector_id.cmp(&b.vector_id))
            .then(a.theorem.cmp(&b.theorem))
    });
}

#[derive(Clone, Debug, Serialize)]
pub struct OrderFit {
    pub points: Vec<(f64, f64)>,
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    pub used: usize,
    /// All errors were below the noise floor.
    pub exact: bool,
}

/// Least squares of log error against log n, dropping points below 1e2·ε·max error.
pub fn fit_order(points: &[(f64, f64)]) -> Result<OrderFit> {
    let reference = points.iter().map(|p| p.1.abs()).fold(0.0, f64::max);
    if reference == 0.0 {
        return Ok(OrderFit {
            points: points.to_vec(),
            slope: f64::NAN,
            intercept: f64::NAN,
            r2: f64::NAN,
            used: 0,
            exact: true,
        });
    }
    let floor = 1e2 * f64::EPSILON * reference;
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p.0 > 0.0 && p.1 > floor)
        .map(|p| (p.0.ln(), p.1.ln()))
        .collect();
    if pts.len() < 4 {
        return Err(Error::InsufficientPoints);
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 { 1.0 } else { (sxy * sxy) / (sxx * syy) };
    Ok(OrderFit { points: points.to_vec(), slope, intercept, r2, used: pts.len(), exact: false })
}

/// A fitted order checked against a target window.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct OrderRow {
    pub scheme: String,
    pub generator: String,
    pub t: f64,
    pub alpha: f64,
    pub quantity: String,
    pub slope: f64,
    pub r2: f64,
    pub lo: f64,
    pub hi: f64,
    pub pass: bool,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn synthetic_slopes() {
        let p: Vec<(f64, f64)> = (2..12).map(|k| (2f64.powi(k), 3.0 / 2f64.powi(k))).collect();
        assert!((fit_order(&p).unwrap().slope + 1.0).abs() < 1e-10);
        let p: Vec<(f64, f64)> = (2..12).map(|k| (2f64.powi(k), 2f64.powi(k).powf(-1.5))).collect();
        assert!((fit_order(&p).unwrap().slope + 1.5).abs() < 1e-10);
        let z: Vec<(f64, f64)> = (2..6).map(|k| (k as f64, 0.0)).collect();
        assert!(fit_order(&z).unwrap().exact);
        assert!(fit_order(&p[..3]).is_err());
    }

    #[test]
    fn policy() {
        let p = Policy::default();
        assert!(p.pass(1.0, 1.0));
        assert!(p.pass(1e-14, 0.0));
        assert!(!p.pass(1.0 + 1e-6, 1.0));
    }
}
