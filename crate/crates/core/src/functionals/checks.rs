//! Numerical checks of asymptotic statements about the functionals.

use super::values::c_alpha;
use crate::cm::{CmClass, CmFunction};
use crate::error::{Error, Result};
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct AsymptoticRow {
    pub n: u32,
    pub alpha: f64,
    pub c_alpha: Option<f64>,
    pub leading: f64,
    /// n²|c_α[gₙ] - (g''(0)-1)/(2n)|
    pub scaled_residual: Option<f64>,
    pub flag: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct AsymptoticReport {
    pub function: String,
    pub rows: Vec<AsymptoticRow>,
    /// Largest scaled residual per α; None if any point failed.
    pub constants: Vec<(f64, Option<f64>)>,
}

/// n²|c_α[gₙ] - (g''(0)-1)/(2n)| over the grid.
pub fn asymptotic_c_check(g: &CmFunction, n_grid: &[u32], alphas: &[f64]) -> Result<AsymptoticReport> {
    g.require(CmClass::B2)?;
    let a2 = g.moment(2).to_f64() - 1.0;
    let mut rows = Vec::new();
    for &n in n_grid {
        let gn = g.power_scale(n)?;
        let nf = n as f64;
        for &alpha in alphas {
            let leading = a2 / (2.0 * nf);
            let (c, flag) = match c_alpha(&gn, alpha) {
                Ok(v) => (Some(v), "ok".to_string()),
                Err(Error::Divergent(_)) => (None, "divergent".to_string()),
                Err(Error::NonConvergence(_)) => (None, "nonconvergence".to_string()),
                Err(e) => return Err(e),
            };
            rows.push(AsymptoticRow {
                n,
                alpha,
                c_alpha: c,
                leading,
                scaled_residual: c.map(|c| nf * nf * (c - leading).abs()),
                flag,
            });
        }
    }
    let constants = alphas
        .iter()
        .map(|&al| {
            let mut best: Option<f64> = Some(0.0);
            for r in rows.iter().filter(|r| r.alpha == al) {
                best = match (best, r.scaled_residual) {
                    (Some(b), Some(v)) => Some(b.max(v)),
                    _ => None,
                };
            }
            (al, best)
        })
        .collect();
    Ok(AsymptoticReport { function: g.name().to_string(), rows, constants })
}

#[derive(Clone, Debug, Serialize)]
pub struct PolyRateReport {
    pub gamma: f64,
    /// sup g''(τ)τ^{1-γ} over the τ grid in (0, 1].
    pub c1: f64,
    /// sup ∫₀^s τ²ν(dτ)/s^{1-γ} over the s grid in [1, ∞).
    pub c2: f64,
    /// sup (1+g'(1/n))n^γ over the n grid.
    pub c3: f64,
    /// Pointwise ∫₀^s τ²ν(dτ) ≤ e·g''(1/s) on the s grid.
    pub second_moment_vs_curvature: bool,
    pub consistent: bool,
}

/// Fits the constants of the three equivalent polynomial-rate conditions.
pub fn check_polynomial_rate(
    g: &CmFunction,
    gamma: f64,
    tau_grid: &[f64],
    s_grid: &[f64],
    n_grid: &[u32],
) -> Result<PolyRateReport> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::InvalidParameter("gamma must lie in (0, 1)".into()));
    }
    let m = g.measure().ok_or(Error::RequiresMeasure)?;
    g.require(CmClass::B1)?;
    let mut c1 = 0.0f64;
    for &t in tau_grid.iter().filter(|&&t| t > 0.0 && t <= 1.0) {
        c1 = c1.max(g.derivative(2, t)? * t.powf(1.0 - gamma));
    }
    let mut c2 = 0.0f64;
    let mut pointwise = true;
    for &s in s_grid.iter().filter(|&&s| s >= 1.0) {
        let f2 = m.lower(2, s)?;
        c2 = c2.max(f2 / s.powf(1.0 - gamma));
        if f2 > std::f64::consts::E * g.derivative(2, 1.0 / s)? * (1.0 + 1e-10) {
            pointwise = false;
        }
    }
    let mut c3 = 0.0f64;
    for &n in n_grid {
        let nf = n as f64;
        c3 = c3.max((1.0 + g.derivative(1, 1.0 / nf)?) * nf.powf(gamma));
    }
    let consistent = pointwise && c1.is_finite() && c2.is_finite() && c3.is_finite();
    Ok(PolyRateReport { gamma, c1, c2, c3, second_moment_vs_curvature: pointwise, consistent })
}
