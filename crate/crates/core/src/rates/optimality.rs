//! Lower-bound experiments on dense scalar spectral grids.

use super::report::fit_order;
use crate::cm::CmFunction;
use crate::error::{Error, Result};
use crate::numeric::{c, logspace};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectrumKind {
    Imaginary,
    Positive,
}

impl std::str::FromStr for SpectrumKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "imaginary" => Ok(Self::Imaginary),
            "positive" => Ok(Self::Positive),
            _ => Err(Error::InvalidParameter(format!("unknown spectrum '{s}' (imaginary, positive)"))),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct OptimalityRow {
    pub function: String,
    pub spectrum: SpectrumKind,
    pub order: u32,
    pub alpha: f64,
    pub t: f64,
    pub n: u32,
    pub sup: f64,
    pub rate: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct OptimalityReport {
    pub rows: Vec<OptimalityRow>,
    pub grid_points: usize,
    pub grid_min: f64,
    pub grid_max: f64,
    pub slope: f64,
    pub r2: f64,
    pub target: f64,
    pub c_low: f64,
    /// "pass", "fail" or "inconclusive".
    pub status: String,
}

pub const GRID_POINTS: usize = 4000;

/// sup over the grid of |λ|^{-α}|gₙ(λt) - e^{-λt}| (order 1) or of the second-order residual (order 2).
pub fn optimality_lower(
    g: &CmFunction,
    alpha: f64,
    t: f64,
    n_grid: &[u32],
    spectrum: SpectrumKind,
    order: u32,
) -> Result<OptimalityReport> {
    let m2 = g.moment(2).finite().ok_or_else(|| Error::RequiresClass("B2".into()))?;
    g.require(crate::cm::CmClass::B2)?;
    if m2 - 1.0 <= 1e-12 {
        return Err(Error::InvalidParameter("the exponential itself has no approximation error".into()));
    }
    if !(1..=2).contains(&order) || (order == 2 && spectrum == SpectrumKind::Imaginary) {
        return Err(Error::InvalidParameter("order 2 is only defined on the positive grid".into()));
    }
    if !(0.0..=2.0).contains(&alpha) || t <= 0.0 {
        return Err(Error::InvalidParameter("alpha in [0, 2] and t > 0 required".into()));
    }
    let (lo, hi) = match spectrum {
        SpectrumKind::Imaginary => (1e-3, 1e5),
        SpectrumKind::Positive => (1e-4, 1e4),
    };
    let grid: Vec<f64> = logspace(lo, hi, GRID_POINTS).into_iter().map(|s| s / t).collect();
    let mut rows = Vec::new();
    for &n in n_grid {
        let gn = g.power_scale(n)?;
        let nf = n as f64;
        let mut sup = 0.0f64;
        for &l in &grid {
            let w = match spectrum {
                SpectrumKind::Imaginary => c(0.0, l * t),
                SpectrumKind::Positive => c(l * t, 0.0),
            };
            let mut e = gn.excess_over_exp(w)?;
            if order == 2 {
                e -= w * w * (-w).exp() * ((m2 - 1.0) / (2.0 * nf));
            }
            sup = sup.max(e.norm() / l.powf(alpha));
        }
        let rate = match (spectrum, order) {
            (SpectrumKind::Imaginary, _) => (t * t / nf).powf(alpha / 2.0),
            (_, 1) => t.powf(alpha) / nf,
            _ => t.powf(alpha) / (nf * nf),
        };
        rows.push(OptimalityRow {
            function: g.name().to_string(),
            spectrum,
            order,
            alpha,
            t,
            n,
            sup,
            rate,
            ratio: sup / rate,
        });
    }
    let target = match spectrum {
        SpectrumKind::Imaginary => -alpha / 2.0,
        SpectrumKind::Positive => -(order as f64),
    };
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.n as f64, r.sup)).collect();
    let fit = fit_order(&pts)?;
    let c_low = rows.iter().map(|r| r.ratio).fold(f64::INFINITY, f64::min);
    let status = if !(fit.r2 >= 0.98) {
        "inconclusive"
    } else if (fit.slope - target).abs() <= 0.1 && c_low > 0.0 {
        "pass"
    } else {
        "fail"
    };
    Ok(OptimalityReport {
        rows,
        grid_points: grid.len(),
        grid_min: grid[0],
        grid_max: grid[grid.len() - 1],
        slope: fit.slope,
        r2: fit.r2,
        target,
        c_low,
        status: status.into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cm::builtins::{euler, exp};

    #[test]
    fn euler_rates() {
        let n: Vec<u32> = (4..=12).map(|k| 1 << k).collect();
        let r = optimality_lower(&euler(), 1.0, 1.0, &n, SpectrumKind::Imaginary, 1).unwrap();
        assert_eq!(r.status, "pass", "{} {}", r.slope, r.r2);
        let r = optimality_lower(&euler(), 0.0, 1.0, &n, SpectrumKind::Positive, 1).unwrap();
        assert_eq!(r.status, "pass", "{} {}", r.slope, r.r2);
        let r = optimality_lower(&euler(), 0.5, 1.0, &n, SpectrumKind::Positive, 2).unwrap();
        assert_eq!(r.status, "pass", "{} {}", r.slope, r.r2);
    }

    #[test]
    fn exponential_excluded() {
        assert!(optimality_lower(&exp(), 1.0, 1.0, &[4, 8, 16, 32], SpectrumKind::Imaginary, 1).is_err());
    }
}
