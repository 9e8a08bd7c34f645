//! The kernels G and G₀ built from a representing measure.

use crate::cm::{CmClass, CmFunction, PositiveMeasure};
use crate::error::{Error, Result};
use crate::quad::{integrate_piecewise, QuadOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    /// ∫₀^s (s-τ)ν(dτ) on [0,1], ∫_s^∞ (τ-s)ν(dτ) beyond.
    G,
    /// ∫₀^s (1-τ)ν(dτ) on [0,1], ∫_s^∞ (τ-1)ν(dτ) beyond.
    G0,
}

/// Piecewise kernel evaluated from partial moments of ν.
#[derive(Clone, Debug)]
pub struct GDensity {
    measure: PositiveMeasure,
    kind: Kind,
}

fn measure_of(g: &CmFunction) -> Result<PositiveMeasure> {
    let m = g.measure().ok_or(Error::RequiresMeasure)?;
    g.require(CmClass::B1)?;
    Ok(m.clone())
}

/// G with Δ₂ = 𝓛G.
pub fn g_density(g: &CmFunction) -> Result<GDensity> {
    Ok(GDensity { measure: measure_of(g)?, kind: Kind::G })
}

/// G₀ with s_g = 𝓛G₀.
pub fn g0_density(g: &CmFunction) -> Result<GDensity> {
    Ok(GDensity { measure: measure_of(g)?, kind: Kind::G0 })
}

impl GDensity {
    pub fn measure(&self) -> &PositiveMeasure {
        &self.measure
    }

    pub fn eval(&self, s: f64) -> Result<f64> {
        let m = &self.measure;
        if s <= 1.0 {
            let (f0, f1) = (m.lower(0, s)?, m.lower(1, s)?);
            Ok(match self.kind {
                Kind::G => s * f0 - f1,
                Kind::G0 => f0 - f1,
            })
        } else {
            let t0 = m.upper(0, s)?.to_f64();
            let t1 = m.upper(1, s)?.to_f64();
            Ok(match self.kind {
                Kind::G => t1 - s * t0,
                Kind::G0 => t1 - t0,
            })
        }
    }

    /// G(s) with the contribution w₀s of an atom at zero removed (only differs on [0,1]).
    pub fn eval_regular(&self, s: f64) -> Result<f64> {
        let w0 = self.measure.atom_at_zero();
        let v = self.eval(s)?;
        Ok(match self.kind {
            Kind::G if s <= 1.0 => v - w0 * s,
            Kind::G0 if s <= 1.0 => v - w0,
            _ => v,
        })
    }

    /// Integration breakpoints: 0, 1, the measure's breakpoints, ∞.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut v = vec![0.0, 1.0];
        v.extend(self.measure.breakpoints());
        v.sort_by(f64::total_cmp);
        v.dedup();
        v.push(f64::INFINITY);
        v
    }

    /// ∫₀^∞ G(s) w(s) ds.
    pub fn integrate<W: Fn(f64) -> f64>(&self, w: W) -> Result<f64> {
        self.integrate_with(false, w)
    }

    /// As `integrate`, with the atom-at-zero term removed when `regular` is set.
    pub fn integrate_with<W: Fn(f64) -> f64>(&self, regular: bool, w: W) -> Result<f64> {
        let opts = QuadOptions { rel_tol: 1e-13, abs_tol: 1e-15, ..Default::default() };
        let mut err = None;
        let v = integrate_piecewise(
            |s| match if regular { self.eval_regular(s) } else { self.eval(s) } {
                Ok(v) => v * w(s),
                Err(e) => {
                    err.get_or_insert(e);
                    0.0
                }
            },
            &self.breakpoints(),
            &opts,
        )?;
        match err {
            Some(e) => Err(e),
            None => Ok(v),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cm::builtins::{euler, exp, kendall, spline};

    #[test]
    fn euler_closed_form() {
        let g = g_density(&euler()).unwrap();
        for &s in &[0.1, 0.5, 1.0] {
            assert!((g.eval(s).unwrap() - (s - 1.0 + (-s as f64).exp())).abs() < 1e-15);
        }
        for &s in &[1.5, 4.0] {
            assert!((g.eval(s).unwrap() - (-s as f64).exp()).abs() < 1e-15);
        }
    }

    #[test]
    fn kendall_half() {
        let g = g_density(&kendall(0.5).unwrap()).unwrap();
        assert!((g.eval(0.4).unwrap() - 0.2).abs() < 1e-15);
        assert!((g.eval(1.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((g.eval(1.5).unwrap() - 0.25).abs() < 1e-15);
        assert_eq!(g.eval(3.0).unwrap(), 0.0);
    }

    #[test]
    fn exp_kernel_vanishes() {
        let g = g_density(&exp()).unwrap();
        for &s in &[0.3, 1.0, 2.0] {
            assert_eq!(g.eval(s).unwrap(), 0.0);
        }
    }

    #[test]
    fn integrals() {
        let g = g0_density(&spline()).unwrap();
        assert!((g.integrate(|_| 1.0).unwrap() - 1.0 / 3.0).abs() < 1e-12);
        let g = g_density(&euler()).unwrap();
        assert!((g.integrate(|_| 1.0).unwrap() - 0.5).abs() < 1e-12);
    }
}
