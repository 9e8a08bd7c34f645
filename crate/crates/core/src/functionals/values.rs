//! Scalar rate functionals: Δ_α, L, a, b, c_α, d₀, d₁ and s_g.

use super::density::{g0_density, g_density};
use super::euler::euler_c_alpha_exact;
use crate::cm::{ClosedForm, CmClass, CmFunction};
use crate::error::{Error, Result};
use crate::numeric::{c, C64};
use crate::quad::{integrate, integrate_to_infinity, QuadOptions};
use crate::special::ln_gamma;
use serde::Serialize;

fn opts() -> QuadOptions {
    QuadOptions { rel_tol: 1e-13, abs_tol: 1e-17, max_intervals: 6000 }
}

/// Δ_α(z) = (g(z) - e^{-z})/z^α.
pub fn delta(g: &CmFunction, alpha: f64, z: f64) -> Result<f64> {
    if !(0.0..=2.0).contains(&alpha) {
        return Err(Error::InvalidParameter(format!("alpha {alpha} outside [0, 2]")));
    }
    if z < 0.0 {
        return Err(Error::InvalidParameter("delta needs z >= 0".into()));
    }
    if z == 0.0 {
        let cls = g.class();
        return match () {
            _ if alpha <= 1.0 && cls >= CmClass::B1 => Ok(0.0),
            _ if alpha < 2.0 && cls >= CmClass::B2 => Ok(0.0),
            _ if cls >= CmClass::B2 => Ok((g.moment(2).to_f64() - 1.0) / 2.0),
            _ => Err(Error::LimitUndefined),
        };
    }
    Ok(g.excess_over_exp(c(z, 0.0))?.re / z.powf(alpha))
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct LValue {
    pub l: f64,
    /// ‖Δ₁‖ in the transform norm: ∫|1-τ|ν(dτ).
    pub delta1_norm: f64,
    /// false when obtained by numerical Laplace inversion.
    pub exact: bool,
}

/// L[g] = ∫₀¹(1-s)ν(ds).
pub fn functional_l(g: &CmFunction) -> Result<LValue> {
    if let Some(m) = g.measure() {
        let l = m.lower(0, 1.0)? - m.lower(1, 1.0)?;
        let above = m.upper(1, 1.0)?.to_f64() - m.upper(0, 1.0)?.to_f64();
        return Ok(LValue { l, delta1_norm: l + above, exact: true });
    }
    if let Some(l) = lattice_power_l(g) {
        let l = l?;
        return Ok(LValue { l, delta1_norm: 2.0 * l, exact: true });
    }
    let l = l_by_inversion(g)?;
    Ok(LValue { l, delta1_norm: 2.0 * l, exact: false })
}

/// Powers of Hille and Kendall live on lattices: Poisson(n) at k/n, Binomial(n, t) at k/(nt).
fn lattice_power_l(g: &CmFunction) -> Option<Result<f64>> {
    let (base, n) = g.power_parts()?;
    let nf = n as f64;
    let (spacing, ln_pmf): (f64, Box<dyn Fn(f64) -> f64>) = match base.closed_form()? {
        ClosedForm::Hille => (1.0 / nf, Box::new(move |k: f64| k * nf.ln() - nf - ln_gamma(k + 1.0))),
        ClosedForm::Kendall { t } => {
            let t = *t;
            if t >= 1.0 {
                return None;
            }
            let lc = ln_gamma(nf + 1.0);
            (
                1.0 / (nf * t),
                Box::new(move |k: f64| lc - ln_gamma(k + 1.0) - ln_gamma(nf - k + 1.0) + k * t.ln() + (nf - k) * (-t).ln_1p()),
            )
        }
        _ => return None,
    };
    let kmax = (1.0 / spacing).floor().min(if matches!(base.closed_form()?, ClosedForm::Kendall { .. }) { nf } else { f64::MAX });
    let mut l = 0.0;
    let mut k = 0.0;
    while k <= kmax {
        l += (1.0 - k * spacing) * ln_pmf(k).exp();
        k += 1.0;
    }
    Some(Ok(l))
}

/// L[g] = ∫₀¹ ν([0,s]) ds, the inverse Laplace transform of g(z)/z² at 1, on the line Re z = 1.
fn l_by_inversion(g: &CmFunction) -> Result<f64> {
    let w0 = g.limit_at_infinity();
    let mut err = None;
    let f = |y: f64| {
        let z = c(1.0, y);
        match g.eval_complex(z) {
            Ok(v) => ((C64::new(0.0, y)).exp() * (v - w0) / (z * z)).re,
            Err(e) => {
                err.get_or_insert(e);
                0.0
            }
        }
    };
    let o = QuadOptions { rel_tol: 1e-10, abs_tol: 1e-12, max_intervals: 20000 };
    let v = integrate_to_infinity(f, 0.0, 2.0 * std::f64::consts::PI, &o)?;
    if let Some(e) = err {
        return Err(e);
    }
    Ok(w0 + std::f64::consts::E / std::f64::consts::PI * v)
}

/// Right-hand side of the explicit bound on L[g] for g ∈ B1; +∞ when g(1) = 1.
pub fn l_upper_bound(g: &CmFunction) -> Result<f64> {
    g.require(CmClass::B1)?;
    let beta = integrate(|s| g.eval(s).unwrap_or(f64::NAN), 0.0, 1.0, &opts())?;
    let gamma = 1.0 - g.eval(1.0)?;
    if gamma <= 0.0 {
        return Ok(f64::INFINITY);
    }
    let gp1 = g.derivative(1, 1.0)?;
    let inner = ((1.0 + gp1) * beta / (gamma * gamma) - 1.0).max(0.0);
    let tail = integrate(|s| g.g_plus_gprime(s).unwrap_or(f64::NAN), 0.0, 1.0, &opts())?;
    Ok(inner.sqrt() + 2.0 * std::f64::consts::E * tail)
}

/// 2e(1 + 1/|g'(1/n)|)√(1 + g'(1/n)), bounding L[gₙ].
pub fn l_scaled_bound(g: &CmFunction, n: u32) -> Result<f64> {
    g.require(CmClass::B1)?;
    let gp = g.derivative(1, 1.0 / n as f64)?;
    if gp == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(2.0 * std::f64::consts::E * (1.0 + 1.0 / gp.abs()) * (1.0 + gp).max(0.0).sqrt())
}

fn moments(g: &CmFunction, cls: CmClass) -> Result<[f64; 5]> {
    g.require(cls)?;
    Ok(g.moments().map(|m| m.to_f64()))
}

/// a[g] = (g''(0) - 1)/2.
pub fn a_of(g: &CmFunction) -> Result<f64> {
    let m = moments(g, CmClass::B2)?;
    Ok((m[2] - 1.0) / 2.0)
}

/// b[g] = (3g''(0) + g'''(0) - 2)/6.
pub fn b_of(g: &CmFunction) -> Result<f64> {
    let m = moments(g, CmClass::B3)?;
    Ok((3.0 * m[2] - m[3] - 2.0) / 6.0)
}

/// d₀[g] = (-3 + 6g''(0) + 4g'''(0) + g''''(0))/12.
pub fn d0_of(g: &CmFunction) -> Result<f64> {
    let m = moments(g, CmClass::B4)?;
    Ok((-3.0 + 6.0 * m[2] - 4.0 * m[3] + m[4]) / 12.0)
}

/// ∫G, ∫(1-s)G and ∫(1-s)²G from the kernel.
pub fn abd_g_path(g: &CmFunction) -> Result<(f64, f64, f64)> {
    let d = g_density(g)?;
    Ok((
        d.integrate(|_| 1.0)?,
        d.integrate(|s| 1.0 - s)?,
        d.integrate(|s| (1.0 - s) * (1.0 - s))?,
    ))
}

/// ∫G₀, equal to g''(0) - 1 for B2.
pub fn g0_integral(g: &CmFunction) -> Result<f64> {
    g0_density(g)?.integrate(|_| 1.0)
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(0.0..2.0).contains(&alpha) {
        return Err(Error::InvalidParameter(format!("alpha {alpha} outside [0, 2)")));
    }
    Ok(())
}

/// c_α[g] = Γ(2-α)^{-1} ∫₀^∞ Δ_{1+α}(z) dz by quadrature in z.
pub fn c_alpha(g: &CmFunction, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if g.moment(2).finite().is_some_and(|m| (m - 1.0).abs() <= 1e-14) {
        // ν = δ₁, so g is the exponential itself
        return Ok(0.0);
    }
    let linf = g.limit_at_infinity();
    if alpha == 0.0 && linf > 0.0 {
        return Err(Error::Divergent("c_0 with nonzero limit at infinity".into()));
    }
    let mut err = None;
    let mut f = |z: f64, far: bool| {
        let v = g.excess_over_exp(c(z, 0.0)).and_then(|e| {
            if !far {
                Ok(e.re)
            } else if linf <= 1e-3 * e.re.abs() {
                Ok(e.re - linf)
            } else {
                // both g - L∞ and e^{-z} are small here; subtracting L∞ would cancel
                g.decaying_part(c(z, 0.0)).map(|v| v.re - (-z).exp())
            }
        });
        match v {
            Ok(v) => v / z.powf(1.0 + alpha),
            Err(e) => {
                err.get_or_insert(e);
                0.0
            }
        }
    };
    let near = integrate(|z| f(z, false), 0.0, 1.0, &opts())?;
    let far = integrate_to_infinity(|z| f(z, true), 1.0, 1.0, &opts())?;
    if let Some(e) = err {
        return Err(e);
    }
    let tail = if linf > 0.0 { linf / alpha } else { 0.0 };
    Ok((near + far + tail) / ln_gamma(2.0 - alpha).exp())
}

/// c_α[g] = ∫ G(s) s^{α-2} ds.
pub fn c_alpha_g_path(g: &CmFunction, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let d = g_density(g)?;
    let w0 = d.measure().atom_at_zero();
    if alpha == 0.0 && w0 > 0.0 {
        return Err(Error::Divergent("c_0 with an atom at zero".into()));
    }
    let v = d.integrate_with(true, |s| s.powf(alpha - 2.0))?;
    Ok(v + if w0 > 0.0 { w0 / alpha } else { 0.0 })
}

/// d₁[g] = c₀[g] - c₁[g] - b[g].
pub fn d1_of(g: &CmFunction) -> Result<f64> {
    g.require(CmClass::B4)?;
    Ok(c_alpha(g, 0.0)? - c_alpha(g, 1.0)? - b_of(g)?)
}

/// d₁[g] = ∫ (1-s)²(1+s)/s² G(s) ds.
pub fn d1_g_path(g: &CmFunction) -> Result<f64> {
    let d = g_density(g)?;
    if d.measure().atom_at_zero() > 0.0 {
        return Err(Error::Divergent("d_1 with an atom at zero".into()));
    }
    d.integrate(|s| (1.0 - s) * (1.0 - s) * (1.0 + s) / (s * s))
}

/// ∫₀^∞ (g(z) + g'(z))/z dz.
pub fn s_g_integral(g: &CmFunction) -> Result<f64> {
    if g.limit_at_infinity() > 0.0 {
        return Err(Error::Divergent("s_g not integrable".into()));
    }
    let mut err = None;
    let mut f = |z: f64| match g.g_plus_gprime(z) {
        Ok(v) => v / z,
        Err(e) => {
            err.get_or_insert(e);
            0.0
        }
    };
    let v = integrate(&mut f, 0.0, 1.0, &opts())? + integrate_to_infinity(&mut f, 1.0, 1.0, &opts())?;
    match err {
        Some(e) => Err(e),
        None => Ok(v),
    }
}

/// A row of scalar functionals for one function.
#[derive(Clone, Debug, Serialize)]
pub struct FunctionalValues {
    pub l: Option<f64>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub c_quadrature: Vec<(f64, Option<f64>)>,
    pub c_exact: Vec<(f64, Option<f64>)>,
    pub d0: Option<f64>,
    pub d1: Option<f64>,
    pub flags: Vec<String>,
}

impl FunctionalValues {
    /// Functionals of gₙ; `euler_n` enables the exact Euler column.
    pub fn compute(g: &CmFunction, alphas: &[f64], euler_n: Option<u32>) -> Self {
        let mut flags = Vec::new();
        let mut note = |name: &str, r: Result<f64>| -> Option<f64> {
            match r {
                Ok(v) => Some(v),
                Err(e) => {
                    flags.push(format!("{name}:{}", short(&e)));
                    None
                }
            }
        };
        let lv = functional_l(g);
        let inverted = matches!(&lv, Ok(v) if !v.exact) || (lv.is_err() && g.measure().is_none());
        let l = note("L", lv.map(|v| v.l));
        let a = note("a", a_of(g));
        let b = note("b", b_of(g));
        let d0 = note("d0", d0_of(g));
        let d1 = note("d1", d1_of(g));
        let c_quadrature = alphas.iter().map(|&al| (al, note("c", c_alpha(g, al)))).collect();
        let c_exact = match euler_n {
            Some(n) => alphas.iter().map(|&al| (al, euler_c_alpha_exact(n, al).ok())).collect(),
            None => vec![],
        };
        if inverted {
            flags.push("L:inversion".into());
        }
        flags.sort();
        flags.dedup();
        Self { l, a, b, c_quadrature, c_exact, d0, d1, flags }
    }
}

fn short(e: &Error) -> &'static str {
    match e {
        Error::RequiresClass(_) => "class",
        Error::Divergent(_) => "divergent",
        Error::NonConvergence(_) => "nonconvergence",
        Error::RequiresMeasure => "requires-measure",
        _ => "error",
    }
}
