//! Bounds for skew-type generators: first order, non-B2 and second order.

use super::report::{BoundReport, Ctx};
use super::vectors::{weighted_norm, TestVector};
use crate::cm::{CmClass, CmFunction, Family};
use crate::error::{Error, Result};
use crate::numeric::{c, C64};
use crate::opcalc::{m_beta, principal_power, GeneratorMatrix};
use std::f64::consts::E;

pub(crate) fn eigenvalues(a: &GeneratorMatrix) -> Result<&[C64]> {
    a.eigenvalues()
        .ok_or_else(|| Error::Unsupported("rate experiments need a diagonalizable generator".into()))
}

pub(crate) fn powers(vals: &[C64], alpha: f64) -> Vec<C64> {
    vals.iter().map(|&l| principal_power(l, alpha)).collect()
}

/// gₙ(tλ) - e^{-tλ} on the spectrum.
pub(crate) fn scheme_error(gn: &CmFunction, vals: &[C64], t: f64) -> Result<Vec<C64>> {
    vals.iter().map(|&l| gn.excess_over_exp(l * t)).collect()
}

/// gₙ(tλ) - e^{-tλ} - a[gₙ](tλ)²e^{-tλ}.
pub(crate) fn second_residual(gn: &CmFunction, vals: &[C64], t: f64, an: f64) -> Result<Vec<C64>> {
    let d = scheme_error(gn, vals, t)?;
    Ok(vals
        .iter()
        .zip(d)
        .map(|(&l, e)| {
            let w = l * t;
            e - w * w * (-w).exp() * an
        })
        .collect())
}

pub(crate) fn finite(v: crate::numeric::ExtReal, what: &str) -> Result<f64> {
    v.finite().ok_or_else(|| Error::RequiresClass(format!("{what} is infinite")))
}

fn norm_x(a: &GeneratorMatrix, v: &TestVector) -> Result<f64> {
    let ones = vec![c(1.0, 0.0); v.coef.len()];
    weighted_norm(a, &ones, &v.coef)
}

pub(crate) fn norm_frac(a: &GeneratorMatrix, vals: &[C64], alpha: f64, v: &TestVector) -> Result<f64> {
    if alpha == 0.0 {
        return norm_x(a, v);
    }
    weighted_norm(a, &powers(vals, alpha), &v.coef)
}

fn scheme_at(family: &Family, t: f64, cls: CmClass) -> Result<CmFunction> {
    if !family.admits(t) {
        return Err(Error::InvalidParameter(format!("{} not defined at t = {t}", family.name())));
    }
    let g = family.at(t)?;
    g.require(cls)?;
    Ok(g)
}

/// First-order bounds for B2 schemes on an arbitrary bounded semigroup.
pub fn first_order_bounds(
    family: &Family,
    a: &GeneratorMatrix,
    ctx: &Ctx,
    alphas: &[f64],
    vectors: &[TestVector],
) -> Result<Vec<BoundReport>> {
    let (t, n) = (ctx.t, ctx.n);
    let g = scheme_at(family, t, CmClass::B2)?;
    let g2m1 = finite(g.moment(2), "m2")? - 1.0;
    let m = m_beta(a, 0.0)?;
    let vals = eigenvalues(a)?;
    let diff = scheme_error(&g.power_scale(n)?, vals, t)?;
    let nf = n as f64;
    let mut out = Vec::new();
    for v in vectors {
        let err = weighted_norm(a, &diff, &v.coef)?;
        for &al in alphas {
            if !(al > 0.0 && al <= 2.0) {
                return Err(Error::InvalidParameter(format!("alpha {al} outside (0, 2]")));
            }
            let ax = norm_frac(a, vals, al, v)?;
            if al == 2.0 {
                out.push(ctx.report(al, &v.id, err, m * g2m1 / 2.0 * t * t / nf * ax, "first_a2"));
            } else {
                if al == 1.0 {
                    let b = m * g2m1.sqrt() * t / nf.sqrt() * ax;
                    out.push(ctx.report(al, &v.id, err, b, "first_a1"));
                }
                let b = 4.0 * m * (g2m1 * t * t / nf).powf(al / 2.0) * ax;
                out.push(ctx.report(al, &v.id, err, b, "first_frac"));
            }
        }
    }
    Ok(out)
}

/// Bounds for B1 schemes with infinite second moment.
pub fn non_b2_bounds(
    family: &Family,
    a: &GeneratorMatrix,
    ctx: &Ctx,
    alphas: &[f64],
    vectors: &[TestVector],
) -> Result<Vec<BoundReport>> {
    let (t, n) = (ctx.t, ctx.n);
    let g = scheme_at(family, t, CmClass::B1)?;
    if g.class() >= CmClass::B2 {
        return Err(Error::InvalidParameter(format!("{} has a finite second moment", g.name())));
    }
    let gp = g.derivative(1, 1.0 / n as f64)?;
    let pre = E * m_beta(a, 0.0)? * (1.0 + 1.0 / gp.abs());
    let vals = eigenvalues(a)?;
    let diff = scheme_error(&g.power_scale(n)?, vals, t)?;
    let mut out = Vec::new();
    for v in vectors {
        let err = weighted_norm(a, &diff, &v.coef)?;
        for &al in alphas {
            if !(al > 0.0 && al <= 1.0) {
                return Err(Error::InvalidParameter(format!("alpha {al} outside (0, 1]")));
            }
            let ax = norm_frac(a, vals, al, v)?;
            if al == 1.0 {
                let b = 4.0 * pre * (1.0 + gp).sqrt() * t * ax;
                out.push(ctx.report(al, &v.id, err, b, "nonb2_a1"));
            } else {
                let b = 16.0 * pre * (1.0 + gp).powf(al / 2.0) * t.powf(al) * ax;
                out.push(ctx.report(al, &v.id, err, b, "nonb2_frac"));
            }
        }
    }
    Ok(out)
}

/// The (1 + 1/|g'(1/n)|)√(1 + g'(1/n)) envelope of the α = 1 non-B2 bound.
pub fn non_b2_envelope(g: &CmFunction, n: u32) -> Result<f64> {
    let gp = g.derivative(1, 1.0 / n as f64)?;
    Ok((1.0 + 1.0 / gp.abs()) * (1.0 + gp).sqrt())
}

/// Second-order residual bounds for B4 schemes.
pub fn second_order_bounds(
    family: &Family,
    a: &GeneratorMatrix,
    ctx: &Ctx,
    vectors: &[TestVector],
) -> Result<Vec<BoundReport>> {
    let (t, n) = (ctx.t, ctx.n);
    let g = scheme_at(family, t, CmClass::B4)?;
    let g2m1 = finite(g.moment(2), "m2")? - 1.0;
    let g4m1 = finite(g.moment(4), "m4")? - 1.0;
    let cc = (g2m1 * g4m1 / 2.0).sqrt();
    let m = m_beta(a, 0.0)?;
    let vals = eigenvalues(a)?;
    let nf = n as f64;
    let res = second_residual(&g.power_scale(n)?, vals, t, g2m1 / (2.0 * nf))?;
    let mut out = Vec::new();
    for v in vectors {
        let err = weighted_norm(a, &res, &v.coef)?;
        let a3 = norm_frac(a, vals, 3.0, v)?;
        let a4 = norm_frac(a, vals, 4.0, v)?;
        let b = m * cc * t.powi(3) * nf.powf(-1.5) * a3;
        out.push(ctx.report(3.0, &v.id, err, b, "second_n32"));
        let b = m * g4m1 * t.powi(3) / (nf * nf) * (a3 + t * a4);
        out.push(ctx.report(3.0, &v.id, err, b, "second_n2"));
    }
    Ok(out)
}
