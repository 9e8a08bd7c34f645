//! Bounds for sectorial generators with spectrum in the open right half plane.

use super::bounds::{eigenvalues, finite, norm_frac, scheme_error, second_residual};
use super::report::{BoundReport, Ctx};
use super::vectors::{weighted_norm, TestVector};
use crate::cm::{ClosedForm, CmClass, CmFunction, Family};
use crate::error::{Error, Result};
use crate::functionals::{b_of, c_alpha, d1_of, euler_c_alpha_exact, euler_rate_constant};
use rayon::prelude::*;
use crate::opcalc::{m_beta, semigroup_constants, GeneratorMatrix, SpectrumLocation};

fn require_holomorphic(a: &GeneratorMatrix) -> Result<()> {
    match a.spectrum() {
        SpectrumLocation::ImaginaryAxis => Err(Error::RequiresHolomorphic),
        _ => Ok(()),
    }
}

fn is_euler(g: &CmFunction) -> bool {
    matches!(g.closed_form(), Some(ClosedForm::Euler))
}

/// c_α[(g_t)ₙ]; exact for Euler.
pub fn scaled_c_alpha(g: &CmFunction, n: u32, alpha: f64) -> Result<f64> {
    if is_euler(g) {
        return euler_c_alpha_exact(n, alpha);
    }
    c_alpha(&g.power_scale(n)?, alpha)
}

/// Per-α constants fitted over an n grid, used by the aggregate bounds.
#[derive(Clone, Debug, Default)]
pub struct FittedConstants {
    /// (α, C) with c_α[gₙ] ≤ (g''-1)/(2n)·(1 + C/n).
    pub c_alpha_asym: Vec<(f64, f64)>,
    /// C(g) with K(gₙ, α) ≤ C(g)(M_{3-α} + M_{4-α})/n².
    pub second: Option<f64>,
    /// (n, α, c_α[gₙ]) computed on the way.
    pub c_table: Vec<(u32, f64, Option<f64>)>,
}

impl FittedConstants {
    fn asym(&self, alpha: f64) -> Option<f64> {
        self.c_alpha_asym.iter().find(|p| p.0 == alpha).map(|p| p.1)
    }

    fn cached(&self, n: u32, alpha: f64) -> Option<Option<f64>> {
        self.c_table.iter().find(|p| p.0 == n && p.1 == alpha).map(|p| p.2)
    }
}

fn c_or_divergent(g: &CmFunction, n: u32, alpha: f64) -> Result<Option<f64>> {
    match scaled_c_alpha(g, n, alpha) {
        Ok(v) => Ok(Some(v)),
        Err(Error::Divergent(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Fit the two aggregate constants from values on an n grid.
pub fn fit_constants(g: &CmFunction, n_grid: &[u32], alphas: &[f64]) -> Result<FittedConstants> {
    let g2m1 = finite(g.moment(2), "m2")? - 1.0;
    let mut out = FittedConstants::default();
    let tasks: Vec<(u32, f64)> = alphas.iter().flat_map(|&a| n_grid.iter().map(move |&n| (n, a))).collect();
    out.c_table = tasks
        .par_iter()
        .map(|&(n, a)| c_or_divergent(g, n, a).map(|v| (n, a, v)))
        .collect::<Result<_>>()?;
    for &al in alphas {
        let fit = out
            .c_table
            .iter()
            .filter(|p| p.1 == al)
            .filter_map(|p| p.2.map(|cv| (p.0 as f64, cv)))
            .map(|(nf, cv)| nf * (cv * 2.0 * nf / g2m1 - 1.0))
            .fold(None, |m: Option<f64>, v| Some(m.map_or(v, |m| m.max(v))));
        if let Some(v) = fit {
            out.c_alpha_asym.push((al, v.max(0.0)));
        }
    }
    if g.class() >= CmClass::B4 && g.integrability().is_some() {
        let b = b_of(g)?;
        let d1: Vec<f64> = n_grid
            .par_iter()
            .map(|&n| d1_of(&g.power_scale(n)?).map(|d| d * (n as f64).powi(2)))
            .collect::<Result<_>>()?;
        let best = d1.iter().fold(b.abs(), |m, &d| m.max(d / 2.0));
        out.second = Some(best);
    }
    Ok(out)
}

/// First-order bounds on a holomorphic semigroup.
pub fn holomorphic_bounds(
    family: &Family,
    a: &GeneratorMatrix,
    ctx: &Ctx,
    alphas: &[f64],
    vectors: &[TestVector],
    fitted: Option<&FittedConstants>,
) -> Result<Vec<BoundReport>> {
    require_holomorphic(a)?;
    let (t, n) = (ctx.t, ctx.n);
    let g = family.at(t)?;
    g.require(CmClass::B2)?;
    let g2m1 = finite(g.moment(2), "m2")? - 1.0;
    let mc = semigroup_constants(a)?;
    let (m0, m1, m2) = (mc.m(0), mc.m(1), mc.m(2));
    let k = 3.0 * m0 + 3.0 * m1 + m2 / 2.0;
    let nf = n as f64;
    let vals = eigenvalues(a)?;
    let diff = scheme_error(&g.power_scale(n)?, vals, t)?;
    let mut cvals = Vec::new();
    for &al in alphas {
        if !(0.0..=1.0).contains(&al) {
            return Err(Error::InvalidParameter(format!("alpha {al} outside [0, 1]")));
        }
        let cv = match fitted.and_then(|f| f.cached(n, al)) {
            Some(v) => v,
            None => c_or_divergent(&g, n, al)?,
        };
        cvals.push((cv, m_beta(a, 2.0 - al)?));
    }
    let mut out = Vec::new();
    for v in vectors {
        let err = weighted_norm(a, &diff, &v.coef)?;
        let x = norm_frac(a, vals, 0.0, v)?;
        out.push(ctx.report(0.0, &v.id, err, k * g2m1 / nf * x, "holo_norm"));
        for (&al, &(cv, m2a)) in alphas.iter().zip(&cvals) {
            let ax = norm_frac(a, vals, al, v)? * t.powf(al);
            if al == 1.0 {
                let b = (2.0 * m0 + 1.5 * m1) * g2m1 / nf * ax;
                out.push(ctx.report(al, &v.id, err, b, "holo_a1"));
            }
            if al > 0.0 && al < 1.0 {
                out.push(ctx.report(al, &v.id, err, 3.0 * m0 * k * g2m1 / nf * ax, "holo_frac"));
            }
            if let Some(cv) = cv {
                out.push(ctx.report(al, &v.id, err, m2a * cv * ax, "holo_c_alpha"));
            }
            if let Some(cf) = fitted.and_then(|f| f.asym(al)) {
                let b = m2a * g2m1 / (2.0 * nf) * (1.0 + cf / nf) * ax;
                out.push(ctx.report(al, &v.id, err, b, "holo_c_alpha_asym"));
            }
            if is_euler(&g) {
                let b = m2a * euler_rate_constant(al, n) * ax;
                out.push(ctx.report(al, &v.id, err, b, "holo_euler_sharp"));
            }
        }
    }
    Ok(out)
}

/// Second-order bounds on a holomorphic semigroup for B4 schemes in L^k.
pub fn holomorphic_second_order(
    family: &Family,
    a: &GeneratorMatrix,
    ctx: &Ctx,
    alphas: &[f64],
    vectors: &[TestVector],
    fitted: Option<&FittedConstants>,
) -> Result<Vec<BoundReport>> {
    require_holomorphic(a)?;
    let (t, n) = (ctx.t, ctx.n);
    let g = family.at(t)?;
    g.require(CmClass::B4)?;
    if g.integrability().is_none() {
        return Err(Error::RequiresClass(format!("L^k ({} is not integrable on the positive axis)", g.name())));
    }
    let nf = n as f64;
    let gn = g.power_scale(n)?;
    let g2m1 = finite(g.moment(2), "m2")? - 1.0;
    let bn = b_of(&gn)?;
    let d1n = d1_of(&gn)?;
    let vals = eigenvalues(a)?;
    let res = second_residual(&gn, vals, t, g2m1 / (2.0 * nf))?;
    let mut consts = Vec::new();
    for &al in alphas {
        if !(0.0..=1.0).contains(&al) {
            return Err(Error::InvalidParameter(format!("alpha {al} outside [0, 1]")));
        }
        consts.push((m_beta(a, 3.0 - al)?, m_beta(a, 4.0 - al)?));
    }
    let mut out = Vec::new();
    for v in vectors {
        let err = weighted_norm(a, &res, &v.coef)?;
        for (&al, &(m3, m4)) in alphas.iter().zip(&consts) {
            let ax = norm_frac(a, vals, al, v)? * t.powf(al);
            let k = bn.abs() * m3 + 0.5 * d1n * m4;
            out.push(ctx.report(al, &v.id, err, k * ax, "holo2_k"));
            if let Some(cg) = fitted.and_then(|f| f.second) {
                out.push(ctx.report(al, &v.id, err, cg * (m3 + m4) / (nf * nf) * ax, "holo2_c"));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::logspace;
    use crate::opcalc::{diag_imag, diag_positive};
    use crate::rates::report::Policy;
    use crate::rates::vectors::{test_vectors, DEFAULT_SEED};

    fn ctx(t: f64, n: u32) -> Ctx<'static> {
        Ctx { scheme: "s", generator: "g", t, n, policy: Policy::default() }
    }

    #[test]
    fn rejects_skew() {
        let a = diag_imag(&[1.0, 2.0]).unwrap();
        let v = test_vectors(&a, 1).unwrap();
        let f = Family::parse("euler").unwrap();
        assert!(matches!(
            holomorphic_bounds(&f, &a, &ctx(1.0, 4), &[1.0], &v, None),
            Err(Error::RequiresHolomorphic)
        ));
    }

    #[test]
    fn euler_and_spline_pass() {
        let a = diag_positive(&logspace(1e-2, 1e2, 24)).unwrap();
        let v = test_vectors(&a, DEFAULT_SEED).unwrap();
        for s in ["euler", "spline"] {
            let f = Family::parse(s).unwrap();
            let g = f.at(1.0).unwrap();
            let fc = fit_constants(&g, &[4, 16, 64], &[0.0, 0.5, 1.0]).unwrap();
            for n in [4, 16, 64] {
                let r = holomorphic_bounds(&f, &a, &ctx(1.0, n), &[0.0, 0.5, 1.0], &v, Some(&fc)).unwrap();
                for x in &r {
                    assert!(x.pass, "{s} {n} {x:?}");
                }
                let r = holomorphic_second_order(&f, &a, &ctx(1.0, n), &[0.0, 1.0], &v, Some(&fc)).unwrap();
                for x in &r {
                    assert!(x.pass, "{s} {n} {x:?}");
                }
            }
        }
    }
}
