//! Hille-Phillips calculus on finite generators: e^{-tA}, A^α, g(A) and gⁿ(tA/n).

use super::expm::expm;
use super::matrix::{GeneratorMatrix, Structure};
use crate::cm::{ClosedForm, CmFunction, Density, Family};
use crate::error::{invalid, Error, Result};
use crate::numeric::{c, C64};
use crate::quad::{integrate, integrate_to_infinity, QuadOptions};
use nalgebra::DMatrix;

/// e^{-tA}.
pub fn semigroup_at(a: &GeneratorMatrix, t: f64) -> Result<DMatrix<C64>> {
    if !(t >= 0.0) {
        return Err(invalid("semigroup_at needs t >= 0"));
    }
    match a.structure() {
        Structure::General => Ok(expm(&(a.entries() * c(-t, 0.0)))),
        _ => a.spectral_matrix(|l| Ok((-l * t).exp())),
    }
}

/// Principal power λ^α with 0^α = 0 for α > 0.
pub fn principal_power(l: C64, alpha: f64) -> C64 {
    if alpha == 0.0 {
        return c(1.0, 0.0);
    }
    if l == c(0.0, 0.0) {
        return c(0.0, 0.0);
    }
    C64::from_polar(l.norm().powf(alpha), alpha * l.arg())
}

/// A^α for diagonalizable A.
pub fn frac_power(a: &GeneratorMatrix, alpha: f64) -> Result<DMatrix<C64>> {
    if !(0.0..=4.0).contains(&alpha) {
        return Err(invalid("frac_power needs alpha in [0, 4]"));
    }
    if matches!(a.structure(), Structure::General) {
        return Err(Error::Unsupported("fractional power of a general matrix".into()));
    }
    a.spectral_matrix(|l| Ok(principal_power(l, alpha)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HpPath {
    Spectral,
    Quadrature,
    Rational,
}

/// g(A) by the first applicable path: spectral, measure quadrature, rational.
pub fn hp_apply(g: &CmFunction, a: &GeneratorMatrix) -> Result<DMatrix<C64>> {
    for path in [HpPath::Spectral, HpPath::Quadrature, HpPath::Rational] {
        match hp_apply_path(g, a, path) {
            Err(Error::Unsupported(_)) | Err(Error::RequiresMeasure) => continue,
            r => return r,
        }
    }
    Err(Error::Unsupported(format!("no calculus path for {} on {}", g.name(), a.label())))
}

pub fn hp_apply_path(g: &CmFunction, a: &GeneratorMatrix, path: HpPath) -> Result<DMatrix<C64>> {
    match path {
        HpPath::Spectral => {
            if matches!(a.structure(), Structure::General) {
                return Err(Error::Unsupported("spectral path needs eigen-factors".into()));
            }
            a.spectral_matrix(|l| g.eval_complex(l))
        }
        HpPath::Quadrature => quadrature_path(g, a),
        HpPath::Rational => rational_path(g, a),
    }
}

fn quadrature_path(g: &CmFunction, a: &GeneratorMatrix) -> Result<DMatrix<C64>> {
    let m = g.measure().ok_or(Error::RequiresMeasure)?;
    let neg = a.entries() * c(-1.0, 0.0);
    let sg = |s: f64| expm(&(&neg * c(s, 0.0)));
    let d = a.dim();
    let mut acc = DMatrix::<C64>::zeros(d, d);
    for at in m.atoms() {
        acc += sg(at.location) * c(at.weight, 0.0);
    }
    let opts = QuadOptions { rel_tol: 1e-12, abs_tol: 1e-14, max_intervals: 2000 };
    for seg in m.segments() {
        let f = |s: f64| sg(s) * c(seg.density_at(s), 0.0);
        let part = if seg.end.is_infinite() {
            let w = match seg.density {
                Density::PolyExp { rate, .. } if rate > 0.0 => (1.0 / rate).min(1.0),
                _ => 1.0,
            };
            integrate_to_infinity(f, seg.start, w, &opts)?
        } else {
            integrate(f, seg.start, seg.end, &opts)?
        };
        acc += part;
    }
    Ok(acc)
}

fn solve(lhs: &DMatrix<C64>, rhs: &DMatrix<C64>) -> Result<DMatrix<C64>> {
    lhs.clone()
        .lu()
        .solve(rhs)
        .ok_or_else(|| Error::NonConvergence("singular resolvent".into()))
}

fn rational_path(g: &CmFunction, a: &GeneratorMatrix) -> Result<DMatrix<C64>> {
    let (base, n) = match g.power_parts() {
        Some((b, n)) => (b, n),
        None => (g, 1),
    };
    let d = a.dim();
    let id = DMatrix::<C64>::identity(d, d);
    let scaled = a.entries() * c(1.0 / n as f64, 0.0);
    let one_step = match base.closed_form() {
        Some(ClosedForm::Euler) => solve(&(&id + &scaled), &id)?,
        Some(ClosedForm::Chung { t, a: coef }) => {
            // Σ a_k (t(t+A)^{-1})^k
            let r = solve(&(&id * c(*t, 0.0) + &scaled), &(&id * c(*t, 0.0)))?;
            let mut p = id.clone();
            let mut acc = &id * c(coef[0], 0.0);
            for &ak in &coef[1..] {
                p = &p * &r;
                acc += &p * c(ak, 0.0);
            }
            acc
        }
        _ => return Err(Error::Unsupported(format!("{} is not rational", base.name()))),
    };
    Ok(matrix_power(&one_step, n))
}

/// Bⁿ by binary powering.
pub fn matrix_power(b: &DMatrix<C64>, mut n: u32) -> DMatrix<C64> {
    let d = b.nrows();
    let mut result = DMatrix::<C64>::identity(d, d);
    let mut base = b.clone();
    while n > 0 {
        if n & 1 == 1 {
            result = &result * &base;
        }
        n >>= 1;
        if n > 0 {
            base = &base * &base;
        }
    }
    result
}

/// g_tⁿ(tA/n).
pub fn scheme_apply(family: &Family, a: &GeneratorMatrix, t: f64, n: u32) -> Result<DMatrix<C64>> {
    if !(t > 0.0) || n == 0 {
        return Err(invalid("scheme_apply needs t > 0 and n >= 1"));
    }
    let gt = family.at(t)?;
    if !matches!(a.structure(), Structure::General) {
        let gn = gt.power_scale(n)?;
        return a.spectral_matrix(|l| gn.eval_complex(l * t));
    }
    let b = hp_apply(&gt, &a.scaled(t / n as f64))?;
    Ok(matrix_power(&b, n))
}
