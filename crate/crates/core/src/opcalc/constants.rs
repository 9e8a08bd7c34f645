//! Semigroup constants M_β = sup_t ‖(tA)^β e^{-tA}‖.

use super::calculus::principal_power;
use super::expm::{expm, norm2};
use super::matrix::{GeneratorMatrix, Structure};
use crate::error::{Error, Result};
use crate::numeric::{c, logspace, C64};
use nalgebra::DMatrix;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ConstantsMethod {
    ClosedForm,
    SampledSup,
}

#[derive(Clone, Debug, Serialize)]
pub struct SemigroupConstants {
    /// M₀ … M₄.
    pub values: [f64; 5],
    pub method: ConstantsMethod,
}

impl SemigroupConstants {
    pub fn m(&self, k: usize) -> f64 {
        self.values[k]
    }
}

fn closed_form_scalar(l: C64, beta: f64) -> f64 {
    if beta == 0.0 {
        return 1.0;
    }
    let r = l.norm();
    if r == 0.0 {
        return 0.0;
    }
    if l.re <= 1e-14 * r {
        return f64::INFINITY;
    }
    // sup_t (t|λ|)^β e^{-t Re λ} attained at t = β/Re λ
    (beta * r / (std::f64::consts::E * l.re)).powf(beta)
}

const SAMPLES: usize = 512;

fn sampled(a: &GeneratorMatrix, beta: f64) -> Result<f64> {
    let ts = logspace(1e-6, 1e6, SAMPLES);
    let mut best = 0.0f64;
    for t in ts {
        let m: DMatrix<C64> = match a.structure() {
            Structure::General => {
                if beta.fract() != 0.0 {
                    return Err(Error::Unsupported("fractional power of a general matrix".into()));
                }
                let ta = a.entries() * c(t, 0.0);
                let mut p = DMatrix::<C64>::identity(a.dim(), a.dim());
                for _ in 0..beta as u32 {
                    p = &p * &ta;
                }
                p * expm(&(ta * c(-1.0, 0.0)))
            }
            _ => a.spectral_matrix(|l| Ok(principal_power(l * t, beta) * (-l * t).exp()))?,
        };
        best = best.max(norm2(&m));
    }
    Ok(best)
}

/// M_β for one real β ≥ 0.
pub fn m_beta(a: &GeneratorMatrix, beta: f64) -> Result<f64> {
    if beta < 0.0 {
        return Err(Error::InvalidParameter("beta must be nonnegative".into()));
    }
    if a.is_normal() {
        let vals = a.eigenvalues().unwrap();
        return Ok(vals.iter().map(|&l| closed_form_scalar(l, beta)).fold(0.0, f64::max));
    }
    sampled(a, beta)
}

pub fn semigroup_constants(a: &GeneratorMatrix) -> Result<SemigroupConstants> {
    let mut values = [0.0; 5];
    for (k, v) in values.iter_mut().enumerate() {
        *v = m_beta(a, k as f64)?;
    }
    let method = if a.is_normal() { ConstantsMethod::ClosedForm } else { ConstantsMethod::SampledSup };
    Ok(SemigroupConstants { values, method })
}
