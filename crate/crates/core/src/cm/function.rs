//! Bounded completely monotone functions and their power scalings gₙ(z) = gⁿ(z/n).

use super::measure::PositiveMeasure;
use crate::error::{Error, Result};
use crate::numeric::{c, cexpm1, cln1p, ExtReal, C64};
use std::sync::Arc;

/// Closed-form evaluators for the builtin functions.
#[derive(Clone, Debug, PartialEq)]
pub enum ClosedForm {
    Exp,
    Euler,
    Spline,
    Kendall { t: f64 },
    Yosida { t: f64 },
    Hille,
    Chung { t: f64, a: Vec<f64> },
}

#[derive(Clone, Debug)]
enum Repr {
    Measure { measure: Arc<PositiveMeasure>, closed: Option<ClosedForm> },
    Power { base: Arc<CmFunction>, n: u32 },
}

/// Membership in the nested classes B1 ⊃ B2 ⊃ B3 ⊃ B4.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, serde::Serialize)]
pub enum CmClass {
    Bounded,
    B1,
    B2,
    B3,
    B4,
}

#[derive(Clone, Debug)]
pub struct CmFunction {
    name: String,
    repr: Repr,
    moments: [ExtReal; 5],
    integrability: Option<u32>,
    limit_at_infinity: f64,
}

fn sinhc_m1(w: C64) -> C64 {
    // sinh(w)/w - 1
    if w.norm() < 0.5 {
        let w2 = w * w;
        let mut term = w2 / 6.0;
        let mut acc = term;
        for k in 2..12 {
            term *= w2 / ((2 * k) as f64 * (2 * k + 1) as f64);
            acc += term;
        }
        acc
    } else {
        w.sinh() / w - 1.0
    }
}

impl ClosedForm {
    fn m1(&self, w: C64) -> C64 {
        match self {
            ClosedForm::Exp => cexpm1(-w),
            ClosedForm::Euler => -w / (1.0 + w),
            ClosedForm::Spline if w.norm() < 0.5 => {
                // e^{-w} sinh(w)/w - 1
                let s = sinhc_m1(w);
                let e = cexpm1(-w);
                e + s + e * s
            }
            ClosedForm::Spline => -cexpm1(-2.0 * w) / (2.0 * w) - 1.0,
            ClosedForm::Kendall { t } => *t * cexpm1(-w / *t),
            ClosedForm::Yosida { t } => cexpm1(-*t * w / (*t + w)),
            ClosedForm::Hille => cexpm1(cexpm1(-w)),
            ClosedForm::Chung { t, a } => {
                let l = cln1p(w / *t);
                a.iter()
                    .enumerate()
                    .skip(1)
                    .map(|(k, &ak)| ak * cexpm1(-(k as f64) * l))
                    .sum()
            }
        }
    }

    fn ln_g(&self, w: C64) -> C64 {
        match self {
            ClosedForm::Exp => -w,
            ClosedForm::Euler => -cln1p(w),
            ClosedForm::Spline if w.norm() < 0.5 => cln1p(sinhc_m1(w)) - w,
            ClosedForm::Spline => (-cexpm1(-2.0 * w) / (2.0 * w)).ln(),
            ClosedForm::Yosida { t } => -*t * w / (*t + w),
            ClosedForm::Hille => cexpm1(-w),
            _ => cln1p(self.m1(w)),
        }
    }

    /// ln g(w) + w where a cancellation-free form exists.
    fn ln_g_plus_id(&self, w: C64) -> Option<C64> {
        match self {
            ClosedForm::Exp => Some(c(0.0, 0.0)),
            ClosedForm::Spline if w.norm() < 0.5 => Some(cln1p(sinhc_m1(w))),
            ClosedForm::Spline => Some((-cexpm1(-2.0 * w) / (2.0 * w)).ln() + w),
            ClosedForm::Euler if w.norm() < 0.1 => {
                // w - ln(1 + w) = Σ_{k>=2} (-1)^k w^k / k
                let mut p = w;
                let mut acc = c(0.0, 0.0);
                for k in 2..40 {
                    p *= -w;
                    acc -= p / k as f64;
                }
                Some(acc)
            }
            ClosedForm::Yosida { t } => Some(w * w / (*t + w)),
            _ => None,
        }
    }
}

impl CmFunction {
    /// Function defined by a measure, with optional closed form and known moments.
    pub fn from_measure(
        name: impl Into<String>,
        measure: PositiveMeasure,
        closed: Option<ClosedForm>,
        moments: Option<[ExtReal; 5]>,
    ) -> Result<Self> {
        let moments = match moments {
            Some(m) => m,
            None => {
                let mut m = [ExtReal::Finite(0.0); 5];
                for (k, slot) in m.iter_mut().enumerate() {
                    *slot = measure.moment(k as u32)?;
                }
                m
            }
        };
        Ok(Self {
            name: name.into(),
            integrability: measure.integrability_exponent(),
            limit_at_infinity: measure.atom_at_zero(),
            repr: Repr::Measure { measure: Arc::new(measure), closed },
            moments,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn measure(&self) -> Option<&PositiveMeasure> {
        match &self.repr {
            Repr::Measure { measure, .. } => Some(measure),
            Repr::Power { .. } => None,
        }
    }

    pub fn closed_form(&self) -> Option<&ClosedForm> {
        match &self.repr {
            Repr::Measure { closed, .. } => closed.as_ref(),
            Repr::Power { .. } => None,
        }
    }

    /// (base, n) when this is a power scaling.
    pub fn power_parts(&self) -> Option<(&CmFunction, u32)> {
        match &self.repr {
            Repr::Power { base, n } => Some((base, *n)),
            Repr::Measure { .. } => None,
        }
    }

    pub fn moment(&self, k: usize) -> ExtReal {
        self.moments[k]
    }

    pub fn moments(&self) -> [ExtReal; 5] {
        self.moments
    }

    /// g^{(k)}(0) = (-1)^k m_k.
    pub fn derivative_at_zero(&self, k: usize) -> ExtReal {
        match self.moments[k] {
            ExtReal::Finite(v) => ExtReal::Finite(if k % 2 == 0 { v } else { -v }),
            e => e,
        }
    }

    pub fn integrability(&self) -> Option<u32> {
        self.integrability
    }

    pub fn limit_at_infinity(&self) -> f64 {
        self.limit_at_infinity
    }

    pub fn class(&self) -> CmClass {
        let tol = 1e-10;
        let (m0, m1) = (self.moments[0].to_f64(), self.moments[1].to_f64());
        if (m0 - 1.0).abs() > tol || (m1 - 1.0).abs() > tol {
            return CmClass::Bounded;
        }
        let mut cls = CmClass::B1;
        for (k, next) in [(2, CmClass::B2), (3, CmClass::B3), (4, CmClass::B4)] {
            if self.moments[k].is_finite() {
                cls = next;
            } else {
                break;
            }
        }
        cls
    }

    pub fn require(&self, cls: CmClass) -> Result<()> {
        if self.class() >= cls {
            Ok(())
        } else {
            Err(Error::RequiresClass(format!("{cls:?}")))
        }
    }

    /// gₙ(z) = gⁿ(z/n).
    pub fn power_scale(&self, n: u32) -> Result<CmFunction> {
        if n == 0 {
            return Err(Error::InvalidParameter("power scale needs n >= 1".into()));
        }
        if n == 1 {
            return Ok(self.clone());
        }
        let (base, total) = match &self.repr {
            Repr::Power { base, n: m } => (base.clone(), m * n),
            Repr::Measure { .. } => (Arc::new(self.clone()), n),
        };
        let mut moments = [ExtReal::Infinite; 5];
        for (k, slot) in moments.iter_mut().enumerate() {
            if (0..=k).all(|j| base.moments[j].is_finite()) {
                let d = scaled_derivative(&base.moments.map(|m| m.to_f64()), total, k, true);
                *slot = ExtReal::Finite(if k % 2 == 0 { d } else { -d });
            }
        }
        Ok(CmFunction {
            name: format!("{}^{}", base.name, total),
            integrability: base.integrability.map(|k| k.div_ceil(total).max(1)),
            limit_at_infinity: base.limit_at_infinity.powi(total as i32),
            repr: Repr::Power { base, n: total },
            moments,
        })
    }

    fn base_ln_g(&self, w: C64) -> Result<C64> {
        match &self.repr {
            Repr::Measure { closed: Some(cf), .. } => Ok(cf.ln_g(w)),
            Repr::Measure { measure, .. } => {
                let g = measure.laplace_complex(w)?;
                if (g - 1.0).norm() < 0.5 {
                    Ok(cln1p(self.base_m1(w)?))
                } else {
                    Ok(g.ln())
                }
            }
            Repr::Power { .. } => unreachable!(),
        }
    }

    fn base_m1(&self, w: C64) -> Result<C64> {
        match &self.repr {
            Repr::Measure { closed: Some(cf), .. } => Ok(cf.m1(w)),
            Repr::Measure { measure, .. } => {
                Ok(measure.laplace_m1_complex(w)? + (self.moments[0].to_f64() - 1.0))
            }
            Repr::Power { .. } => unreachable!(),
        }
    }

    fn base_ln_g_plus_id(&self, w: C64) -> Result<C64> {
        if let Repr::Measure { closed: Some(cf), .. } = &self.repr {
            if let Some(v) = cf.ln_g_plus_id(w) {
                return Ok(v);
            }
        }
        if w.norm() < 1e-4 && self.moments[4].is_finite() {
            // cumulant expansion
            let m = self.moments.map(|m| m.to_f64());
            let k2 = m[2] - 1.0;
            let k3 = m[3] - 3.0 * m[2] + 2.0;
            let k4 = m[4] - 4.0 * m[3] - 3.0 * m[2] * m[2] + 12.0 * m[2] - 6.0;
            let w2 = w * w;
            return Ok(w2 * (k2 / 2.0 - w * k3 / 6.0 + w2 * k4 / 24.0));
        }
        Ok(self.base_ln_g(w)? + w)
    }

    /// ln g(w) for Re w >= 0.
    pub fn ln_eval_complex(&self, w: C64) -> Result<C64> {
        match &self.repr {
            Repr::Power { base, n } => Ok(base.base_ln_g(w / *n as f64)? * *n as f64),
            Repr::Measure { .. } => self.base_ln_g(w),
        }
    }

    pub fn eval_complex(&self, w: C64) -> Result<C64> {
        match &self.repr {
            Repr::Measure { closed: None, measure } if w.norm() > 1.0 => measure.laplace_complex(w),
            _ => Ok(self.ln_eval_complex(w)?.exp()),
        }
    }

    pub fn eval(&self, z: f64) -> Result<f64> {
        if z.is_infinite() {
            return Ok(self.limit_at_infinity);
        }
        Ok(self.eval_complex(c(z, 0.0))?.re)
    }

    /// g(w) - 1.
    pub fn m1_complex(&self, w: C64) -> Result<C64> {
        match &self.repr {
            Repr::Power { base, n } => Ok(cexpm1(base.base_ln_g(w / *n as f64)? * *n as f64)),
            Repr::Measure { .. } => self.base_m1(w),
        }
    }

    /// g(w) - e^{-w}, accurate near w = 0.
    pub fn excess_over_exp(&self, w: C64) -> Result<C64> {
        match &self.repr {
            Repr::Power { base, n } => {
                let nf = *n as f64;
                let s = base.base_ln_g_plus_id(w / nf)? * nf;
                Ok((-w).exp() * cexpm1(s))
            }
            Repr::Measure { .. } => {
                if w.norm() < 1e-4 && self.moments[4].is_finite() {
                    let s = self.base_ln_g_plus_id(w)?;
                    Ok((-w).exp() * cexpm1(s))
                } else {
                    Ok(self.base_m1(w)? - cexpm1(-w))
                }
            }
        }
    }

    /// g(w) - g(∞), without cancellation against the limit.
    pub fn decaying_part(&self, w: C64) -> Result<C64> {
        let w0 = self.limit_at_infinity;
        match &self.repr {
            Repr::Measure { .. } if w0 == 0.0 => self.eval_complex(w),
            Repr::Measure { measure, .. } => measure.laplace_complex_decaying(w),
            Repr::Power { base, n } => {
                let nf = *n as f64;
                if w0 == 0.0 {
                    return self.eval_complex(w);
                }
                let b0 = base.limit_at_infinity;
                let r = base.decaying_part(w / nf)?;
                Ok(w0 * cexpm1(cln1p(r / b0) * nf))
            }
        }
    }

    fn base_derivative(&self, k: usize, z: f64) -> Result<f64> {
        let m = self.measure().ok_or(Error::RequiresMeasure)?;
        let v = m.weighted_laplace(k as u32, z, 0.0, f64::INFINITY)?.to_f64();
        Ok(if k % 2 == 0 { v } else { -v })
    }

    /// g^{(k)}(z) for real z >= 0 and k <= 4.
    pub fn derivative(&self, k: usize, z: f64) -> Result<f64> {
        if k > 4 {
            return Err(Error::InvalidParameter("derivative order above 4".into()));
        }
        match &self.repr {
            Repr::Measure { .. } => {
                if k == 0 {
                    return self.eval(z);
                }
                self.base_derivative(k, z)
            }
            Repr::Power { base, n } => {
                let w = z / *n as f64;
                let mut u = [0.0; 5];
                for (j, slot) in u.iter_mut().enumerate().take(k + 1) {
                    *slot = if j == 0 { base.eval(w)? } else { base.base_derivative(j, w)? };
                }
                Ok(scaled_derivative(&u, *n, k, false))
            }
        }
    }

    /// (g + g')(z), computed from the measure as ∫ (1 - s) e^{-zs} ν(ds) where possible.
    pub fn g_plus_gprime(&self, z: f64) -> Result<f64> {
        match &self.repr {
            Repr::Measure { measure, .. } => {
                let a = measure.weighted_laplace(0, z, 0.0, f64::INFINITY)?.to_f64();
                let b = measure.weighted_laplace(1, z, 0.0, f64::INFINITY)?.to_f64();
                Ok(a - b)
            }
            Repr::Power { base, n } => {
                let w = z / *n as f64;
                let u = base.eval(w)?;
                Ok(u.powi(*n as i32 - 1) * base.g_plus_gprime(w)?)
            }
        }
    }
}

/// k-th derivative of uⁿ(z/n) given u and its derivatives at z/n (or moments when `at_zero`).
fn scaled_derivative(base: &[f64; 5], n: u32, k: usize, at_zero: bool) -> f64 {
    let nf = n as f64;
    let mut u = *base;
    if at_zero {
        // derivatives at zero from moments
        for (j, slot) in u.iter_mut().enumerate() {
            if j % 2 == 1 {
                *slot = -*slot;
            }
        }
    }
    let u0 = u[0];
    let d: Vec<f64> = (1..5).map(|j| u[j] / nf.powi(j as i32)).collect();
    let (u1, u2, u3, u4) = (d[0], d[1], d[2], d[3]);
    let pw = |e: i64| -> f64 {
        if e < 0 {
            0.0
        } else {
            u0.powi(e as i32)
        }
    };
    let ni = n as i64;
    let f1 = nf;
    let f2 = nf * (nf - 1.0);
    let f3 = f2 * (nf - 2.0);
    let f4 = f3 * (nf - 3.0);
    match k {
        0 => pw(ni),
        1 => f1 * pw(ni - 1) * u1,
        2 => f2 * pw(ni - 2) * u1 * u1 + f1 * pw(ni - 1) * u2,
        3 => f3 * pw(ni - 3) * u1.powi(3) + 3.0 * f2 * pw(ni - 2) * u1 * u2 + f1 * pw(ni - 1) * u3,
        4 => {
            f4 * pw(ni - 4) * u1.powi(4)
                + 6.0 * f3 * pw(ni - 3) * u1 * u1 * u2
                + 3.0 * f2 * pw(ni - 2) * u2 * u2
                + 4.0 * f2 * pw(ni - 2) * u1 * u3
                + f1 * pw(ni - 1) * u4
        }
        _ => unreachable!(),
    }
}
