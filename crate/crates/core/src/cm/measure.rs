//! Finite positive Borel measures on [0, ∞): atoms plus density segments.

use crate::error::{Error, Result};
use crate::numeric::{cexpm1, ExtReal, C64};
use crate::quad::{integrate, integrate_to_infinity, QuadOptions};
use crate::special::gamma_segment;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub location: f64,
    pub weight: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Density {
    /// p(s) e^{-rate s}, coefficients in increasing degree.
    PolyExp { poly: Vec<f64>, rate: f64 },
    /// weight (s + shift)^{-power}
    PowerLaw { weight: f64, shift: f64, power: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub start: f64,
    /// May be `f64::INFINITY`.
    pub end: f64,
    pub density: Density,
}

fn horner(p: &[f64], s: f64) -> f64 {
    p.iter().rev().fold(0.0, |acc, &c| acc * s + c)
}

fn derivative(p: &[f64]) -> Vec<f64> {
    p.iter().enumerate().skip(1).map(|(i, &c)| c * i as f64).collect()
}

fn trim(p: &[f64]) -> &[f64] {
    let mut n = p.len();
    while n > 0 && p[n - 1] == 0.0 {
        n -= 1;
    }
    &p[..n]
}

/// Real roots of `p` in [a, b] (finite), found by bracketing between critical points.
pub(crate) fn real_roots(p: &[f64], a: f64, b: f64) -> Vec<f64> {
    let p = trim(p);
    match p.len() {
        0 | 1 => return vec![],
        2 => {
            let r = -p[0] / p[1];
            return if r >= a && r <= b { vec![r] } else { vec![] };
        }
        _ => {}
    }
    let mut pts = vec![a];
    pts.extend(real_roots(&derivative(p), a, b));
    pts.push(b);
    let mut roots = Vec::new();
    for w in pts.windows(2) {
        let (mut lo, mut hi) = (w[0], w[1]);
        let (flo, fhi) = (horner(p, lo), horner(p, hi));
        if flo == 0.0 {
            roots.push(lo);
            continue;
        }
        if flo * fhi > 0.0 {
            continue;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if horner(p, mid) * flo > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        roots.push(0.5 * (lo + hi));
    }
    roots
}

impl Segment {
    pub fn density_at(&self, s: f64) -> f64 {
        if s < self.start || s > self.end {
            return 0.0;
        }
        match &self.density {
            Density::PolyExp { poly, rate } => horner(poly, s) * (-rate * s).exp(),
            Density::PowerLaw { weight, shift, power } => weight * (s + shift).powf(-power),
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidMeasure(m.to_string()));
        if !(self.start >= 0.0 && self.start.is_finite() && self.end > self.start) {
            return bad("segment needs 0 <= a < b");
        }
        match &self.density {
            Density::PolyExp { poly, rate } => {
                if !(rate.is_finite() && *rate >= 0.0) || poly.iter().any(|c| !c.is_finite()) {
                    return bad("bad polynomial or rate");
                }
                let p = trim(poly);
                if self.end.is_infinite() {
                    if *rate == 0.0 && !p.is_empty() {
                        return bad("infinite segment needs positive rate");
                    }
                    if p.last().is_some_and(|&l| l < 0.0) {
                        return bad("density negative at infinity");
                    }
                }
                let scale = p.iter().fold(0.0f64, |m, c| m.max(c.abs()));
                let hi = if self.end.is_finite() {
                    self.end
                } else {
                    // Cauchy bound on the roots of p'
                    let d = derivative(p);
                    let d = trim(&d);
                    let lead = d.last().copied().unwrap_or(1.0).abs();
                    self.start + 1.0 + d.iter().fold(0.0f64, |m, c| m.max(c.abs())) / lead.max(1e-300)
                };
                let mut checks = vec![self.start, hi];
                checks.extend(real_roots(&derivative(p), self.start, hi));
                for s in checks {
                    if horner(p, s) < -1e-12 * scale.max(1.0) * (1.0 + s.abs()).powi(p.len() as i32) {
                        return bad("density negative");
                    }
                }
            }
            Density::PowerLaw { weight, shift, power } => {
                if !(*weight > 0.0 && shift.is_finite() && power.is_finite()) {
                    return bad("bad power-law parameters");
                }
                if self.start + shift <= 0.0 {
                    return bad("power-law singular inside segment");
                }
                if self.end.is_infinite() && *power <= 1.0 {
                    return bad("power-law mass infinite");
                }
            }
        }
        Ok(())
    }

    fn opts() -> QuadOptions {
        QuadOptions { rel_tol: 1e-14, ..Default::default() }
    }

    /// ∫ over [lo, hi] ∩ segment of s^k e^{-z s} density(s) ds for real z >= 0.
    pub fn weighted_laplace(&self, k: u32, z: f64, lo: f64, hi: f64) -> Result<ExtReal> {
        let (a, b) = (self.start.max(lo), self.end.min(hi));
        if b <= a {
            return Ok(ExtReal::Finite(0.0));
        }
        match &self.density {
            Density::PolyExp { poly, rate } => {
                let r = rate + z;
                let mut acc = 0.0;
                for (j, &pj) in poly.iter().enumerate() {
                    if pj == 0.0 {
                        continue;
                    }
                    let m = j as u32 + k;
                    let v = if r > 0.0 {
                        gamma_segment(m, r, a, b)?
                    } else {
                        let e = m as i32 + 1;
                        (b.powi(e) - a.powi(e)) / e as f64
                    };
                    acc += pj * v;
                }
                Ok(ExtReal::Finite(acc))
            }
            Density::PowerLaw { power, .. } => {
                if b.is_infinite() && z == 0.0 && k as f64 + 1.0 >= *power {
                    return Ok(ExtReal::Infinite);
                }
                let f = |s: f64| s.powi(k as i32) * (-z * s).exp() * self.density_at(s);
                let v = if b.is_infinite() {
                    let w = if z > 0.0 { (1.0 / z).min(1.0) } else { 1.0 };
                    integrate_to_infinity(f, a, w, &Self::opts())?
                } else {
                    integrate(f, a, b, &Self::opts())?
                };
                Ok(ExtReal::Finite(v))
            }
        }
    }

    /// ∫ e^{-w s} density(s) ds for Re w >= 0.
    pub fn laplace_complex(&self, w: C64) -> Result<C64> {
        let (a, b) = (self.start, self.end);
        match &self.density {
            Density::PolyExp { poly, rate } if b.is_infinite() => {
                // ∫_a^∞ s^j e^{-λ s} ds = e^{-λ a} Σ_i j!/i! a^i / λ^{j-i+1}
                let lam = w + rate;
                let ea = (-lam * a).exp();
                let mut acc = C64::new(0.0, 0.0);
                for (j, &pj) in poly.iter().enumerate() {
                    if pj == 0.0 {
                        continue;
                    }
                    let mut term = C64::new(0.0, 0.0);
                    let mut coef = 1.0; // j!/i! built downward from i = j
                    let mut apow = a.powi(j as i32);
                    for i in (0..=j).rev() {
                        term += coef * apow / lam.powi((j - i + 1) as i32);
                        coef *= i.max(1) as f64;
                        if i > 0 {
                            apow = if a == 0.0 { if i == 1 { 1.0 } else { 0.0 } } else { apow / a };
                        }
                    }
                    acc += pj * term;
                }
                Ok(ea * acc)
            }
            Density::PolyExp { .. } => {
                integrate(|s| (-w * s).exp() * self.density_at(s), a, b, &Self::opts())
            }
            Density::PowerLaw { .. } if b.is_infinite() && w.norm() > 0.0 => self.rotated_tail(w, a),
            Density::PowerLaw { .. } => {
                if b.is_infinite() {
                    let f = |s: f64| C64::new(self.density_at(s), 0.0);
                    return integrate_to_infinity(f, a, 1.0, &Self::opts());
                }
                integrate(|s| (-w * s).exp() * self.density_at(s), a, b, &Self::opts())
            }
        }
    }

    /// ∫_a^∞ e^{-w s} density(s) ds along the ray of steepest decay.
    fn rotated_tail(&self, w: C64, a: f64) -> Result<C64> {
        let rot = C64::from_polar(1.0, -w.arg());
        let f = |u: f64| {
            let s = a + rot * u;
            self.power_density_complex(s) * rot * (-w.norm() * u).exp()
        };
        let v = integrate_to_infinity(f, 0.0, (1.0 / w.norm()).min(1.0), &Self::opts())?;
        Ok((-w * a).exp() * v)
    }

    fn power_density_complex(&self, s: C64) -> C64 {
        match &self.density {
            Density::PowerLaw { weight, shift, power } => *weight * (s + shift).powf(-power),
            Density::PolyExp { .. } => unreachable!(),
        }
    }

    /// ∫ (e^{-w s} - 1) density(s) ds, accurate for small |w|.
    pub fn laplace_m1_complex(&self, w: C64) -> Result<C64> {
        let f = |s: f64| cexpm1(-w * s) * self.density_at(s);
        if self.end.is_infinite() && matches!(self.density, Density::PowerLaw { .. }) && w.norm() > 0.0 {
            // oscillatory tail: split where |ws| reaches one
            let cut = self.start.max(1.0 / w.norm());
            let near = if cut > self.start { integrate(f, self.start, cut, &Self::opts())? } else { C64::new(0.0, 0.0) };
            let mass: f64 = integrate_to_infinity(|s| self.density_at(s), cut, cut, &Self::opts())?;
            return Ok(near + self.rotated_tail(w, cut)? - mass);
        }
        if self.end.is_infinite() {
            let width = if w.norm() > 0.0 { (1.0 / w.norm()).min(1.0) } else { 1.0 };
            integrate_to_infinity(f, self.start, width, &Self::opts())
        } else {
            integrate(f, self.start, self.end, &Self::opts())
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PositiveMeasure {
    atoms: Vec<Atom>,
    segments: Vec<Segment>,
}

impl PositiveMeasure {
    pub fn new(mut atoms: Vec<Atom>, segments: Vec<Segment>) -> Result<Self> {
        for a in &atoms {
            if !(a.location >= 0.0 && a.location.is_finite() && a.weight > 0.0 && a.weight.is_finite())
            {
                return Err(Error::InvalidMeasure(format!("bad atom {a:?}")));
            }
        }
        for s in &segments {
            s.validate()?;
        }
        if atoms.is_empty() && segments.is_empty() {
            return Err(Error::InvalidMeasure("empty measure".into()));
        }
        atoms.sort_by(|a, b| a.location.total_cmp(&b.location));
        Ok(Self { atoms, segments })
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn atom_at_zero(&self) -> f64 {
        self.atoms.iter().filter(|a| a.location == 0.0).map(|a| a.weight).sum()
    }

    /// ∫_{[lo, hi]} s^k e^{-z s} ν(ds); atoms at both ends included.
    pub fn weighted_laplace(&self, k: u32, z: f64, lo: f64, hi: f64) -> Result<ExtReal> {
        let mut acc = 0.0;
        for a in &self.atoms {
            if a.location >= lo && a.location <= hi {
                acc += a.weight * a.location.powi(k as i32) * (-z * a.location).exp();
            }
        }
        for s in &self.segments {
            match s.weighted_laplace(k, z, lo, hi)? {
                ExtReal::Finite(v) => acc += v,
                ExtReal::Infinite => return Ok(ExtReal::Infinite),
            }
        }
        Ok(ExtReal::Finite(acc))
    }

    pub fn moment(&self, k: u32) -> Result<ExtReal> {
        self.weighted_laplace(k, 0.0, 0.0, f64::INFINITY)
    }

    pub fn mass(&self) -> f64 {
        self.moment(0).map(|m| m.to_f64()).unwrap_or(f64::NAN)
    }

    /// ∫_{[0, s]} τ^k ν(dτ).
    pub fn lower(&self, k: u32, s: f64) -> Result<f64> {
        Ok(self.weighted_laplace(k, 0.0, 0.0, s)?.to_f64())
    }

    /// ∫_{(s, ∞)} τ^k ν(dτ).
    pub fn upper(&self, k: u32, s: f64) -> Result<ExtReal> {
        let mut acc = 0.0;
        for a in &self.atoms {
            if a.location > s {
                acc += a.weight * a.location.powi(k as i32);
            }
        }
        for seg in &self.segments {
            match seg.weighted_laplace(k, 0.0, s, f64::INFINITY)? {
                ExtReal::Finite(v) => acc += v,
                ExtReal::Infinite => return Ok(ExtReal::Infinite),
            }
        }
        Ok(ExtReal::Finite(acc))
    }

    /// Laplace transform at real z >= 0.
    pub fn laplace(&self, z: f64) -> Result<f64> {
        Ok(self.weighted_laplace(0, z, 0.0, f64::INFINITY)?.to_f64())
    }

    /// ∫ (e^{-w s} - 1) ν(ds).
    pub fn laplace_m1_complex(&self, w: C64) -> Result<C64> {
        let mut acc = C64::new(0.0, 0.0);
        for a in &self.atoms {
            acc += a.weight * cexpm1(-w * a.location);
        }
        for s in &self.segments {
            acc += s.laplace_m1_complex(w)?;
        }
        Ok(acc)
    }

    pub fn laplace_complex(&self, w: C64) -> Result<C64> {
        self.laplace_complex_impl(w, true)
    }

    /// Laplace transform without the atom at zero, i.e. g(w) - g(∞).
    pub fn laplace_complex_decaying(&self, w: C64) -> Result<C64> {
        self.laplace_complex_impl(w, false)
    }

    fn laplace_complex_impl(&self, w: C64, with_zero: bool) -> Result<C64> {
        let mut acc = C64::new(0.0, 0.0);
        for a in self.atoms.iter().filter(|a| with_zero || a.location > 0.0) {
            acc += a.weight * (-w * a.location).exp();
        }
        for s in &self.segments {
            acc += s.laplace_complex(w)?;
        }
        Ok(acc)
    }

    /// Sorted finite locations where the distribution changes character.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.atoms.iter().map(|a| a.location).collect();
        for s in &self.segments {
            v.push(s.start);
            if s.end.is_finite() {
                v.push(s.end);
            }
        }
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    }

    /// Smallest k with g ∈ L^k(0, ∞), read off the behaviour of ν near zero.
    pub fn integrability_exponent(&self) -> Option<u32> {
        if self.atom_at_zero() > 0.0 {
            return None;
        }
        let mut k = 1;
        for s in &self.segments {
            if s.start == 0.0 && s.density_at(0.0) > 0.0 {
                k = 2;
            }
        }
        Some(k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exp_measure() -> PositiveMeasure {
        PositiveMeasure::new(
            vec![],
            vec![Segment {
                start: 0.0,
                end: f64::INFINITY,
                density: Density::PolyExp { poly: vec![1.0], rate: 1.0 },
            }],
        )
        .unwrap()
    }

    #[test]
    fn exponential_moments_are_factorials() {
        let m = exp_measure();
        let f = [1.0, 1.0, 2.0, 6.0, 24.0];
        for k in 0..5 {
            let v = m.moment(k).unwrap().finite().unwrap();
            assert!((v - f[k as usize]).abs() < 1e-13);
        }
    }

    #[test]
    fn complex_laplace_matches_closed_form() {
        let m = exp_measure();
        let w = C64::new(0.3, 5.0);
        let exact = 1.0 / (w + 1.0);
        assert!((m.laplace_complex(w).unwrap() - exact).norm() < 1e-14);
        let e1 = m.laplace_m1_complex(w).unwrap();
        assert!((e1 - (exact - 1.0)).norm() < 1e-12);
    }

    #[test]
    fn rejects_negative_density() {
        let seg = Segment {
            start: 0.0,
            end: 2.0,
            density: Density::PolyExp { poly: vec![1.0, -2.0, 0.5], rate: 0.0 },
        };
        // 1 - 2s + s²/2 dips below zero near s = 2
        assert!(PositiveMeasure::new(vec![], vec![seg]).is_err());
        assert!(PositiveMeasure::new(vec![Atom { location: -1.0, weight: 1.0 }], vec![]).is_err());
    }

    #[test]
    fn power_law_divergent_moment() {
        let m = PositiveMeasure::new(
            vec![],
            vec![Segment {
                start: 0.0,
                end: f64::INFINITY,
                density: Density::PowerLaw { weight: 1.5 * 2.5, shift: 1.0, power: 3.5 },
            }],
        )
        .unwrap();
        assert!((m.moment(0).unwrap().to_f64() - 1.5).abs() < 1e-11);
        assert_eq!(m.moment(3).unwrap(), ExtReal::Infinite);
        assert!(m.moment(2).unwrap().is_finite());
    }

    #[test]
    fn roots_found() {
        let r = real_roots(&[2.0, -3.0, 1.0], 0.0, 5.0);
        assert_eq!(r.len(), 2);
        assert!((r[0] - 1.0).abs() < 1e-12 && (r[1] - 2.0).abs() < 1e-12);
    }
}
