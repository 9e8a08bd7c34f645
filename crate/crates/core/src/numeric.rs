//! Small numeric helpers shared across modules.

use num_complex::Complex64;

pub type C64 = Complex64;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// e^z - 1 without cancellation near zero.
pub fn cexpm1(z: C64) -> C64 {
    let (x, y) = (z.re, z.im);
    let s = (0.5 * y).sin();
    c(x.exp_m1() * y.cos() - 2.0 * s * s, x.exp() * y.sin())
}

/// ln(1 + z) without cancellation near zero.
pub fn cln1p(z: C64) -> C64 {
    let (x, y) = (z.re, z.im);
    c(0.5 * (2.0 * x + x * x + y * y).ln_1p(), y.atan2(1.0 + x))
}

/// Logarithmically spaced grid with `k` points from `lo` to `hi`.
pub fn logspace(lo: f64, hi: f64, k: usize) -> Vec<f64> {
    if k == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..k)
        .map(|i| (a + (b - a) * i as f64 / (k - 1) as f64).exp())
        .collect()
}

/// Extended nonnegative real: finite value or +∞ (a divergent moment).
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub enum ExtReal {
    Finite(f64),
    Infinite,
}

impl ExtReal {
    pub fn finite(self) -> Option<f64> {
        match self {
            ExtReal::Finite(v) => Some(v),
            ExtReal::Infinite => None,
        }
    }
    pub fn is_finite(self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }
    pub fn to_f64(self) -> f64 {
        self.finite().unwrap_or(f64::INFINITY)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expm1_ln1p_small() {
        let z = c(1e-10, -2e-10);
        assert!((cexpm1(z) - z).norm() < 1e-19);
        assert!((cln1p(z) - z).norm() < 1e-19);
        let w = c(0.3, 1.7);
        assert!((cexpm1(w) - (w.exp() - 1.0)).norm() < 1e-15);
        assert!((cln1p(w) - (w + 1.0).ln()).norm() < 1e-15);
    }
}
