//! Cardinal B-splines and the spline power identity.

use crate::quad::{integrate, QuadOptions};
use crate::error::Result;

/// B_k(x) on [0, k+1], with B_0 the indicator of [0, 1).
pub fn bspline(k: u32, x: f64) -> f64 {
    if k == 0 {
        return if (0.0..1.0).contains(&x) { 1.0 } else { 0.0 };
    }
    let kf = k as f64;
    (x * bspline(k - 1, x) + (kf + 1.0 - x) * bspline(k - 1, x - 1.0)) / kf
}

/// ∫_0^n e^{-2zs} B_{n-1}(s) ds, which equals s(z)ⁿ for the spline function.
pub fn spline_power_transform(n: u32, z: f64) -> Result<f64> {
    let opts = QuadOptions { rel_tol: 1e-14, ..Default::default() };
    let mut acc = 0.0;
    for j in 0..n {
        let (a, b) = (j as f64, j as f64 + 1.0);
        acc += integrate(|s| (-2.0 * z * s).exp() * bspline(n - 1, s), a, b, &opts)?;
    }
    Ok(acc)
}
