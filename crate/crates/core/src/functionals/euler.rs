//! Exact values for the Euler scheme g(z) = 1/(1+z).

use crate::error::{invalid, Result};
use crate::special::{gamma_pq, ln_gamma, ln_gamma_ratio_scaled, log_minus_digamma};

/// c_α[gₙ] for g = 1/(1+z): [1 - Γ(n+α)/(n^α Γ(n))]/(α(1-α)), digamma forms at α ∈ {0, 1}.
pub fn euler_c_alpha_exact(n: u32, alpha: f64) -> Result<f64> {
    if n == 0 || !(0.0..=1.0).contains(&alpha) {
        return Err(invalid("euler_c_alpha_exact needs n >= 1 and alpha in [0, 1]"));
    }
    let nf = n as f64;
    if alpha == 0.0 {
        return Ok(log_minus_digamma(nf));
    }
    if alpha == 1.0 {
        return Ok(1.0 / nf - log_minus_digamma(nf));
    }
    let r = ln_gamma_ratio_scaled(nf, alpha);
    Ok(-r.exp_m1() / (alpha * (1.0 - alpha)))
}

/// r_{α,n}: the sharp rate constant bounding c_α[gₙ].
pub fn euler_rate_constant(alpha: f64, n: u32) -> f64 {
    let nf = n as f64;
    if alpha < 0.5 {
        0.5 / nf + (1.0 - 2.0 * alpha) / (12.0 * nf * nf)
    } else {
        0.5 / nf
    }
}

/// L[gₙ] = P(n, n) - P(n+1, n) from the Gamma density of gₙ.
pub fn euler_l_exact(n: u32) -> Result<f64> {
    let nf = n as f64;
    let (p0, q0) = gamma_pq(nf, nf)?;
    let (p1, q1) = gamma_pq(nf + 1.0, nf)?;
    // P(n,n) - P(n+1,n) = Q(n+1,n) - Q(n,n) = nⁿe^{-n}/n!
    let direct = (nf * nf.ln() - nf - ln_gamma(nf + 1.0)).exp();
    debug_assert!(((p0 - p1) - (q1 - q0)).abs() < 1e-12);
    Ok(direct)
}

/// Density of the measure of gₙ: nⁿ s^{n-1} e^{-ns}/(n-1)!.
pub fn euler_power_density(n: u32, s: f64) -> f64 {
    if s <= 0.0 {
        return if n == 1 { 1.0 } else { 0.0 };
    }
    let nf = n as f64;
    (nf * nf.ln() + (nf - 1.0) * s.ln() - nf * s - ln_gamma(nf)).exp()
}

/// Kernel G of the measure of gₙ, from incomplete Gamma functions.
pub fn euler_power_g(n: u32, tau: f64) -> Result<f64> {
    let nf = n as f64;
    let x = nf * tau;
    let (p0, q0) = gamma_pq(nf, x)?;
    let (p1, q1) = gamma_pq(nf + 1.0, x)?;
    // ∫₀^τ s vₙ = P(n+1, nτ) since the mean of vₙ is 1
    Ok(if tau <= 1.0 { tau * p0 - p1 } else { q1 - tau * q0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints() {
        let eg = 0.577_215_664_901_532_9;
        assert!((euler_c_alpha_exact(1, 0.0).unwrap() - eg).abs() < 1e-14);
        assert!((euler_c_alpha_exact(1, 1.0).unwrap() - (1.0 - eg)).abs() < 1e-14);
        let v = euler_c_alpha_exact(1, 0.5).unwrap();
        assert!((v - (4.0 - 2.0 * std::f64::consts::PI.sqrt())).abs() < 1e-13);
    }

    #[test]
    fn digamma_bracket() {
        for n in [1u32, 2, 7, 64, 1000] {
            let nf = n as f64;
            let c0 = euler_c_alpha_exact(n, 0.0).unwrap();
            let c1 = euler_c_alpha_exact(n, 1.0).unwrap();
            let h = 0.5 / nf;
            let q = 1.0 / (12.0 * nf * nf);
            assert!(h - q <= c1 + 1e-15 && c1 <= h + 1e-15);
            assert!(h <= c0 + 1e-15 && c0 <= h + q + 1e-15);
        }
    }

    #[test]
    fn rate_constant_dominates() {
        for n in [1u32, 3, 16, 256] {
            for &a in &[0.1, 0.25, 0.5, 0.75, 0.9] {
                assert!(euler_c_alpha_exact(n, a).unwrap() <= euler_rate_constant(a, n) + 1e-12);
            }
        }
    }

    #[test]
    fn l_exact_matches_gamma_difference() {
        for n in [1u32, 16, 200] {
            let nf = n as f64;
            let (p0, _) = gamma_pq(nf, nf).unwrap();
            let (p1, _) = gamma_pq(nf + 1.0, nf).unwrap();
            assert!((euler_l_exact(n).unwrap() - (p0 - p1)).abs() < 1e-13);
        }
        assert!((euler_l_exact(1).unwrap() - (-1.0f64).exp()).abs() < 1e-15);
    }
}
