//! Gamma-family special functions.

use crate::error::{invalid, Error, Result};

const LANCZOS: [f64; 14] = [
    57.156_235_665_862_923_5,
    -59.597_960_355_475_491_2,
    14.136_097_974_741_747_1,
    -0.491_913_816_097_620_199,
    0.339_946_499_848_118_887e-4,
    0.465_236_289_270_485_756e-4,
    -0.983_744_753_048_795_646e-4,
    0.158_088_703_224_912_494e-3,
    -0.210_264_441_724_104_883e-3,
    0.217_439_618_115_212_643e-3,
    -0.164_318_106_536_763_890e-3,
    0.844_182_239_838_527_433e-4,
    -0.261_908_384_015_814_087e-4,
    0.368_991_826_595_316_234e-5,
];

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    assert!(x > 0.0, "ln_gamma requires x > 0");
    if x < 0.5 {
        // Γ(x) = Γ(x+1)/x keeps the rational part in its accurate range
        return ln_gamma(x + 1.0) - x.ln();
    }
    let mut y = x;
    let tmp = x + 5.242_187_5;
    let tmp = (x + 0.5) * tmp.ln() - tmp;
    let mut ser = 0.999_999_999_999_997_092;
    for c in LANCZOS {
        y += 1.0;
        ser += c / y;
    }
    tmp + (2.506_628_274_631_000_5 * ser / x).ln()
}

// B_{2k}/(2k) for k = 1..8
const DIGAMMA_ASY: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
    -3617.0 / 8160.0,
];

// B_{2k}/(2k(2k-1)) for k = 1..8
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
];

/// ln x - ψ(x) - 1/(2x), asymptotic series for x >= 10.
fn digamma_tail(x: f64) -> f64 {
    let inv2 = 1.0 / (x * x);
    let mut p = inv2;
    let mut s = 0.0;
    for c in DIGAMMA_ASY {
        s += c * p;
        p *= inv2;
    }
    s
}

/// ψ(x) for x > 0.
pub fn digamma(x: f64) -> f64 {
    assert!(x > 0.0, "digamma requires x > 0");
    let mut acc = 0.0;
    let mut y = x;
    while y < 10.0 {
        acc -= 1.0 / y;
        y += 1.0;
    }
    acc + y.ln() - 0.5 / y - digamma_tail(y)
}

/// ln x - ψ(x), without cancellation for large x.
pub fn log_minus_digamma(x: f64) -> f64 {
    if x >= 10.0 {
        0.5 / x + digamma_tail(x)
    } else {
        x.ln() - digamma(x)
    }
}

/// ln Γ(x+a) - ln Γ(x) - a ln x, accurate when x is large.
pub fn ln_gamma_ratio_scaled(x: f64, a: f64) -> f64 {
    if x < 10.0 || x + a < 10.0 {
        return ln_gamma(x + a) - ln_gamma(x) - a * x.ln();
    }
    let r = (a / x).ln_1p();
    let mut s = (x - 0.5) * r + a * r - a;
    let (ia, ix) = (1.0 / (x + a), 1.0 / x);
    let (ia2, ix2) = (ia * ia, ix * ix);
    let (mut pa, mut px) = (ia, ix);
    for c in STIRLING {
        s += c * (pa - px);
        pa *= ia2;
        px *= ix2;
    }
    s
}

/// Regularized lower and upper incomplete gamma functions (P, Q).
pub fn gamma_pq(a: f64, x: f64) -> Result<(f64, f64)> {
    if a <= 0.0 || !a.is_finite() {
        return Err(invalid(format!("incomplete gamma shape {a}")));
    }
    if x < 0.0 || x.is_nan() {
        return Err(invalid(format!("incomplete gamma argument {x}")));
    }
    if x == 0.0 {
        return Ok((0.0, 1.0));
    }
    if x == f64::INFINITY {
        return Ok((1.0, 0.0));
    }
    let lnpre = a * x.ln() - x - ln_gamma(a);
    if x < a + 1.0 {
        let mut ap = a;
        let mut del = 1.0 / a;
        let mut sum = del;
        for _ in 0..100_000 {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if del.abs() < sum.abs() * 1e-17 {
                let p = (sum.ln() + lnpre).exp();
                return Ok((p, 1.0 - p));
            }
        }
        Err(Error::NonConvergence("incomplete gamma series".into()))
    } else {
        // modified Lentz continued fraction for Q
        let tiny = 1e-300;
        let mut b = x + 1.0 - a;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..100_000 {
            let an = -(i as f64) * (i as f64 - a);
            b += 2.0;
            d = an * d + b;
            if d.abs() < tiny {
                d = tiny;
            }
            c = b + an / c;
            if c.abs() < tiny {
                c = tiny;
            }
            d = 1.0 / d;
            let del = d * c;
            h *= del;
            if (del - 1.0).abs() < 1e-16 {
                let q = (lnpre + h.ln()).exp();
                return Ok((1.0 - q, q));
            }
        }
        Err(Error::NonConvergence("incomplete gamma fraction".into()))
    }
}

/// ∫_lo^hi s^m e^{-c s} ds for integer m >= 0 and c > 0; hi may be infinite.
pub fn gamma_segment(m: u32, c: f64, lo: f64, hi: f64) -> Result<f64> {
    if c <= 0.0 {
        return Err(invalid("gamma_segment requires positive rate"));
    }
    if hi <= lo {
        return Ok(0.0);
    }
    let a = m as f64 + 1.0;
    let scale = (ln_gamma(a) - a * c.ln()).exp();
    let (pl, ql) = gamma_pq(a, c * lo)?;
    let (ph, qh) = gamma_pq(a, c * hi)?;
    // difference of whichever tail is smaller
    let d = if pl < 0.5 { ph - pl } else { ql - qh };
    Ok(scale * d.max(0.0))
}
