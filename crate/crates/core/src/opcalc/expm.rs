//! Matrix exponential by Padé(13) scaling and squaring.

use crate::numeric::C64;
use nalgebra::DMatrix;

const B: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];

const THETA_13: f64 = 5.371_920_351_148_152;

pub fn norm1(a: &DMatrix<C64>) -> f64 {
    (0..a.ncols())
        .map(|j| a.column(j).iter().map(|c| c.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Spectral norm via the largest singular value.
pub fn norm2(a: &DMatrix<C64>) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    a.clone().svd(false, false).singular_values.max()
}

/// e^{M} for a square complex matrix.
pub fn expm(m: &DMatrix<C64>) -> DMatrix<C64> {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "expm needs a square matrix");
    let id = DMatrix::<C64>::identity(n, n);
    let nrm = norm1(m);
    if nrm == 0.0 {
        return id;
    }
    let s = if nrm > THETA_13 { (nrm / THETA_13).log2().ceil() as i32 } else { 0 };
    let a = m * C64::new(2f64.powi(-s), 0.0);
    let r = |x: f64| C64::new(x, 0.0);

    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;

    let u_inner = &a6 * (&a6 * r(B[13]) + &a4 * r(B[11]) + &a2 * r(B[9]));
    let u = &a * (u_inner + &a6 * r(B[7]) + &a4 * r(B[5]) + &a2 * r(B[3]) + &id * r(B[1]));
    let v_inner = &a6 * (&a6 * r(B[12]) + &a4 * r(B[10]) + &a2 * r(B[8]));
    let v = v_inner + &a6 * r(B[6]) + &a4 * r(B[4]) + &a2 * r(B[2]) + &id * r(B[0]);

    let p = &v + &u;
    let q = &v - &u;
    let mut x = q.lu().solve(&p).expect("Padé denominator is singular");
    for _ in 0..s {
        x = &x * &x;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn diagonal_and_zero() {
        let z = DMatrix::<C64>::zeros(3, 3);
        assert_eq!(expm(&z), DMatrix::identity(3, 3));
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(-1.0, 0.0), c(-2.0, 0.0), c(0.0, 30.0)]));
        let e = expm(&d);
        assert!((e[(0, 0)] - c((-1.0f64).exp(), 0.0)).norm() < 1e-15);
        assert!((e[(1, 1)] - c((-2.0f64).exp(), 0.0)).norm() < 1e-15);
        assert!((e[(2, 2)] - c(0.0, 30.0).exp()).norm() < 1e-13);
    }

    #[test]
    fn nilpotent() {
        let n = DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        let e = expm(&n);
        assert!((e[(0, 1)] - c(-1.0, 0.0)).norm() < 1e-15);
        assert!((e[(0, 0)] - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn rotation() {
        // exp of [[0, -θ], [θ, 0]] is a rotation
        let th = 7.3;
        let m = DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(-th, 0.0), c(th, 0.0), c(0.0, 0.0)]);
        let e = expm(&m);
        assert!((e[(0, 0)].re - th.cos()).abs() < 1e-13);
        assert!((e[(1, 0)].re - th.sin()).abs() < 1e-13);
    }
}
