//! Deterministic test vectors.

use crate::error::Result;
use crate::numeric::{c, C64};
use crate::opcalc::GeneratorMatrix;
use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const DEFAULT_SEED: u64 = 0x5EED;

#[derive(Clone, Debug)]
pub struct TestVector {
    pub id: String,
    pub x: DVector<C64>,
    /// V⁻¹x.
    pub coef: DVector<C64>,
}

fn unit(v: DVector<C64>) -> DVector<C64> {
    let n = v.norm();
    v / c(n, 0.0)
}

/// All-ones, five random complex vectors and two eigenvector mixtures, each of unit norm.
pub fn test_vectors(a: &GeneratorMatrix, seed: u64) -> Result<Vec<TestVector>> {
    let d = a.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![("ones".to_string(), unit(DVector::from_element(d, c(1.0, 0.0))))];
    for k in 0..5 {
        let v = DVector::from_fn(d, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        out.push((format!("rand{k}"), unit(v)));
    }
    let mix = |idx: &[usize]| -> Result<DVector<C64>> {
        let mut y = DVector::<C64>::zeros(d);
        for &i in idx {
            y[i] = c(1.0, 0.0);
        }
        Ok(unit(a.from_eigenbasis(&y)?))
    };
    let low: Vec<usize> = (0..d.min(3)).collect();
    let high: Vec<usize> = (d.saturating_sub(3)..d).collect();
    out.push(("eig_low".to_string(), mix(&low)?));
    out.push(("eig_high".to_string(), mix(&high)?));
    out.into_iter()
        .map(|(id, x)| Ok(TestVector { coef: a.to_eigenbasis(&x)?, id, x }))
        .collect()
}

/// ‖V (f ∘ y)‖.
pub fn weighted_norm(a: &GeneratorMatrix, f: &[C64], y: &DVector<C64>) -> Result<f64> {
    let z = DVector::from_iterator(y.len(), y.iter().zip(f).map(|(a, b)| a * b));
    if a.is_normal() {
        return Ok(z.norm());
    }
    Ok(a.from_eigenbasis(&z)?.norm())
}
