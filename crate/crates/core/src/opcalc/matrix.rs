//! Semigroup generators: dense complex matrices with structure tags, and the test gallery.

use super::expm::norm2;
use crate::error::{invalid, Error, Result};
use crate::numeric::{c, logspace, C64};
use nalgebra::{DMatrix, DVector};
use rand::Rng;

#[derive(Clone, Debug)]
pub enum Structure {
    Diagonal,
    /// A = V Λ V⁻¹; `unitary` when V is unitary (A normal).
    Diagonalizable { vecs: DMatrix<C64>, vecs_inv: DMatrix<C64>, unitary: bool },
    General,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum SpectrumLocation {
    ImaginaryAxis,
    PositiveReal,
    RightHalfPlane,
}

/// A with -A generating a bounded semigroup.
#[derive(Clone, Debug)]
pub struct GeneratorMatrix {
    entries: DMatrix<C64>,
    eigenvalues: Option<Vec<C64>>,
    structure: Structure,
    spectrum: SpectrumLocation,
    label: String,
}

fn locate(vals: &[C64]) -> SpectrumLocation {
    let scale = vals.iter().map(|v| v.norm()).fold(0.0, f64::max).max(1e-300);
    if vals.iter().all(|v| v.re.abs() <= 1e-14 * scale) {
        SpectrumLocation::ImaginaryAxis
    } else if vals.iter().all(|v| v.im.abs() <= 1e-14 * scale && v.re > 0.0) {
        SpectrumLocation::PositiveReal
    } else {
        SpectrumLocation::RightHalfPlane
    }
}

fn check_half_plane(vals: &[C64]) -> Result<()> {
    let scale = vals.iter().map(|v| v.norm()).fold(1.0, f64::max);
    if let Some(v) = vals.iter().find(|v| v.re < -1e-12 * scale) {
        return Err(invalid(format!("eigenvalue {v} has negative real part")));
    }
    Ok(())
}

impl GeneratorMatrix {
    pub fn diagonal(vals: Vec<C64>, label: impl Into<String>) -> Result<Self> {
        if vals.is_empty() {
            return Err(invalid("empty spectrum"));
        }
        check_half_plane(&vals)?;
        Ok(Self {
            entries: DMatrix::from_diagonal(&DVector::from_vec(vals.clone())),
            spectrum: locate(&vals),
            eigenvalues: Some(vals),
            structure: Structure::Diagonal,
            label: label.into(),
        })
    }

    /// A = V Λ V⁻¹ from eigen-factors.
    pub fn from_factors(vecs: DMatrix<C64>, vals: Vec<C64>, label: impl Into<String>) -> Result<Self> {
        let d = vals.len();
        if vecs.nrows() != d || vecs.ncols() != d {
            return Err(invalid("factor dimensions disagree"));
        }
        check_half_plane(&vals)?;
        let vecs_inv = vecs.clone().try_inverse().ok_or_else(|| invalid("eigenvector matrix is singular"))?;
        let lam = DMatrix::from_diagonal(&DVector::from_vec(vals.clone()));
        let entries = &vecs * lam * &vecs_inv;
        let resid = norm2(&(&vecs * DMatrix::from_diagonal(&DVector::from_vec(vals.clone())) - &entries * &vecs));
        if resid > 1e-10 * norm2(&entries).max(1.0) * norm2(&vecs) {
            return Err(invalid("factorization does not reproduce A"));
        }
        let gram = vecs.adjoint() * &vecs;
        let unitary = norm2(&(gram - DMatrix::identity(d, d))) < 1e-12;
        Ok(Self {
            entries,
            spectrum: locate(&vals),
            eigenvalues: Some(vals),
            structure: Structure::Diagonalizable { vecs, vecs_inv, unitary },
            label: label.into(),
        })
    }

    /// An arbitrary matrix with a declared spectrum location; no eigen-factors.
    pub fn general(entries: DMatrix<C64>, spectrum: SpectrumLocation, label: impl Into<String>) -> Result<Self> {
        if entries.nrows() != entries.ncols() || entries.is_empty() {
            return Err(invalid("generator must be square and nonempty"));
        }
        Ok(Self { entries, eigenvalues: None, structure: Structure::General, spectrum, label: label.into() })
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn eigenvalues(&self) -> Option<&[C64]> {
        self.eigenvalues.as_deref()
    }

    pub fn structure(&self) -> &Structure {
        &self.structure
    }

    pub fn spectrum(&self) -> SpectrumLocation {
        self.spectrum
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn is_normal(&self) -> bool {
        match &self.structure {
            Structure::Diagonal => true,
            Structure::Diagonalizable { unitary, .. } => *unitary,
            Structure::General => false,
        }
    }

    /// Copy scaled by a positive factor.
    pub fn scaled(&self, s: f64) -> Self {
        let mut out = self.clone();
        out.entries *= c(s, 0.0);
        if let Some(v) = out.eigenvalues.as_mut() {
            v.iter_mut().for_each(|x| *x *= s);
        }
        out
    }

    /// Coefficients of x in the eigenbasis, V⁻¹x.
    pub fn to_eigenbasis(&self, x: &DVector<C64>) -> Result<DVector<C64>> {
        match &self.structure {
            Structure::Diagonal => Ok(x.clone()),
            Structure::Diagonalizable { vecs_inv, .. } => Ok(vecs_inv * x),
            Structure::General => Err(Error::Unsupported("no eigen-factors for a general matrix".into())),
        }
    }

    /// V y.
    pub fn from_eigenbasis(&self, y: &DVector<C64>) -> Result<DVector<C64>> {
        match &self.structure {
            Structure::Diagonal => Ok(y.clone()),
            Structure::Diagonalizable { vecs, .. } => Ok(vecs * y),
            Structure::General => Err(Error::Unsupported("no eigen-factors for a general matrix".into())),
        }
    }

    /// V diag(f(λ)) V⁻¹.
    pub fn spectral_matrix<F: FnMut(C64) -> Result<C64>>(&self, mut f: F) -> Result<DMatrix<C64>> {
        let vals = self.eigenvalues.as_ref().ok_or(Error::Unsupported("no spectrum".into()))?;
        let fv: Vec<C64> = vals.iter().map(|&l| f(l)).collect::<Result<_>>()?;
        let dg = DMatrix::from_diagonal(&DVector::from_vec(fv));
        match &self.structure {
            Structure::Diagonal => Ok(dg),
            Structure::Diagonalizable { vecs, vecs_inv, .. } => Ok(vecs * dg * vecs_inv),
            Structure::General => Err(Error::Unsupported("no eigen-factors for a general matrix".into())),
        }
    }

    /// V diag(f(λ)) V⁻¹ x without forming the matrix.
    pub fn spectral_apply<F: FnMut(C64) -> Result<C64>>(&self, mut f: F, x: &DVector<C64>) -> Result<DVector<C64>> {
        let vals = self.eigenvalues.as_ref().ok_or(Error::Unsupported("no spectrum".into()))?;
        let mut y = self.to_eigenbasis(x)?;
        for (yi, &l) in y.iter_mut().zip(vals) {
            *yi *= f(l)?;
        }
        self.from_eigenbasis(&y)
    }
}

/// diag(i s_j).
pub fn diag_imag(s: &[f64]) -> Result<GeneratorMatrix> {
    GeneratorMatrix::diagonal(s.iter().map(|&x| c(0.0, x)).collect(), format!("diag_imag:k={}", s.len()))
}

/// diag(s_j), s_j > 0.
pub fn diag_positive(s: &[f64]) -> Result<GeneratorMatrix> {
    if s.iter().any(|&x| !(x > 0.0)) {
        return Err(invalid("diag_positive needs positive entries"));
    }
    GeneratorMatrix::diagonal(s.iter().map(|&x| c(x, 0.0)).collect(), format!("diag_pos:k={}", s.len()))
}

/// Periodic forward difference (Af)_j = d(f_j - f_{j+1}); circulant with Fourier eigenvectors.
pub fn advection_periodic(d: usize) -> Result<GeneratorMatrix> {
    if d < 2 {
        return Err(invalid("advection needs d >= 2"));
    }
    let df = d as f64;
    let w = |k: usize, j: usize| C64::from_polar(1.0 / df.sqrt(), 2.0 * std::f64::consts::PI * ((j * k) % d) as f64 / df);
    let vecs = DMatrix::from_fn(d, d, |j, k| w(k, j));
    let vals: Vec<C64> = (0..d)
        .map(|k| (c(1.0, 0.0) - C64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / df)) * df)
        .collect();
    let mut g = GeneratorMatrix::from_factors(vecs, vals, format!("advection:d={d}"))?;
    // exact circulant entries
    let mut a = DMatrix::<C64>::zeros(d, d);
    for j in 0..d {
        a[(j, j)] = c(df, 0.0);
        a[(j, (j + 1) % d)] = c(-df, 0.0);
    }
    g.entries = a;
    Ok(g)
}

/// Tridiagonal (-1, 2, -1) times `scale`, with sine eigenvectors.
pub fn laplacian_dirichlet_1d(d: usize, scale: f64) -> Result<GeneratorMatrix> {
    if d < 2 || !(scale > 0.0) {
        return Err(invalid("laplacian needs d >= 2 and positive scale"));
    }
    let h = std::f64::consts::PI / (d as f64 + 1.0);
    let nrm = (2.0 / (d as f64 + 1.0)).sqrt();
    let vecs = DMatrix::from_fn(d, d, |j, k| c(nrm * (h * ((j + 1) * (k + 1)) as f64).sin(), 0.0));
    let vals: Vec<C64> = (1..=d).map(|k| c(scale * (2.0 - 2.0 * (h * k as f64).cos()), 0.0)).collect();
    let mut g = GeneratorMatrix::from_factors(vecs, vals, format!("laplacian:d={d}"))?;
    let mut a = DMatrix::<C64>::zeros(d, d);
    for j in 0..d {
        a[(j, j)] = c(2.0 * scale, 0.0);
        if j + 1 < d {
            a[(j, j + 1)] = c(-scale, 0.0);
            a[(j + 1, j)] = c(-scale, 0.0);
        }
    }
    g.entries = a;
    Ok(g)
}

/// Well-conditioned non-normal diagonalizable matrix with spectrum in the open right half-plane.
pub fn random_diagonalizable<R: Rng>(d: usize, rng: &mut R) -> Result<GeneratorMatrix> {
    let mut vecs = DMatrix::<C64>::identity(d, d);
    for v in vecs.iter_mut() {
        *v += c(rng.gen_range(-0.3..0.3), rng.gen_range(-0.3..0.3));
    }
    let vals = (0..d).map(|_| c(rng.gen_range(0.05..3.0), rng.gen_range(-3.0..3.0))).collect();
    GeneratorMatrix::from_factors(vecs, vals, format!("random:d={d}"))
}

fn param(params: &[(String, String)], key: &str) -> Option<Result<f64>> {
    params
        .iter()
        .find(|(k, _)| k == key)
        .map(|(_, v)| v.parse::<f64>().map_err(|_| invalid(format!("bad value '{v}' for '{key}'"))))
}

/// Parse gallery names: `diag_imag:k=128,min=0.1,max=100`, `diag_pos:k=128,min=1e-2,max=1e2`,
/// `advection:d=256`, `laplacian:d=128[,scale=1]`.
pub fn parse_generator(spec: &str) -> Result<GeneratorMatrix> {
    let (name, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let mut params = Vec::new();
    for kv in rest.split(',').filter(|s| !s.trim().is_empty()) {
        let (k, v) = kv.split_once('=').ok_or_else(|| invalid(format!("expected key=value in '{spec}'")))?;
        params.push((k.trim().to_string(), v.trim().to_string()));
    }
    let get = |k: &str, default: f64| param(&params, k).unwrap_or(Ok(default));
    let count = |k: &str, default: f64| -> Result<usize> {
        let v = get(k, default)?;
        if v < 1.0 || v.fract() != 0.0 || v > 4096.0 {
            return Err(invalid(format!("'{k}' must be a positive integer")));
        }
        Ok(v as usize)
    };
    let mut g = match name.trim() {
        "diag_imag" => {
            let k = count("k", 128.0)?;
            diag_imag(&logspace(get("min", 0.1)?, get("max", 100.0)?, k))?
        }
        "diag_pos" => {
            let k = count("k", 128.0)?;
            diag_positive(&logspace(get("min", 1e-2)?, get("max", 1e2)?, k))?
        }
        "advection" => advection_periodic(count("d", 256.0)?)?,
        "laplacian" => laplacian_dirichlet_1d(count("d", 128.0)?, get("scale", 1.0)?)?,
        other => {
            return Err(invalid(format!(
                "unknown generator '{other}'; available: diag_imag, diag_pos, advection, laplacian"
            )))
        }
    };
    g.label = spec.trim().to_string();
    Ok(g)
}
