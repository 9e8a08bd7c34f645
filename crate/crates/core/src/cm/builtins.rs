//! Builtin completely monotone functions and name parsing.

use super::function::{ClosedForm, CmFunction};
use super::measure::{Atom, Density, PositiveMeasure, Segment};
use crate::error::{invalid, Error, Result};
use crate::numeric::ExtReal;
use crate::special::ln_gamma;
use serde::Deserialize;
use std::collections::BTreeMap;
use std::sync::Arc;

fn fin(v: [f64; 5]) -> [ExtReal; 5] {
    v.map(ExtReal::Finite)
}

fn atom(location: f64, weight: f64) -> Atom {
    Atom { location, weight }
}

fn seg(start: f64, end: f64, poly: Vec<f64>, rate: f64) -> Segment {
    Segment { start, end, density: Density::PolyExp { poly, rate } }
}

/// e^{-z}, ν = δ₁.
pub fn exp() -> CmFunction {
    let m = PositiveMeasure::new(vec![atom(1.0, 1.0)], vec![]).unwrap();
    CmFunction::from_measure("exp", m, Some(ClosedForm::Exp), Some(fin([1.0; 5]))).unwrap()
}

/// 1/(1+z), ν = e^{-s} ds.
pub fn euler() -> CmFunction {
    let m = PositiveMeasure::new(vec![], vec![seg(0.0, f64::INFINITY, vec![1.0], 1.0)]).unwrap();
    let mom = fin([1.0, 1.0, 2.0, 6.0, 24.0]);
    CmFunction::from_measure("euler", m, Some(ClosedForm::Euler), Some(mom)).unwrap()
}

/// (1 - e^{-2z})/(2z), ν = ½ on [0, 2].
pub fn spline() -> CmFunction {
    let m = PositiveMeasure::new(vec![], vec![seg(0.0, 2.0, vec![0.5], 0.0)]).unwrap();
    let mom = fin([1.0, 1.0, 4.0 / 3.0, 2.0, 3.2]);
    CmFunction::from_measure("spline", m, Some(ClosedForm::Spline), Some(mom)).unwrap()
}

/// 1 - t + t e^{-z/t}, t ∈ (0, 1].
pub fn kendall(t: f64) -> Result<CmFunction> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(invalid(format!("kendall needs t in (0, 1], got {t}")));
    }
    let mut atoms = vec![atom(1.0 / t, t)];
    if t < 1.0 {
        atoms.push(atom(0.0, 1.0 - t));
    }
    let m = PositiveMeasure::new(atoms, vec![])?;
    let mom = fin([1.0, 1.0, 1.0 / t, 1.0 / (t * t), 1.0 / (t * t * t)]);
    CmFunction::from_measure(format!("kendall:t={t}"), m, Some(ClosedForm::Kendall { t }), Some(mom))
}

/// exp(-tz/(t+z)), t > 0.
pub fn yosida(t: f64) -> Result<CmFunction> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(invalid(format!("yosida needs t > 0, got {t}")));
    }
    // density e^{-t} Σ_k t^{2k}/(k!(k-1)!) s^{k-1} e^{-ts}; term k carries Poisson(t) mass
    let mut poly = Vec::new();
    let mut tail = 1.0 - (-t).exp();
    let mut k = 1u32;
    while tail > 1e-17 && k < 2000 {
        let kf = k as f64;
        let ln_c = -t + 2.0 * kf * t.ln() - ln_gamma(kf + 1.0) - ln_gamma(kf);
        poly.push(ln_c.exp());
        tail -= (-t + kf * t.ln() - ln_gamma(kf + 1.0)).exp();
        k += 1;
    }
    let m = PositiveMeasure::new(
        vec![atom(0.0, (-t).exp())],
        vec![seg(0.0, f64::INFINITY, poly, t)],
    )?;
    let mom = fin([
        1.0,
        1.0,
        1.0 + 2.0 / t,
        1.0 + 6.0 / t + 6.0 / (t * t),
        1.0 + 12.0 / t + 36.0 / (t * t) + 24.0 / (t * t * t),
    ]);
    CmFunction::from_measure(format!("yosida:t={t}"), m, Some(ClosedForm::Yosida { t }), Some(mom))
}

/// exp(e^{-z} - 1), Poisson(1) atoms.
pub fn hille() -> CmFunction {
    let mut atoms = Vec::new();
    let mut w = (-1.0f64).exp();
    for k in 0..30 {
        if k > 0 {
            w /= k as f64;
        }
        atoms.push(atom(k as f64, w));
    }
    let m = PositiveMeasure::new(atoms, vec![]).unwrap();
    let mom = fin([1.0, 1.0, 2.0, 5.0, 15.0]);
    CmFunction::from_measure("hille", m, Some(ClosedForm::Hille), Some(mom)).unwrap()
}

/// Σ a_k (t/(t+z))^k with t = Σ k a_k.
pub fn chung(a: &[f64]) -> Result<CmFunction> {
    if a.is_empty() || a.iter().any(|&x| !(x >= 0.0 && x.is_finite())) {
        return Err(invalid("chung weights must be nonnegative"));
    }
    let total: f64 = a.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(invalid(format!("chung weights sum to {total}, expected 1")));
    }
    let t: f64 = a.iter().enumerate().map(|(k, &x)| k as f64 * x).sum();
    if t <= 0.0 {
        return Err(invalid("chung needs mass away from index 0"));
    }
    let mut poly = vec![0.0; a.len().saturating_sub(1)];
    for (k, &ak) in a.iter().enumerate().skip(1) {
        // Gamma(k, rate t) density t^k s^{k-1}/(k-1)!
        let kf = k as f64;
        poly[k - 1] += ak * (kf * t.ln() - ln_gamma(kf)).exp();
    }
    let atoms = if a[0] > 0.0 { vec![atom(0.0, a[0])] } else { vec![] };
    let m = PositiveMeasure::new(atoms, vec![seg(0.0, f64::INFINITY, poly, t)])?;
    let name = format!(
        "chung:a={}",
        a.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("/")
    );
    CmFunction::from_measure(name, m, Some(ClosedForm::Chung { t, a: a.to_vec() }), None)
}

/// (1-γ)δ₀ + γ(γ+1)(1+s)^{-2-γ} ds: in B1 with infinite second moment.
pub fn frac_tail(gamma: f64) -> Result<CmFunction> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(invalid(format!("frac_tail needs gamma in (0, 1), got {gamma}")));
    }
    let m = PositiveMeasure::new(
        vec![atom(0.0, 1.0 - gamma)],
        vec![Segment {
            start: 0.0,
            end: f64::INFINITY,
            density: Density::PowerLaw { weight: gamma * (gamma + 1.0), shift: 1.0, power: 2.0 + gamma },
        }],
    )?;
    let mom = [
        ExtReal::Finite(1.0),
        ExtReal::Finite(1.0),
        ExtReal::Infinite,
        ExtReal::Infinite,
        ExtReal::Infinite,
    ];
    CmFunction::from_measure(format!("frac_tail:gamma={gamma}"), m, None, Some(mom))
}

#[derive(Deserialize)]
struct MeasureFile {
    #[serde(default)]
    atoms: Vec<[f64; 2]>,
    #[serde(default)]
    segments: Vec<SegmentFile>,
}

#[derive(Deserialize)]
struct SegmentFile {
    a: f64,
    #[serde(default)]
    b: Option<serde_json::Value>,
    poly: Vec<f64>,
    #[serde(default)]
    exp_rate: f64,
}

/// Parse a measure from JSON: `{"atoms": [[s, w]], "segments": [{"a", "b", "poly", "exp_rate"}]}`.
/// `b` may be a number, `null` or `"inf"`.
pub fn measure_from_json(text: &str) -> Result<PositiveMeasure> {
    let f: MeasureFile = serde_json::from_str(text)?;
    let atoms = f.atoms.iter().map(|p| atom(p[0], p[1])).collect();
    let mut segs = Vec::new();
    for s in f.segments {
        let end = match s.b {
            None | Some(serde_json::Value::Null) => f64::INFINITY,
            Some(serde_json::Value::Number(n)) => n.as_f64().unwrap_or(f64::NAN),
            Some(serde_json::Value::String(x)) if x.starts_with("inf") => f64::INFINITY,
            Some(v) => return Err(Error::InvalidMeasure(format!("bad segment end {v}"))),
        };
        segs.push(seg(s.a, end, s.poly, s.exp_rate));
    }
    PositiveMeasure::new(atoms, segs)
}

fn split_spec(spec: &str) -> Result<(&str, BTreeMap<String, String>)> {
    let (name, rest) = match spec.split_once(':') {
        Some((n, r)) => (n.trim(), r),
        None => (spec.trim(), ""),
    };
    let mut params = BTreeMap::new();
    if name == "measure" {
        params.insert("path".to_string(), rest.to_string());
        return Ok((name, params));
    }
    for kv in rest.split(',').filter(|s| !s.trim().is_empty()) {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| invalid(format!("expected key=value in '{spec}'")))?;
        params.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok((name, params))
}

fn num(params: &BTreeMap<String, String>, key: &str) -> Result<f64> {
    let v = params.get(key).ok_or_else(|| invalid(format!("missing parameter '{key}'")))?;
    v.parse().map_err(|_| invalid(format!("bad number '{v}' for '{key}'")))
}

/// Parse names like `euler`, `kendall:t=0.5`, `chung:a=0.25/0.5/0.25`,
/// `frac_tail:gamma=0.5`, `measure:path.json`.
pub fn parse_function(spec: &str) -> Result<CmFunction> {
    let (name, p) = split_spec(spec)?;
    match name {
        "exp" => Ok(exp()),
        "euler" => Ok(euler()),
        "spline" => Ok(spline()),
        "hille" => Ok(hille()),
        "kendall" => kendall(num(&p, "t")?),
        "yosida" => yosida(num(&p, "t")?),
        "frac_tail" => frac_tail(num(&p, "gamma")?),
        "chung" => {
            let raw = p.get("a").ok_or_else(|| invalid("chung needs a=a0/a1/..."))?;
            let a: Vec<f64> = raw
                .split('/')
                .map(|x| x.trim().parse().map_err(|_| invalid(format!("bad weight '{x}'"))))
                .collect::<Result<_>>()?;
            chung(&a)
        }
        "measure" => {
            let path = &p["path"];
            let text = std::fs::read_to_string(path)?;
            let m = measure_from_json(&text)?;
            CmFunction::from_measure(format!("measure:{path}"), m, None, None)
        }
        other => Err(invalid(format!("unknown function '{other}'"))),
    }
}

/// A scheme: either one fixed function or a family g_t indexed by time.
#[derive(Clone, Debug)]
pub enum Family {
    Fixed(Arc<CmFunction>),
    Kendall,
    Yosida,
}

impl Family {
    pub fn parse(spec: &str) -> Result<Self> {
        match spec.trim() {
            "kendall" => Ok(Family::Kendall),
            "yosida" => Ok(Family::Yosida),
            s => Ok(Family::Fixed(Arc::new(parse_function(s)?))),
        }
    }

    pub fn at(&self, t: f64) -> Result<CmFunction> {
        match self {
            Family::Fixed(g) => Ok((**g).clone()),
            Family::Kendall => kendall(t),
            Family::Yosida => yosida(t),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Family::Fixed(g) => g.name().to_string(),
            Family::Kendall => "kendall".into(),
            Family::Yosida => "yosida".into(),
        }
    }

    /// Kendall is only defined for t ∈ (0, 1].
    pub fn admits(&self, t: f64) -> bool {
        match self {
            Family::Kendall => t > 0.0 && t <= 1.0,
            _ => t > 0.0,
        }
    }
}
