//! Spectra of single chain specs and of one-parameter sweeps.

use std::f64::consts::TAU;
use std::io::Write;

use bqism_core::chain::{spectrum, SpectrumResult};
use bqism_core::Complex64;
use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, AppResult};
use crate::format::{pair, ChainSpecJson, Pair, ParamKind};

/// A spectrum together with the spec that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumOutput {
    pub spec: ChainSpecJson,
    /// Couplings actually used, after `X`/`Y` substitution.
    pub resolved: Resolved,
    pub dim: usize,
    pub eigenvalues: Vec<Pair>,
    pub hermiticity_defect: f64,
    pub commutation_defect: Option<f64>,
    pub hermitian: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Resolved {
    pub a: Option<Pair>,
    pub b: Option<Pair>,
    pub c: Pair,
}

fn resolved(spec: &ChainSpecJson) -> AppResult<Resolved> {
    use bqism_core::reflection::BoundaryChoice;
    let a = match spec.left_choice()? {
        BoundaryChoice::Minus(p) => Some(pair(p.a)),
        _ => None,
    };
    let b = match spec.right_choice()? {
        BoundaryChoice::Plus(p) => Some(pair(p.b())),
        _ => None,
    };
    Ok(Resolved {
        a,
        b,
        c: spec.c.unwrap_or([0.0, 1.0]),
    })
}

pub fn compute(spec: &ChainSpecJson, n_max: usize) -> AppResult<SpectrumOutput> {
    let chain = spec.resolve(n_max)?;
    let SpectrumResult {
        eigenvalues,
        hermiticity_defect,
        commutation_defect,
        hermitian,
    } = spectrum(&chain)?;
    Ok(SpectrumOutput {
        spec: spec.clone(),
        resolved: resolved(spec)?,
        dim: chain.dim(),
        eigenvalues: eigenvalues.into_iter().map(pair).collect(),
        hermiticity_defect,
        commutation_defect,
        hermitian,
    })
}

impl SpectrumOutput {
    pub fn to_json(&self) -> AppResult<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    /// One row per eigenvalue; the defects and the echoed spec repeat on
    /// every row so the file stays rectangular.
    pub fn write_csv<W: Write>(&self, out: W) -> AppResult<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "index",
            "re",
            "im",
            "hermiticity_defect",
            "commutation_defect",
            "spec",
        ])?;
        let spec = serde_json::to_string(&self.spec)?;
        let comm = self
            .commutation_defect
            .map(|v| v.to_string())
            .unwrap_or_default();
        for (i, [re, im]) in self.eigenvalues.iter().enumerate() {
            w.write_record([
                i.to_string(),
                re.to_string(),
                im.to_string(),
                self.hermiticity_defect.to_string(),
                comm.clone(),
                spec.clone(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
pub enum Axis {
    #[value(name = "X")]
    #[serde(rename = "X")]
    X,
    #[value(name = "Y")]
    #[serde(rename = "Y")]
    Y,
    #[value(name = "a")]
    #[serde(rename = "a")]
    A,
    #[value(name = "b")]
    #[serde(rename = "b")]
    B,
}

/// Parameter path: a straight segment `from → to` (endpoints included), or
/// a circle of `radius` around `center` starting at angle 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SweepPath {
    Line { from: Complex64, to: Complex64 },
    Circle { center: Complex64, radius: f64 },
}

impl SweepPath {
    pub fn points(&self, steps: usize) -> AppResult<Vec<Complex64>> {
        if steps == 0 {
            return invalid("sweep needs at least one step");
        }
        Ok(match *self {
            Self::Line { from, to } => (0..steps)
                .map(|k| {
                    let t = if steps == 1 {
                        0.0
                    } else {
                        k as f64 / (steps - 1) as f64
                    };
                    from + (to - from) * t
                })
                .collect(),
            Self::Circle { center, radius } => (0..steps)
                .map(|k| center + Complex64::from_polar(radius, TAU * k as f64 / steps as f64))
                .collect(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub step: usize,
    pub value: Pair,
    pub eigenvalues: Vec<Pair>,
    pub hermiticity_defect: Option<f64>,
    /// `None` for a good row, otherwise why the spec could not be evaluated.
    pub flag: Option<String>,
}

fn with_value(base: &ChainSpecJson, axis: Axis, v: Complex64) -> AppResult<ChainSpecJson> {
    let mut spec = base.clone();
    let real = |name: &str| {
        if v.im != 0.0 {
            return invalid(format!("axis {name} is real; the path left the real line"));
        }
        Ok(v.re)
    };
    match axis {
        Axis::X => {
            if spec.left.kind != ParamKind::Minus {
                return invalid("axis X needs a K- left boundary");
            }
            spec.left.a = None;
            spec.x = Some(real("X")?);
        }
        Axis::Y => {
            if spec.right.kind != ParamKind::Plus {
                return invalid("axis Y needs a K+ right boundary");
            }
            spec.right.b = None;
            spec.y = Some(real("Y")?);
        }
        Axis::A => {
            if spec.left.kind != ParamKind::Minus {
                return invalid("axis a needs a K- left boundary");
            }
            spec.x = None;
            spec.left.a = Some(pair(v));
        }
        Axis::B => {
            if spec.right.kind != ParamKind::Plus {
                return invalid("axis b needs a K+ right boundary");
            }
            spec.y = None;
            spec.right.b = Some(pair(v));
        }
    }
    Ok(spec)
}

/// Spectra along the path. Structural problems with the base spec are
/// errors; points where the chain cannot be built (vanishing coupling,
/// vanishing trace, zero `X`) become flagged rows.
pub fn sweep(
    base: &ChainSpecJson,
    axis: Axis,
    path: SweepPath,
    steps: usize,
    n_max: usize,
) -> AppResult<Vec<SweepRow>> {
    if base.n == 0 || base.n > n_max {
        return invalid(format!("N = {} outside 1..={n_max}", base.n));
    }
    let points = path.points(steps)?;
    let mut rows = Vec::with_capacity(points.len());
    for (step, v) in points.into_iter().enumerate() {
        let spec = with_value(base, axis, v)?;
        let row = match compute(&spec, n_max) {
            Ok(out) => SweepRow {
                step,
                value: pair(v),
                eigenvalues: out.eigenvalues,
                hermiticity_defect: Some(out.hermiticity_defect),
                flag: None,
            },
            Err(crate::error::AppError::Core(e)) => SweepRow {
                step,
                value: pair(v),
                eigenvalues: Vec::new(),
                hermiticity_defect: None,
                flag: Some(e.to_string()),
            },
            Err(e) => return Err(e),
        };
        rows.push(row);
    }
    Ok(rows)
}

pub fn sweep_csv<W: Write>(rows: &[SweepRow], out: W) -> AppResult<()> {
    let width = rows.iter().map(|r| r.eigenvalues.len()).max().unwrap_or(0);
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> = ["step", "value_re", "value_im", "hermiticity_defect", "flag"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    for k in 0..width {
        header.push(format!("ev{k}_re"));
        header.push(format!("ev{k}_im"));
    }
    w.write_record(&header)?;
    for r in rows {
        let mut rec = vec![
            r.step.to_string(),
            r.value[0].to_string(),
            r.value[1].to_string(),
            r.hermiticity_defect
                .map(|d| d.to_string())
                .unwrap_or_default(),
            r.flag.clone().unwrap_or_default(),
        ];
        for k in 0..width {
            match r.eigenvalues.get(k) {
                Some([re, im]) => {
                    rec.push(re.to_string());
                    rec.push(im.to_string());
                }
                None => {
                    rec.push(String::new());
                    rec.push(String::new());
                }
            }
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Parses `re` or `re,im`.
pub fn parse_complex(text: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let num = |s: &str| s.parse::<f64>().map_err(|e| format!("{s:?}: {e}"));
    let z = match parts.as_slice() {
        [re] => Complex64::new(num(re)?, 0.0),
        [re, im] => Complex64::new(num(re)?, num(im)?),
        _ => return Err(format!("expected `re` or `re,im`, got {text:?}")),
    };
    if !z.is_finite() {
        return Err("value must be finite".into());
    }
    Ok(z)
}
