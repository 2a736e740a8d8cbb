use std::collections::BTreeMap;
use std::io::Write;

use bqism_core::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::AppResult;
use crate::format::pair;

/// One named input of a sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InputValue {
    Complex([f64; 2]),
    Real(f64),
    Label(String),
}

impl From<Complex64> for InputValue {
    fn from(z: Complex64) -> Self {
        Self::Complex(pair(z))
    }
}

impl From<f64> for InputValue {
    fn from(x: f64) -> Self {
        Self::Real(x)
    }
}

impl From<&str> for InputValue {
    fn from(s: &str) -> Self {
        Self::Label(s.to_owned())
    }
}

impl From<String> for InputValue {
    fn from(s: String) -> Self {
        Self::Label(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub inputs: BTreeMap<String, InputValue>,
    pub residual: f64,
}

impl Sample {
    pub fn new<const K: usize>(inputs: [(&str, InputValue); K], residual: f64) -> Self {
        Self {
            inputs: inputs.into_iter().map(|(k, v)| (k.to_owned(), v)).collect(),
            residual,
        }
    }
}

/// Outcome of one verification run. `pass` is `None` for report-only
/// searches, where no tolerance is asserted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub identity_name: String,
    pub samples: Vec<Sample>,
    pub tolerance: f64,
    pub pass: Option<bool>,
    pub max_residual: f64,
    pub min_residual: f64,
    pub seed: u64,
    pub generator: String,
    pub wall_time: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl ResidualReport {
    /// Judged report: passes iff every residual is finite and at most
    /// `tolerance`.
    pub fn judged(name: &str, samples: Vec<Sample>, tolerance: f64, seed: u64) -> Self {
        let mut r = Self::report_only(name, samples, tolerance, seed);
        let ok = r.samples.iter().all(|s| s.residual <= tolerance);
        r.pass = Some(ok && !r.samples.is_empty());
        r
    }

    pub fn report_only(name: &str, samples: Vec<Sample>, tolerance: f64, seed: u64) -> Self {
        let max = samples
            .iter()
            .map(|s| s.residual)
            .fold(f64::NEG_INFINITY, nan_max);
        let min = samples
            .iter()
            .map(|s| s.residual)
            .fold(f64::INFINITY, nan_min);
        Self {
            identity_name: name.to_owned(),
            samples,
            tolerance,
            pass: None,
            max_residual: max,
            min_residual: min,
            seed,
            generator: crate::sampling::GENERATOR.to_owned(),
            wall_time: 0.0,
            notes: Vec::new(),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn to_json(&self) -> AppResult<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    /// One row per sample: index, residual, then every input (complex inputs
    /// as `name_re`, `name_im`).
    pub fn write_csv<W: Write>(&self, out: W) -> AppResult<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["index".to_owned(), "residual".to_owned()];
        if let Some(first) = self.samples.first() {
            for (k, v) in &first.inputs {
                match v {
                    InputValue::Complex(_) => {
                        header.push(format!("{k}_re"));
                        header.push(format!("{k}_im"));
                    }
                    _ => header.push(k.clone()),
                }
            }
        }
        w.write_record(&header)?;
        for (i, s) in self.samples.iter().enumerate() {
            let mut row = vec![i.to_string(), s.residual.to_string()];
            for v in s.inputs.values() {
                match v {
                    InputValue::Complex([re, im]) => {
                        row.push(re.to_string());
                        row.push(im.to_string());
                    }
                    InputValue::Real(x) => row.push(x.to_string()),
                    InputValue::Label(l) => row.push(l.clone()),
                }
            }
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }
}

// NaN residuals must surface in max/min rather than vanish.
fn nan_max(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

fn nan_min(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.min(b)
    }
}
