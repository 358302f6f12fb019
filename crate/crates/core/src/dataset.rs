//! Plain-text datasets: one decimal number per line, `#` starts a comment
//! line, blank lines are skipped. Values may be divided by a threshold so
//! that the data live on the Pareto support `[1, inf)`.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::distributions::Sample;
use crate::error::{GofError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub enum Rescale {
    #[default]
    None,
    /// Divide every value by a fixed positive threshold.
    Threshold(f64),
    /// Divide by the smallest observation, so the minimum maps to 1.
    SampleMinimum,
}

impl Rescale {
    pub fn divisor(&self, values: &[f64]) -> f64 {
        match *self {
            Rescale::None => 1.0,
            Rescale::Threshold(t) => t,
            Rescale::SampleMinimum => values.iter().copied().fold(f64::INFINITY, f64::min),
        }
    }
}

/// Parses dataset text, returning raw values and their line numbers.
pub fn parse_values(text: &str) -> Result<Vec<(usize, f64)>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let v: f64 = trimmed.parse().map_err(|_| GofError::Parse {
            line: line_no,
            message: format!("`{trimmed}` is not a decimal number"),
        })?;
        if !v.is_finite() {
            return Err(GofError::Parse {
                line: line_no,
                message: format!("`{trimmed}` is not finite"),
            });
        }
        out.push((line_no, v));
    }
    if out.is_empty() {
        return Err(GofError::Parse {
            line: 0,
            message: "no observations found".into(),
        });
    }
    Ok(out)
}

/// Parses and rescales a dataset; every rescaled value must be at least 1.
pub fn parse_dataset(text: &str, rescale: Rescale) -> Result<Sample> {
    let raw = parse_values(text)?;
    let values: Vec<f64> = raw.iter().map(|&(_, v)| v).collect();
    let divisor = rescale.divisor(&values);
    if !(divisor > 0.0 && divisor.is_finite()) {
        return Err(GofError::InvalidParameter {
            name: "threshold",
            value: divisor,
            reason: "rescaling divisor must be positive",
        });
    }
    let mut scaled = Vec::with_capacity(raw.len());
    for (line, v) in raw {
        let x = v / divisor;
        if x.is_nan() || x < 1.0 {
            return Err(GofError::Parse {
                line,
                message: if divisor == 1.0 {
                    format!("value {v} is below the Pareto support minimum 1")
                } else {
                    format!("value {v} / {divisor} = {x} is below the Pareto support minimum 1")
                },
            });
        }
        scaled.push(x);
    }
    Sample::new(scaled)
}

pub fn read_dataset(path: &Path, rescale: Rescale) -> std::io::Result<Result<Sample>> {
    Ok(parse_dataset(&std::fs::read_to_string(path)?, rescale))
}

/// Renders values in the dataset format. `{}` on `f64` prints the shortest
/// string that parses back to the same value.
pub fn write_dataset(values: &[f64], comment: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(c) = comment {
        for line in c.lines() {
            writeln!(out, "# {line}").unwrap();
        }
    }
    for v in values {
        writeln!(out, "{v}").unwrap();
    }
    out
}
