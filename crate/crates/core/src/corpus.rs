//! Lifetime datasets: four builtin reference sets and a plain-text loader.
//!
//! The text format is one decimal value per line. Blank lines and lines
//! starting with `#` are ignored. The builtin files under `data/` use the
//! same format.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An ordered collection of positive observations with a label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    label: String,
    description: String,
    values: Vec<f64>,
}

struct Builtin {
    label: &'static str,
    text: &'static str,
    count: usize,
    /// Exact sum of the printed values in thousandths.
    sum_milli: i64,
}

const BUILTINS: [Builtin; 4] = [
    Builtin {
        label: "ex1",
        text: include_str!("../data/ex1.txt"),
        count: 100,
        sum_milli: 987_700,
    },
    Builtin {
        label: "ex2",
        text: include_str!("../data/ex2.txt"),
        count: 23,
        sum_milli: 1_661_280,
    },
    Builtin {
        label: "ex3",
        text: include_str!("../data/ex3.txt"),
        count: 20,
        sum_milli: 38_000,
    },
    Builtin {
        label: "ex4",
        text: include_str!("../data/ex4.txt"),
        count: 31,
        sum_milli: 955_154,
    },
];

pub const BUILTIN_LABELS: [&str; 4] = ["ex1", "ex2", "ex3", "ex4"];

impl Dataset {
    /// Builds a dataset, rejecting empty input and non-positive values.
    pub fn new(label: impl Into<String>, values: Vec<f64>) -> Result<Self> {
        let label = label.into();
        if values.is_empty() {
            return Err(Error::Data(format!("dataset `{label}` is empty")));
        }
        if let Some((i, v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(**v > 0.0 && v.is_finite()))
        {
            return Err(Error::Data(format!(
                "dataset `{label}` value #{} is not a finite positive number: {v}",
                i + 1
            )));
        }
        Ok(Self {
            label,
            description: String::new(),
            values,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn count(&self) -> usize {
        self.values.len()
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.sum() / self.count() as f64
    }

    /// Serializes in the one-value-per-line format; parsing the result
    /// gives back identical values.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if !self.description.is_empty() {
            let _ = writeln!(out, "# {}", self.description);
        }
        for v in &self.values {
            let _ = writeln!(out, "{v}");
        }
        out
    }

    /// Parses the one-value-per-line format. The first comment line, if
    /// any, becomes the description.
    pub fn parse(label: impl Into<String>, text: &str) -> Result<Self> {
        let mut values = Vec::new();
        let mut description = None;
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                description.get_or_insert_with(|| comment.trim().to_string());
                continue;
            }
            let v: f64 = line.parse().map_err(|_| Error::Parse {
                line: i + 1,
                msg: format!("`{line}` is not a decimal number"),
            })?;
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Data(format!(
                    "line {}: value {v} is not positive",
                    i + 1
                )));
            }
            values.push(v);
        }
        let mut ds = Dataset::new(label, values)?;
        ds.description = description.unwrap_or_default();
        Ok(ds)
    }
}

/// Loads one of the four builtin datasets and verifies its count and
/// exact decimal checksum.
pub fn load_builtin(label: &str) -> Result<Dataset> {
    let b = BUILTINS
        .iter()
        .find(|b| b.label == label)
        .ok_or_else(|| Error::Lookup(label.to_string()))?;
    verify(b.label, b.text, b.count, b.sum_milli)?;
    Dataset::parse(b.label, b.text)
}

fn verify(label: &str, text: &str, count: usize, sum_milli: i64) -> Result<()> {
    let corrupt = |detail: String| Error::Corruption {
        label: label.to_string(),
        detail,
    };
    let mut n = 0;
    let mut total = 0i64;
    for line in text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
    {
        total += decimal_milli(line).ok_or_else(|| corrupt(format!("cannot read `{line}`")))?;
        n += 1;
    }
    if n != count {
        return Err(corrupt(format!("expected {count} values, found {n}")));
    }
    if total != sum_milli {
        return Err(corrupt(format!(
            "checksum {total} != {sum_milli} (thousandths)"
        )));
    }
    Ok(())
}

/// Exact value of a decimal literal with at most three fractional digits,
/// in thousandths.
fn decimal_milli(s: &str) -> Option<i64> {
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if frac.len() > 3 || !frac.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let whole: i64 = int.parse().ok()?;
    let mut frac_val = 0i64;
    for (i, b) in frac.bytes().enumerate() {
        frac_val += i64::from(b - b'0') * 10i64.pow(2 - i as u32);
    }
    Some(whole * 1000 + frac_val)
}

/// Reads a dataset file, labelled by its file stem.
pub fn load_file(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    })?;
    let label = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());
    Dataset::parse(label, &text)
}

/// Resolves `builtin:<label>` or a file path.
pub fn load_source(source: &str) -> Result<Dataset> {
    match source.strip_prefix("builtin:") {
        Some(label) => load_builtin(label),
        None => load_file(source),
    }
}
