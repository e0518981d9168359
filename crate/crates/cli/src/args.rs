//! Flag value parsers. Matrices and vectors use the JSON literal formats of
//! `nctheta_core::io`; integer and rational lists may also be comma-separated.

use nctheta_core::error::{Error, Result};
use nctheta_core::io;
use nctheta_core::linalg::{IntSymMatrix, SkewMatrix, C64};
use nctheta_core::presets;
use serde_json::Value;

/// A label: an integer (one-dimensional) or a symmetric integer matrix.
pub fn label(text: &str) -> Result<IntSymMatrix> {
    let v = io::parse_json(text)?;
    label_value(&v)
}

fn label_value(v: &Value) -> Result<IntSymMatrix> {
    match v {
        Value::Number(_) => Ok(IntSymMatrix::diag(&[io::parse_int(v)?])),
        _ => io::parse_int_matrix(v),
    }
}

/// A list of labels: `0,1,3`, `[0,1,3]` or a JSON list of matrices.
pub fn labels(text: &str) -> Result<Vec<IntSymMatrix>> {
    match serde_json::from_str::<Value>(text) {
        Ok(Value::Array(items)) => items.iter().map(label_value).collect(),
        Ok(v @ Value::Number(_)) => Ok(vec![label_value(&v)?]),
        _ => text
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<i64>()
                    .map(|v| IntSymMatrix::diag(&[v]))
                    .map_err(|_| Error::InvalidInput(format!("bad label list '{text}'")))
            })
            .collect(),
    }
}

/// Integer vector: `[0,1]`, `0,1` or a single integer.
pub fn int_vector(text: &str) -> Result<Vec<i64>> {
    match serde_json::from_str::<Value>(text) {
        Ok(v) => io::parse_int_vector(&v),
        Err(_) => text
            .split(',')
            .map(|s| s.trim().parse::<i64>().map_err(|_| Error::InvalidInput(format!("bad integer vector '{text}'"))))
            .collect(),
    }
}

/// Real vector whose entries may be exact rationals: `[0,"1/2"]` or `0,1/2`.
pub fn real_vector(text: &str) -> Result<Vec<f64>> {
    match serde_json::from_str::<Value>(text) {
        Ok(v) => io::parse_real_vector(&v),
        Err(_) => text.split(',').map(io::parse_real_str).collect(),
    }
}

pub fn complex_vector(text: &str) -> Result<Vec<C64>> {
    io::parse_complex_vector(&io::parse_json(text)?)
}

/// Noncommutativity from `--theta12` (two-dimensional) or `--theta` (full skew matrix).
pub fn theta(n: usize, theta12: Option<&str>, full: Option<&str>) -> Result<SkewMatrix> {
    match (theta12, full) {
        (Some(_), Some(_)) => Err(Error::InvalidInput("give either --theta12 or --theta, not both".into())),
        (Some(t), None) => {
            let t = io::parse_real_str(t)?;
            if n == 2 {
                Ok(SkewMatrix::from_theta12(t))
            } else if t == 0.0 {
                Ok(SkewMatrix::zero(n))
            } else {
                Err(Error::InvalidInput(format!("--theta12 needs n = 2, labels have n = {n}")))
            }
        }
        (None, Some(m)) => {
            let s = io::parse_skew(&io::parse_json(m)?)?;
            if s.dim() != n {
                return Err(Error::DimensionMismatch { expected: n, found: s.dim() });
            }
            Ok(s)
        }
        (None, None) => Ok(SkewMatrix::zero(n)),
    }
}

/// Labels from `--preset` or `--A`, checked against an optional `--n`.
pub fn label_list(preset: Option<&str>, list: Option<&str>, n: Option<usize>) -> Result<Vec<IntSymMatrix>> {
    let labels = match (preset, list) {
        (Some(_), Some(_)) => return Err(Error::InvalidInput("give either --preset or --A, not both".into())),
        (Some(p), None) => presets::labels(p).ok_or_else(|| {
            Error::InvalidInput(format!("unknown preset '{p}' (known: {})", presets::PRESET_NAMES.join(", ")))
        })?,
        (None, Some(a)) => labels(a)?,
        (None, None) => return Err(Error::InvalidInput("labels required: --preset or --A".into())),
    };
    let dim = labels.first().map(IntSymMatrix::dim).unwrap_or(0);
    if let Some(bad) = labels.iter().find(|l| l.dim() != dim) {
        return Err(Error::DimensionMismatch { expected: dim, found: bad.dim() });
    }
    if let Some(n) = n {
        if n != dim {
            return Err(Error::DimensionMismatch { expected: n, found: dim });
        }
    }
    Ok(labels)
}

pub fn exactly_three(labels: Vec<IntSymMatrix>) -> Result<[IntSymMatrix; 3]> {
    let count = labels.len();
    labels.try_into().map_err(|_| Error::InvalidInput(format!("expected 3 labels, found {count}")))
}
