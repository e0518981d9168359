//! JSON literal formats shared by the CLI, the Python bindings and serialized
//! outputs.
//!
//! * integer matrix: `[[1,0],[0,-4]]`
//! * complex number: a JSON number or a `[re, im]` pair
//! * complex vector: `[[re,im], ...]` (plain numbers allowed)
//! * complex matrix: rows of complex numbers, or a flat list of `n*n` complex numbers
//! * real scalar: a JSON number or an exact rational string `"p/q"`

use nalgebra::DMatrix;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::linalg::{ComplexSymMatrix, IntSymMatrix, SkewMatrix, C64};

fn bad(what: &str, v: &Value) -> Error {
    Error::InvalidInput(format!("expected {what}, found {v}"))
}

pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("malformed JSON: {e}")))
}

/// Real scalar from a string: decimal, or exact rational `p/q`.
pub fn parse_real_str(s: &str) -> Result<f64> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: i64 = p.trim().parse().map_err(|_| Error::InvalidInput(format!("bad rational '{s}'")))?;
        let q: i64 = q.trim().parse().map_err(|_| Error::InvalidInput(format!("bad rational '{s}'")))?;
        if q == 0 {
            return Err(Error::InvalidInput(format!("zero denominator in '{s}'")));
        }
        return Ok(p as f64 / q as f64);
    }
    let v: f64 = s.parse().map_err(|_| Error::InvalidInput(format!("bad number '{s}'")))?;
    if !v.is_finite() {
        return Err(Error::InvalidInput(format!("non-finite number '{s}'")));
    }
    Ok(v)
}

pub fn parse_real(v: &Value) -> Result<f64> {
    match v {
        Value::Number(n) => n.as_f64().ok_or_else(|| bad("a real number", v)),
        Value::String(s) => parse_real_str(s),
        _ => Err(bad("a real number", v)),
    }
}

pub fn parse_int(v: &Value) -> Result<i64> {
    v.as_i64().ok_or_else(|| bad("an integer", v))
}

pub fn parse_int_vector(v: &Value) -> Result<Vec<i64>> {
    match v {
        Value::Array(a) => a.iter().map(parse_int).collect(),
        Value::Number(_) => Ok(vec![parse_int(v)?]),
        _ => Err(bad("an integer vector", v)),
    }
}

pub fn parse_real_vector(v: &Value) -> Result<Vec<f64>> {
    match v {
        Value::Array(a) => a.iter().map(parse_real).collect(),
        _ => Ok(vec![parse_real(v)?]),
    }
}

pub fn parse_int_matrix(v: &Value) -> Result<IntSymMatrix> {
    let rows = v.as_array().ok_or_else(|| bad("an integer matrix", v))?;
    let rows: Vec<Vec<i64>> = rows.iter().map(parse_int_vector).collect::<Result<_>>()?;
    IntSymMatrix::from_rows(&rows)
}

pub fn parse_complex(v: &Value) -> Result<C64> {
    match v {
        Value::Array(p) if p.len() == 2 => Ok(C64::new(parse_real(&p[0])?, parse_real(&p[1])?)),
        Value::Number(_) | Value::String(_) => Ok(C64::new(parse_real(v)?, 0.0)),
        _ => Err(bad("a complex number", v)),
    }
}

pub fn parse_complex_vector(v: &Value) -> Result<Vec<C64>> {
    let a = v.as_array().ok_or_else(|| bad("a complex vector", v))?;
    a.iter().map(parse_complex).collect()
}

/// Complex matrix, either as rows or as a flat list of `n*n` entries.
pub fn parse_complex_matrix(v: &Value) -> Result<DMatrix<C64>> {
    let a = v.as_array().ok_or_else(|| bad("a complex matrix", v))?;
    let is_row = |x: &Value| x.as_array().is_some_and(|r| r.iter().any(|e| e.is_array()));
    if !a.is_empty() && a.iter().all(is_row) {
        let rows: Vec<Vec<C64>> = a.iter().map(parse_complex_vector).collect::<Result<_>>()?;
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput("complex matrix must be square".into()));
        }
        return Ok(DMatrix::from_fn(n, n, |i, j| rows[i][j]));
    }
    let flat = parse_complex_vector(v)?;
    let n = (flat.len() as f64).sqrt().round() as usize;
    if n == 0 || n * n != flat.len() {
        return Err(Error::InvalidInput(format!("{} entries do not form a square matrix", flat.len())));
    }
    Ok(DMatrix::from_fn(n, n, |i, j| flat[i * n + j]))
}

pub fn parse_complex_sym(v: &Value) -> Result<ComplexSymMatrix> {
    ComplexSymMatrix::new(parse_complex_matrix(v)?)
}

pub fn parse_skew(v: &Value) -> Result<SkewMatrix> {
    let rows = v.as_array().ok_or_else(|| bad("a skew matrix", v))?;
    let rows: Vec<Vec<f64>> = rows.iter().map(parse_real_vector).collect::<Result<_>>()?;
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidInput("skew matrix must be square".into()));
    }
    SkewMatrix::new(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

pub fn complex_json(z: C64) -> Value {
    serde_json::json!([z.re, z.im])
}

pub fn complex_vector_json(v: &[C64]) -> Value {
    Value::Array(v.iter().map(|&z| complex_json(z)).collect())
}

pub fn complex_matrix_json(m: &DMatrix<C64>) -> Value {
    Value::Array((0..m.nrows()).map(|i| Value::Array((0..m.ncols()).map(|j| complex_json(m[(i, j)])).collect())).collect())
}

pub fn int_matrix_json(a: &IntSymMatrix) -> Value {
    serde_json::json!(a.rows())
}
