//! Deterministic text renderings of serializable results: JSON and a
//! line-oriented `key = value` form. Floats carry 12 significant digits.

use serde::Serialize;
use serde_json::{Map, Number, Value};

use crate::ergodicity::ErgodicityReport;
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::Complex64;

pub const SIGNIFICANT_DIGITS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    KeyValue,
    Json,
}

pub fn round_significant(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    if !x.is_finite() {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().unwrap_or(x)
}

fn round_value(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round_significant(n.as_f64().unwrap_or(0.0));
            Number::from_f64(x).map_or(Value::Null, Value::Number)
        }
        Value::Array(items) => Value::Array(items.into_iter().map(round_value).collect()),
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, v)| (k, round_value(v))).collect()),
        other => other,
    }
}

fn to_value<T: Serialize>(value: &T) -> Result<Value> {
    serde_json::to_value(value)
        .map(round_value)
        .map_err(|e| Error::InvalidParameter(format!("serialization failed: {e}")))
}

/// Row-major complex matrix for output.
pub fn matrix_rows(m: &CMatrix) -> Vec<Vec<Complex64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let v = to_value(value)?;
    serde_json::to_string_pretty(&v)
        .map(|s| s + "\n")
        .map_err(|e| Error::InvalidParameter(format!("serialization failed: {e}")))
}

/// One `path = value` line per scalar, in field order. Arrays index as
/// `key[i]`, nested objects as `key.field`, absent values print `none`.
pub fn to_key_value<T: Serialize>(value: &T) -> Result<String> {
    let v = to_value(value)?;
    let mut out = String::new();
    flatten(&v, String::new(), &mut out);
    Ok(out)
}

pub fn render<T: Serialize>(value: &T, format: Format) -> Result<String> {
    match format {
        Format::Json => to_json(value),
        Format::KeyValue => to_key_value(value),
    }
}

fn flatten(v: &Value, path: String, out: &mut String) {
    let line = |out: &mut String, text: &str| {
        out.push_str(if path.is_empty() { "value" } else { &path });
        out.push_str(" = ");
        out.push_str(text);
        out.push('\n');
    };
    match v {
        Value::Object(map) if !map.is_empty() => flatten_object(map, &path, out),
        Value::Object(_) => line(out, "{}"),
        Value::Array(items) if !items.is_empty() => {
            for (i, item) in items.iter().enumerate() {
                flatten(item, format!("{path}[{i}]"), out);
            }
        }
        Value::Array(_) => line(out, "[]"),
        Value::Null => line(out, "none"),
        Value::Bool(b) => line(out, &b.to_string()),
        Value::Number(n) => line(out, &n.to_string()),
        Value::String(s) => line(out, &s.escape_default().to_string()),
    }
}

fn flatten_object(map: &Map<String, Value>, path: &str, out: &mut String) {
    for (key, value) in map {
        let child = if path.is_empty() {
            key.clone()
        } else {
            format!("{path}.{key}")
        };
        flatten(value, child, out);
    }
}

/// Fails on the first non-finite float of a report; JSON would silently turn
/// it into `null`.
pub fn check_finite(report: &ErgodicityReport) -> Result<()> {
    let mut floats: Vec<(&str, f64)> = Vec::new();
    if let Some(c) = &report.certificate {
        floats.push(("certificate.max_observed", c.max_observed));
    }
    if let Some(p) = &report.fixed_point {
        floats.extend(p.iter().flat_map(|c| [("fixed_point", c.re), ("fixed_point", c.im)]));
    }
    if let Some(r) = report.fixed_point_residual {
        floats.push(("fixed_point_residual", r));
    }
    floats.extend(report.eigenvalues.iter().flat_map(|c| [("eigenvalues", c.re), ("eigenvalues", c.im)]));
    if let Some(r) = &report.retraction {
        floats.extend(r.convergence_trace.iter().map(|s| ("retraction.convergence_trace", s.deviation)));
        floats.extend(r.attempts.iter().map(|a| ("retraction.attempts", a.best_deviation)));
    }
    for t in &report.criterion_trace {
        floats.push(("criterion_trace", t.sup_deviation));
        floats.extend(t.argmax.iter().flat_map(|c| [("criterion_trace", c.re), ("criterion_trace", c.im)]));
    }
    if let Some(dw) = &report.denjoy_wolff {
        floats.extend([("denjoy_wolff.scatter", dw.scatter), ("denjoy_wolff.boundary_gap", dw.boundary_gap)]);
        floats.extend(dw.point.iter().flat_map(|c| [("denjoy_wolff.point", c.re), ("denjoy_wolff.point", c.im)]));
    }
    for w in &report.witnesses {
        floats.extend([("witnesses", w.sup_difference), ("witnesses", w.predicted)]);
    }
    let c = &report.config;
    floats.extend([
        ("config.decay_threshold", c.decay_threshold),
        ("config.nondecay_factor", c.nondecay_factor),
        ("config.monotone_slack", c.monotone_slack),
        ("config.noise_floor", c.noise_floor),
        ("config.crosscheck_radius", c.crosscheck_radius),
        ("config.retraction.cauchy_tolerance", c.retraction.cauchy_tolerance),
        ("config.retraction.grid_radius", c.retraction.grid_radius),
    ]);
    match floats.into_iter().find(|(_, x)| !x.is_finite()) {
        Some((field, x)) => Err(Error::InvalidParameter(format!("non-finite value {x} in report field {field}"))),
        None => Ok(()),
    }
}
