use std::fmt::Write;

use indalg::numkit::{Matrix, Vector};
use num_complex::Complex64;
use serde_json::{json, Map, Value};

use crate::job::MatrixDocument;

pub fn complex(z: Complex64) -> Value {
    json!([z.re, z.im])
}

pub fn complexes(zs: &[Complex64]) -> Value {
    Value::Array(zs.iter().map(|z| complex(*z)).collect())
}

pub fn vector(v: &Vector) -> Value {
    complexes(v.as_slice())
}

pub fn matrix(m: &Matrix) -> Value {
    serde_json::to_value(MatrixDocument::from_matrix(m)).expect("matrix documents always serialize")
}

pub fn metrics(items: &[(&'static str, f64)]) -> Value {
    let mut map = Map::new();
    for (k, v) in items {
        map.insert((*k).to_string(), json!(v));
    }
    Value::Object(map)
}

/// Ten decimals at most, trailing zeros dropped.
fn short(x: f64) -> String {
    let s = format!("{x:.10}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    match s {
        "-0" | "" => "0".to_string(),
        s => s.to_string(),
    }
}

/// `a+bi` rounded for display.
pub fn fmt_complex(z: Complex64) -> String {
    let (re, im) = (short(z.re), short(z.im));
    match (re == "0", im == "0") {
        (_, true) => re,
        (true, false) => format!("{im}i"),
        (false, false) => match im.strip_prefix('-') {
            Some(abs) => format!("{re}-{abs}i"),
            None => format!("{re}+{im}i"),
        },
    }
}

pub fn fmt_complexes(zs: &[Complex64]) -> String {
    let parts: Vec<String> = zs.iter().map(|z| fmt_complex(*z)).collect();
    format!("({})", parts.join(", "))
}

pub fn fmt_matrix(m: &Matrix, indent: &str) -> String {
    let mut out = String::new();
    for i in 0..m.nrows() {
        let row: Vec<Complex64> = (0..m.ncols()).map(|j| m[(i, j)]).collect();
        let _ = writeln!(out, "{indent}{}", fmt_complexes(&row));
    }
    out
}

pub fn fmt_metrics(items: &[(&'static str, f64)]) -> String {
    items
        .iter()
        .map(|(k, v)| {
            if v.fract() == 0.0 && v.abs() < 1e6 {
                format!("{k}={v}")
            } else {
                format!("{k}={v:.3e}")
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}
