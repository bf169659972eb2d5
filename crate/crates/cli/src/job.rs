//! JSON job documents.

use std::fmt;

use indalg::numkit::{Matrix, Tolerances};
use num_complex::Complex64;
use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeTuple, Serializer};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// A complex number written as `[re, im]`; a bare number is read as real.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexDoc(pub Complex64);

impl Serialize for ComplexDoc {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut t = s.serialize_tuple(2)?;
        t.serialize_element(&self.0.re)?;
        t.serialize_element(&self.0.im)?;
        t.end()
    }
}

impl<'de> Deserialize<'de> for ComplexDoc {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = ComplexDoc;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a number or an [re, im] pair")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<ComplexDoc, E> {
                Ok(ComplexDoc(Complex64::new(v, 0.0)))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<ComplexDoc, E> {
                self.visit_f64(v as f64)
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<ComplexDoc, E> {
                self.visit_f64(v as f64)
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<ComplexDoc, A::Error> {
                let re: f64 = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(0, &self))?;
                let im: f64 = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(1, &self))?;
                if seq.next_element::<de::IgnoredAny>()?.is_some() {
                    return Err(de::Error::invalid_length(3, &self));
                }
                Ok(ComplexDoc(Complex64::new(re, im)))
            }
        }
        d.deserialize_any(V)
    }
}

/// A dense complex matrix in row-major nested lists.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixDocument {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<ComplexDoc>>,
}

impl MatrixDocument {
    pub fn from_matrix(m: &Matrix) -> Self {
        MatrixDocument {
            rows: m.nrows(),
            cols: m.ncols(),
            entries: (0..m.nrows())
                .map(|i| (0..m.ncols()).map(|j| ComplexDoc(m[(i, j)])).collect())
                .collect(),
        }
    }

    /// Checks the shape and finiteness; `path` names the document in errors.
    pub fn to_matrix(&self, path: &str) -> Result<Matrix, CliError> {
        if self.rows == 0 || self.cols == 0 {
            return Err(CliError::input(path, "matrix must have at least one row and column"));
        }
        if self.entries.len() != self.rows {
            return Err(CliError::input(
                &format!("{path}.entries"),
                format!("expected {} rows, found {}", self.rows, self.entries.len()),
            ));
        }
        for (i, row) in self.entries.iter().enumerate() {
            if row.len() != self.cols {
                return Err(CliError::input(
                    &format!("{path}.entries[{i}]"),
                    format!("expected {} columns, found {}", self.cols, row.len()),
                ));
            }
            for (j, z) in row.iter().enumerate() {
                if !z.0.re.is_finite() || !z.0.im.is_finite() {
                    return Err(CliError::input(&format!("{path}.entries[{i}][{j}]"), "entry is not finite"));
                }
            }
        }
        Ok(Matrix::from_fn(self.rows, self.cols, |i, j| self.entries[i][j].0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Certify,
    Idempotents,
    Counterexample,
    Schur,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum RepresentationDoc {
    Builtin(BuiltinDoc),
    Explicit(ExplicitDoc),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuiltinDoc {
    pub builtin: String,
    #[serde(default)]
    pub quadrature_nodes: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitDoc {
    pub generators: Vec<MatrixDocument>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceDoc {
    pub rank: Option<f64>,
    pub cluster: Option<f64>,
    pub residual: Option<f64>,
    pub dedup: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptionsDoc {
    pub include_identity: Option<bool>,
    pub max_dim: Option<usize>,
    pub max_order: Option<usize>,
    pub quadrature_nodes: Option<usize>,
    /// Number of quotient terms for the counterexample.
    pub m: Option<usize>,
    /// Number of bisection steps for the counterexample.
    pub depth: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDoc {
    pub atoms: Vec<String>,
    pub masses: Vec<f64>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TailRuleDoc {
    RepeatLast,
    Zero,
    Constant(ComplexDoc),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TailDoc {
    pub table: Vec<ComplexDoc>,
    #[serde(default = "default_rule")]
    pub rule: TailRuleDoc,
}

fn default_rule() -> TailRuleDoc {
    TailRuleDoc::RepeatLast
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Job {
    pub command: Command,
    #[serde(default)]
    pub representation: Option<RepresentationDoc>,
    #[serde(default)]
    pub algebra: Option<Vec<MatrixDocument>>,
    #[serde(default)]
    pub form: Option<MatrixDocument>,
    #[serde(default)]
    pub space: Option<SpaceDoc>,
    #[serde(default)]
    pub functions: Option<Vec<Vec<ComplexDoc>>>,
    #[serde(default)]
    pub tail: Option<TailDoc>,
    #[serde(default)]
    pub tolerances: ToleranceDoc,
    #[serde(default)]
    pub options: OptionsDoc,
}

impl Job {
    pub fn parse(text: &str) -> Result<Job, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            CliError::input(if path == "." { "<document>" } else { &path }, e.into_inner().to_string())
        })
    }

    /// Tolerances from the document with `overrides` applied on top.
    pub fn tolerances(&self, overrides: &ToleranceDoc) -> Result<Tolerances, CliError> {
        let mut tol = Tolerances::default();
        for doc in [&self.tolerances, overrides] {
            tol.rank = doc.rank.unwrap_or(tol.rank);
            tol.cluster = doc.cluster.unwrap_or(tol.cluster);
            tol.residual = doc.residual.unwrap_or(tol.residual);
            tol.dedup = doc.dedup.unwrap_or(tol.dedup);
        }
        tol.validate()
            .map_err(|e| CliError::input("tolerances", e.to_string()))?;
        Ok(tol)
    }
}

/// Parses `--tol` arguments of the form `name=value[,name=value…]`.
pub fn parse_tol_overrides(args: &[String]) -> Result<ToleranceDoc, CliError> {
    let mut doc = ToleranceDoc::default();
    for item in args.iter().flat_map(|a| a.split(',')).filter(|s| !s.is_empty()) {
        let (name, value) = item
            .split_once('=')
            .ok_or_else(|| CliError::input("--tol", format!("expected name=value, got '{item}'")))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| CliError::input("--tol", format!("'{value}' is not a number")))?;
        let slot = match name.trim() {
            "rank" => &mut doc.rank,
            "cluster" => &mut doc.cluster,
            "residual" => &mut doc.residual,
            "dedup" => &mut doc.dedup,
            other => return Err(CliError::input("--tol", format!("unknown tolerance '{other}'"))),
        };
        *slot = Some(value);
    }
    Ok(doc)
}
