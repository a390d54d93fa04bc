//! The JSON datum file format (schema version 1).
//!
//! ```json
//! {"v": 1, "p": 2, "rank": 1, "scalar_ring": "p-local",
//!  "weyl_generators": [["-1"]],
//!  "coroots": [{"class_rep": ["-1"], "coroot": ["1"]}]}
//! ```
//! Matrices are row-major lists of scalar strings, either flat or nested by
//! rows. Scalars are `a/b`, or `a/b+c/d*w` in an extension ring.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::exact_linear::{parse_scalar, Extension, Matrix, Scalar, Vector};
use crate::root_datum::RootDatum;

pub const SCHEMA_VERSION: u64 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorootEntry {
    pub class_rep: Value,
    pub coroot: Vec<Value>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatumFile {
    pub v: u64,
    pub p: u64,
    pub rank: usize,
    pub scalar_ring: String,
    pub weyl_generators: Vec<Value>,
    pub coroots: Vec<CorootEntry>,
}

fn scalar_value(x: &Scalar) -> Value {
    Value::String(x.to_string())
}

fn matrix_value(m: &Matrix) -> Value {
    Value::Array(m.entries().iter().map(scalar_value).collect())
}

fn parse_entry(v: &Value, ext: Option<Extension>) -> Result<Scalar> {
    match v {
        Value::String(s) => parse_scalar(s, ext),
        Value::Number(n) => parse_scalar(&n.to_string(), ext),
        _ => Err(Error::Parse(format!("expected a scalar string, got {v}"))),
    }
}

fn parse_matrix(v: &Value, n: usize, ext: Option<Extension>) -> Result<Matrix> {
    let Value::Array(items) = v else {
        return Err(Error::Parse("a matrix must be a JSON array".into()));
    };
    let flat: Vec<&Value> = if items.iter().all(|x| x.is_array()) {
        items.iter().flat_map(|r| r.as_array().expect("checked").iter()).collect()
    } else {
        items.iter().collect()
    };
    if flat.len() != n * n {
        return Err(Error::Parse(format!("matrix has {} entries, expected {}", flat.len(), n * n)));
    }
    let entries: Vec<Scalar> = flat.into_iter().map(|x| parse_entry(x, ext)).collect::<Result<_>>()?;
    let rows = entries.chunks(n.max(1)).map(|c| c.to_vec()).collect();
    Ok(if n == 0 { Matrix::zeros(0, 0) } else { Matrix::from_rows(rows, n) })
}

impl DatumFile {
    pub fn from_datum(d: &RootDatum) -> DatumFile {
        DatumFile {
            v: SCHEMA_VERSION,
            p: d.p(),
            rank: d.rank(),
            scalar_ring: d.extension().map(|e| e.ring_label()).unwrap_or_else(|| "p-local".into()),
            weyl_generators: d.weyl().generators().iter().map(matrix_value).collect(),
            coroots: d
                .class_coroots()
                .iter()
                .map(|(m, b)| CorootEntry { class_rep: matrix_value(m), coroot: b.iter().map(scalar_value).collect() })
                .collect(),
        }
    }

    pub fn to_datum(&self) -> Result<RootDatum> {
        if self.v != SCHEMA_VERSION {
            return Err(Error::Parse(format!("unsupported schema version {}", self.v)));
        }
        let ext = match self.scalar_ring.as_str() {
            "p-local" => None,
            label => Some(
                Extension::from_ring_label(label)
                    .ok_or_else(|| Error::Parse(format!("unknown scalar ring '{label}'")))?
                    .checked()?,
            ),
        };
        if let Some(e) = ext {
            if e.prime() != self.p {
                return Err(Error::Domain(format!("scalar ring {} does not live over p = {}", self.scalar_ring, self.p)));
            }
        }
        let n = self.rank;
        let gens: Vec<Matrix> =
            self.weyl_generators.iter().map(|g| parse_matrix(g, n, ext)).collect::<Result<_>>()?;
        let mut assignments = Vec::new();
        for c in &self.coroots {
            let m = parse_matrix(&c.class_rep, n, ext)?;
            let b: Vector = c.coroot.iter().map(|x| parse_entry(x, ext)).collect::<Result<_>>()?;
            if b.len() != n {
                return Err(Error::Parse(format!("coroot has {} coordinates, expected {n}", b.len())));
            }
            assignments.push((m, b));
        }
        RootDatum::new(self.p, n, ext, gens, assignments)
    }

    pub fn parse(text: &str) -> Result<DatumFile> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("datum file: {e}")))
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

pub fn read_datum(text: &str) -> Result<RootDatum> {
    DatumFile::parse(text)?.to_datum()
}

pub fn write_datum(d: &RootDatum) -> String {
    DatumFile::from_datum(d).to_json_string()
}
