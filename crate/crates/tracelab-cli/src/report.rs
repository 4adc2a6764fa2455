//! The report document. Keys are sorted and nothing depends on timing or
//! worker count unless `--timings` asks for wall-clock figures.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;
use tracelab::chains::Betti;
use tracelab::cyc::Windowed;
use tracelab::{Error, SparseMatrix};

use crate::input::SCHEMA_VERSION;

#[derive(Serialize, Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub degree: i64,
    /// `None` when the degree depends on terms outside the window.
    pub dim: Option<usize>,
    pub stable: bool,
}

pub fn rows_from(start: i64, dims: &[Betti]) -> Vec<Row> {
    dims.iter()
        .enumerate()
        .map(|(k, b)| Row { degree: start + k as i64, dim: b.dim(), stable: b.dim().is_some() })
        .collect()
}

pub fn rows_windowed(w: &[Windowed]) -> Vec<Row> {
    w.iter().map(|x| Row { degree: x.degree, dim: x.dim, stable: x.dim.is_some() }).collect()
}

#[derive(Serialize, Clone, Debug, PartialEq, Eq)]
pub struct MatrixDoc {
    pub rows: usize,
    pub cols: usize,
    pub triplets: Vec<(usize, usize, u32)>,
}

impl From<&SparseMatrix> for MatrixDoc {
    fn from(m: &SparseMatrix) -> Self {
        MatrixDoc { rows: m.nrows(), cols: m.ncols(), triplets: m.triplets() }
    }
}

/// Tables and extra fields produced by one computation.
#[derive(Default, Debug)]
pub struct Payload {
    pub tables: BTreeMap<String, Vec<Row>>,
    pub extra: BTreeMap<String, Value>,
}

impl Payload {
    pub fn table(mut self, name: &str, rows: Vec<Row>) -> Self {
        self.tables.insert(name.to_string(), rows);
        self
    }

    pub fn with(mut self, key: &str, v: impl Serialize) -> Self {
        self.extra.insert(key.to_string(), serde_json::to_value(v).expect("report values serialize"));
        self
    }
}

#[derive(Serialize, Debug)]
pub struct ErrorDoc {
    pub kind: &'static str,
    pub message: String,
}

impl From<&Error> for ErrorDoc {
    fn from(e: &Error) -> Self {
        let kind = match e {
            Error::MalformedMatrix(_) => "malformed_matrix",
            Error::IncompatibleField(..) => "incompatible_field",
            Error::InvalidComplex { .. } => "invalid_complex",
            Error::Shape(_) => "shape",
            Error::IndeterminateTruncation(_) => "indeterminate_truncation",
            Error::Budget { .. } => "budget",
            Error::InvalidFunctor(_) => "invalid_functor",
            Error::InvalidProjection(_) => "invalid_projection",
            Error::UnsupportedGroup(_) => "unsupported_group",
            Error::InadmissibleFamily(_) => "inadmissible_family",
            Error::InvalidCover(_) => "invalid_cover",
            Error::InvalidAction(_) => "invalid_action",
            Error::MissingCyclic(_) => "missing_cyclic",
            Error::UnsupportedCharacteristic(_) => "unsupported_characteristic",
            Error::Domain(_) => "domain",
            Error::Validation(_) => "validation",
        };
        ErrorDoc { kind, message: e.to_string() }
    }
}

#[derive(Serialize, Debug)]
pub struct Report {
    pub schema_version: u32,
    /// `ok`, `partial` (budget hit, smaller table kept), `budget_exhausted`,
    /// `failed`, or `error`.
    pub status: &'static str,
    pub job: Value,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub tables: BTreeMap<String, Vec<Row>>,
    #[serde(flatten)]
    pub extra: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_clock_seconds: Option<f64>,
}

impl Report {
    pub fn new(status: &'static str, job: Value) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            status,
            job,
            tables: BTreeMap::new(),
            extra: BTreeMap::new(),
            error: None,
            wall_clock_seconds: None,
        }
    }

    pub fn fill(mut self, p: Payload) -> Self {
        self.tables = p.tables;
        self.extra = p.extra;
        self
    }
}
