use serde::Serialize;
use serde_json::{json, Map, Value};

use super::config::Format;
use crate::error::{Error, Result};
use crate::hilbert::ModelSpec;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    /// Passes iff the deviation is finite and strictly below the tolerance.
    pub fn new(name: &str, max_deviation: f64, tolerance: f64) -> Self {
        Check {
            name: name.to_string(),
            max_deviation,
            tolerance,
            pass: max_deviation.is_finite() && max_deviation < tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
    Bool(bool),
    Missing,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format!("{v:.16e}"),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Missing => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => json!(v),
            // NaN and infinities become null
            Cell::Float(v) => Value::from(*v),
            Cell::Text(s) => json!(s),
            Cell::Bool(b) => json!(b),
            Cell::Missing => Value::Null,
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Table {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    fn json_rows(&self) -> Value {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, v)| (c.clone(), v.json()))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        Value::Array(rows)
    }
}

/// Output of one subcommand. CSV carries only `table`; JSON carries
/// everything.
#[derive(Debug, Clone)]
pub struct Report {
    pub model: ModelSpec,
    pub checks: Vec<Check>,
    pub table: Table,
    pub seed: u64,
    pub extra: Map<String, Value>,
}

impl Report {
    pub fn new(model: ModelSpec, seed: u64, table: Table) -> Self {
        Report {
            model,
            checks: Vec::new(),
            table,
            seed,
            extra: Map::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn to_json(&self) -> Value {
        let mut data = Map::new();
        data.insert("seed".into(), json!(self.seed));
        for (k, v) in &self.extra {
            data.insert(k.clone(), v.clone());
        }
        data.insert("rows".into(), self.table.json_rows());
        json!({
            "model": { "M": self.model.constraint(), "j": self.model.j() },
            "checks": self.checks,
            "data": data,
        })
    }

    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Config(format!("csv output: {e}"));
        w.write_record(&self.table.columns).map_err(io)?;
        for row in &self.table.rows {
            w.write_record(row.iter().map(Cell::csv)).map_err(io)?;
        }
        w.into_inner()
            .map_err(|e| Error::Config(format!("csv output: {e}")))
    }

    pub fn render(&self, format: Format) -> Result<Vec<u8>> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => {
                let mut out = serde_json::to_vec_pretty(&self.to_json())
                    .map_err(|e| Error::Config(format!("json output: {e}")))?;
                out.push(b'\n');
                Ok(out)
            }
        }
    }
}
