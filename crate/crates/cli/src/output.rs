use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::config::{Format, RunConfig};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
}

impl Cell {
    /// Floats in scientific notation with 12 significant digits.
    pub fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format!("{v:.11e}"),
        }
    }

    fn to_json(self) -> Value {
        match self {
            Cell::Int(v) => Value::from(v),
            Cell::Float(v) => Value::from(v),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v.into())
    }
}

impl From<i32> for Cell {
    fn from(v: i32) -> Self {
        Cell::Int(v.into())
    }
}

/// Column-named rows plus the JSON-only report and metadata.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub meta: Map<String, Value>,
    pub report: Option<Value>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            ..Self::default()
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn meta(&mut self, key: &str, value: impl Serialize) -> Result<(), CliError> {
        self.meta.insert(key.to_string(), to_value(value)?);
        Ok(())
    }

    pub fn report(&mut self, value: impl Serialize) -> Result<(), CliError> {
        self.report = Some(to_value(value)?);
        Ok(())
    }

    pub fn to_csv(&self) -> Result<Vec<u8>, CliError> {
        let mut wtr = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        wtr.write_record(&self.columns).map_err(io_err)?;
        for row in &self.rows {
            wtr.write_record(row.iter().map(Cell::render)).map_err(io_err)?;
        }
        wtr.into_inner().map_err(|e| CliError::Io(e.to_string()))
    }

    pub fn to_json(&self, config: &RunConfig) -> Result<Vec<u8>, CliError> {
        let mut columns = Map::new();
        for (k, name) in self.columns.iter().enumerate() {
            let col = self.rows.iter().map(|r| r[k].to_json()).collect();
            columns.insert((*name).to_string(), Value::Array(col));
        }
        let mut doc = Map::new();
        doc.insert("config".into(), to_value(config)?);
        doc.insert("meta".into(), Value::Object(self.meta.clone()));
        if let Some(report) = &self.report {
            doc.insert("report".into(), report.clone());
        }
        doc.insert("columns".into(), Value::Object(columns));
        let mut bytes = serde_json::to_vec_pretty(&Value::Object(doc)).map_err(|e| CliError::Io(e.to_string()))?;
        bytes.push(b'\n');
        Ok(bytes)
    }

    pub fn render(&self, config: &RunConfig) -> Result<Vec<u8>, CliError> {
        match config.format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(config),
        }
    }
}

fn to_value(value: impl Serialize) -> Result<Value, CliError> {
    serde_json::to_value(value).map_err(|e| CliError::Computation(format!("cannot serialize output: {e}")))
}

fn io_err(e: csv::Error) -> CliError {
    CliError::Io(e.to_string())
}

/// Writes `bytes` to a temporary file beside `path`, then renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let context = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(context)?;
    tmp.write_all(bytes).map_err(context)?;
    tmp.as_file().sync_all().map_err(context)?;
    tmp.persist(path).map_err(|e| context(e.error))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_rendering() {
        assert_eq!(Cell::Float(1.0).render(), "1.00000000000e0");
        assert_eq!(Cell::Float(-0.000123456789012345).render(), "-1.23456789012e-4");
        assert_eq!(Cell::Int(7).render(), "7");
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec![Cell::Float(0.5), Cell::Int(3)]);
        let text = String::from_utf8(t.to_csv().unwrap()).unwrap();
        assert_eq!(text, "a,b\n5.00000000000e-1,3\n");
    }
}
