//! Record emission as CSV or JSON lines.

use std::io::Write;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::config::Format;
use crate::error::{io_err, CliError};

/// Ordered key/value record; the key order is the CSV column order.
#[derive(Debug, Default, Clone)]
pub struct Record(Map<String, Value>);

impl Record {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn num(mut self, key: &str, v: f64) -> Self {
        // non-finite values have no JSON number form; they become null
        self.0.insert(key.to_string(), serde_json::Number::from_f64(v).map_or(Value::Null, Value::Number));
        self
    }

    pub fn int(mut self, key: &str, v: u64) -> Self {
        self.0.insert(key.to_string(), Value::from(v));
        self
    }

    pub fn text(mut self, key: &str, v: impl Into<String>) -> Self {
        self.0.insert(key.to_string(), Value::String(v.into()));
        self
    }

    pub fn flag(mut self, key: &str, v: bool) -> Self {
        self.0.insert(key.to_string(), Value::Bool(v));
        self
    }

}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Writes a single record with a header (CSV) or as one JSON object.
pub fn write_record<W: Write>(out: W, format: Format, rec: &Record) -> Result<(), CliError> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(rec.0.keys()).map_err(|e| io_err("csv", e))?;
            w.write_record(rec.0.values().map(cell)).map_err(|e| io_err("csv", e))?;
            w.flush().map_err(|e| io_err("csv", e))
        }
        Format::Jsonl => write_jsonl(out, std::iter::once(&rec.0)),
    }
}

/// Writes a sequence of serializable rows. Field names become the CSV
/// header or the JSON keys.
pub fn write_rows<W: Write, T: Serialize>(out: W, format: Format, rows: &[T]) -> Result<(), CliError> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for r in rows {
                w.serialize(r).map_err(|e| io_err("csv", e))?;
            }
            w.flush().map_err(|e| io_err("csv", e))
        }
        Format::Jsonl => write_jsonl(out, rows.iter()),
    }
}

fn write_jsonl<W: Write, T: Serialize>(mut out: W, rows: impl Iterator<Item = T>) -> Result<(), CliError> {
    for r in rows {
        serde_json::to_writer(&mut out, &r).map_err(|e| io_err("jsonl", e))?;
        out.write_all(b"\n").map_err(|e| io_err("jsonl", e))?;
    }
    out.flush().map_err(|e| io_err("jsonl", e))
}
