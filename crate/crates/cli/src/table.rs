//! Rectangular result tables and their CSV / NDJSON encodings.
//!
//! Floats are written in the shortest form that parses back to the same
//! `f64`, so both encodings round-trip exactly.

use std::io::{BufRead, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Number, Value};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Ndjson,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Ndjson => "ndjson",
        }
    }

    /// `.ndjson` and `.jsonl` select NDJSON, anything else CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("ndjson" | "jsonl") => Format::Ndjson,
            _ => Format::Csv,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Bool(bool),
    Str(String),
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::Float(x) => format!("{x:?}"),
            Cell::Int(i) => i.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Str(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Float(x) => Number::from_f64(*x).map_or(Value::Null, Value::Number),
            Cell::Int(i) => Value::from(*i),
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Str(s) => Value::String(s.clone()),
        }
    }

    fn from_json(v: &Value) -> Option<Cell> {
        Some(match v {
            Value::Bool(b) => Cell::Bool(*b),
            Value::String(s) => Cell::Str(s.clone()),
            Value::Number(n) if n.is_f64() => Cell::Float(n.as_f64()?),
            Value::Number(n) => Cell::Int(n.as_i64()?),
            _ => return None,
        })
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<i64> for Cell {
    fn from(i: i64) -> Self {
        Cell::Int(i)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Str(s.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config_sha256: String,
}

impl Provenance {
    pub fn new(command: &str, config_sha256: &str) -> Self {
        Self {
            tool: "dqpt".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            config_sha256: config_sha256.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputTable {
    pub provenance: Provenance,
    columns: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl OutputTable {
    pub fn new(provenance: Provenance, columns: &[&str]) -> Self {
        Self {
            provenance,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    /// # Panics
    /// If the row width differs from the column count.
    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn float(&self, row: usize, column: &str) -> Option<f64> {
        match self.rows.get(row)?.get(self.column_index(column)?)? {
            Cell::Float(x) => Some(*x),
            Cell::Int(i) => Some(*i as f64),
            _ => None,
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn encode(&self, format: Format) -> Vec<u8> {
        match format {
            Format::Csv => self.encode_csv(),
            Format::Ndjson => self.encode_ndjson(),
        }
    }

    fn encode_csv(&self) -> Vec<u8> {
        let p = &self.provenance;
        let mut out = format!(
            "# {} {} command={} config_sha256={}\n",
            p.tool, p.version, p.command, p.config_sha256
        )
        .into_bytes();
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(&mut out);
        w.write_record(&self.columns).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::text))
                .expect("in-memory write");
        }
        w.flush().expect("in-memory write");
        drop(w);
        out
    }

    fn encode_ndjson(&self) -> Vec<u8> {
        let meta = serde_json::json!({ "meta": self.provenance, "columns": self.columns });
        let mut out = Vec::new();
        writeln!(out, "{meta}").expect("in-memory write");
        for row in &self.rows {
            let obj: Map<String, Value> = self
                .columns
                .iter()
                .cloned()
                .zip(row.iter().map(Cell::json))
                .collect();
            writeln!(out, "{}", Value::Object(obj)).expect("in-memory write");
        }
        out
    }
}

/// Writes the table to `dest`, or to stdout when `dest` is `None`.
pub fn write_table(tbl: &OutputTable, format: Format, dest: Option<&Path>) -> Result<(), CliError> {
    let bytes = tbl.encode(format);
    match dest {
        Some(path) => std::fs::write(path, bytes).map_err(|e| CliError::io(path, e)),
        None => {
            let mut stdout = std::io::stdout().lock();
            match stdout.write_all(&bytes).and_then(|_| stdout.flush()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::io("<stdout>", e)),
                _ => Ok(()),
            }
        }
    }
}

/// Parses NDJSON produced by [`write_table`].
pub fn read_ndjson(reader: impl BufRead) -> Result<OutputTable, CliError> {
    let bad = |line: usize, why: &str| CliError::io("<ndjson>", format!("line {line}: {why}"));
    let mut lines = reader.lines().enumerate();
    let (_, first) = lines.next().ok_or_else(|| bad(1, "missing metadata line"))?;
    let first: Value = serde_json::from_str(&first.map_err(|e| bad(1, &e.to_string()))?)
        .map_err(|e| bad(1, &e.to_string()))?;
    let provenance: Provenance =
        serde_json::from_value(first["meta"].clone()).map_err(|e| bad(1, &e.to_string()))?;
    let columns: Vec<String> =
        serde_json::from_value(first["columns"].clone()).map_err(|e| bad(1, &e.to_string()))?;
    let mut tbl = OutputTable {
        provenance,
        columns,
        rows: Vec::new(),
    };
    for (i, line) in lines {
        let line = line.map_err(|e| bad(i + 1, &e.to_string()))?;
        let obj: Map<String, Value> = serde_json::from_str(&line).map_err(|e| bad(i + 1, &e.to_string()))?;
        let row = tbl
            .columns
            .iter()
            .map(|c| obj.get(c).and_then(Cell::from_json))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| bad(i + 1, "missing or invalid column"))?;
        if obj.len() != tbl.columns.len() {
            return Err(bad(i + 1, "unexpected column"));
        }
        tbl.rows.push(row);
    }
    Ok(tbl)
}
