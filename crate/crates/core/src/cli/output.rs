//! Tabular output with a commented metadata header.

use num_complex::Complex64;
use serde::ser::{SerializeSeq, Serializer};
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

pub fn ser_complex<S: Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(2))?;
    seq.serialize_element(&z.re)?;
    seq.serialize_element(&z.im)?;
    seq.end()
}

pub fn ser_complex_vecs<S: Serializer>(lines: &[Vec<Complex64>], s: S) -> std::result::Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(lines.len()))?;
    for l in lines {
        let pts: Vec<[f64; 2]> = l.iter().map(|z| [z.re, z.im]).collect();
        seq.serialize_element(&pts)?;
    }
    seq.end()
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Bool(bool),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
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

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

/// 17 significant digits, which round-trips every f64.
pub fn fmt_num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        format!("{v}")
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(v) => fmt_num(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(t) => {
                if t.contains([',', '"', '\n']) {
                    format!("\"{}\"", t.replace('"', "\"\""))
                } else {
                    t.clone()
                }
            }
        }
    }

    fn json(&self) -> serde_json::Value {
        match self {
            Cell::Num(v) => serde_json::Number::from_f64(*v).map_or(serde_json::Value::Null, serde_json::Value::Number),
            Cell::Int(v) => serde_json::Value::from(*v),
            Cell::Bool(b) => serde_json::Value::from(*b),
            Cell::Text(t) => serde_json::Value::from(t.as_str()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// Scalar results reported in the header.
    pub results: Vec<(String, Cell)>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table { columns: columns.iter().map(|c| c.to_string()).collect(), ..Default::default() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn result(&mut self, key: &str, value: impl Into<Cell>) {
        self.results.push((key.to_string(), value.into()));
    }
}

/// Header lines shared by both formats, without the comment marker.
#[derive(Debug, Clone, PartialEq)]
pub struct Metadata {
    pub lines: Vec<(String, String)>,
    pub config: String,
}

pub fn render_csv(meta: &Metadata, table: &Table) -> String {
    let mut out = String::new();
    for (k, v) in &meta.lines {
        let _ = writeln!(out, "# {k}: {v}");
    }
    for (k, v) in &table.results {
        let _ = writeln!(out, "# result: {k} = {}", v.csv());
    }
    let _ = writeln!(out, "# config:");
    for line in meta.config.lines() {
        let _ = writeln!(out, "#   {line}");
    }
    let _ = writeln!(out, "{}", table.columns.join(","));
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(Cell::csv).collect();
        let _ = writeln!(out, "{}", cells.join(","));
    }
    out
}

pub fn render_json(meta: &Metadata, table: &Table) -> Result<String> {
    let mut header = serde_json::Map::new();
    for (k, v) in &meta.lines {
        header.insert(k.clone(), serde_json::Value::from(v.as_str()));
    }
    header.insert("config".into(), serde_json::Value::from(meta.config.as_str()));
    let results: serde_json::Map<String, serde_json::Value> =
        table.results.iter().map(|(k, v)| (k.clone(), v.json())).collect();
    let rows: Vec<serde_json::Value> = table
        .rows
        .iter()
        .map(|r| serde_json::Value::Array(r.iter().map(Cell::json).collect()))
        .collect();
    let doc = serde_json::json!({
        "metadata": header,
        "results": results,
        "columns": table.columns,
        "rows": rows,
    });
    let mut s = serde_json::to_string_pretty(&doc).map_err(|e| Error::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// Pulls the re-serialized config back out of a CSV header.
pub fn config_from_csv_header(text: &str) -> String {
    let mut out = String::new();
    let mut inside = false;
    for line in text.lines() {
        if !line.starts_with('#') {
            break;
        }
        if line == "# config:" {
            inside = true;
            continue;
        }
        if inside {
            if let Some(rest) = line.strip_prefix("#   ") {
                out.push_str(rest);
            }
            out.push('\n');
        }
    }
    out
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
        }
    }
    std::fs::write(path, contents).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}
