use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Debug)]
pub enum Cell {
    Int(i64),
    Num(f64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Num(v) => format!("{v:?}"),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::from(*v),
            Cell::Num(v) => number(*v),
            Cell::Text(s) => Value::from(s.as_str()),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

/// JSON has no NaN or infinity; those become strings.
pub fn number(v: f64) -> Value {
    serde_json::Number::from_f64(v).map(Value::Number).unwrap_or_else(|| Value::from(v.to_string()))
}

/// Run metadata, written first in every output.
#[derive(Clone, Debug)]
pub struct Metadata(Map<String, Value>);

impl Metadata {
    pub fn new(command: &str) -> Self {
        let mut map = Map::new();
        map.insert("program".into(), "raney".into());
        map.insert("version".into(), env!("CARGO_PKG_VERSION").into());
        map.insert("command".into(), command.into());
        Self(map)
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.0.insert(key.to_string(), value.into());
        self
    }

    pub fn to_value(&self) -> Value {
        Value::Object(self.0.clone())
    }

    fn csv_lines(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.0 {
            let text = match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            let _ = writeln!(out, "# {k}={text}");
        }
        out
    }
}

pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// Comment lines placed after the rows in CSV, extra fields in JSON.
    pub trailer: Vec<(&'static str, Value)>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self { columns, rows: Vec::new(), trailer: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, meta: &Metadata, format: Format) -> String {
        match format {
            Format::Csv => {
                let mut out = meta.csv_lines();
                let mut writer = csv::Writer::from_writer(Vec::new());
                writer.write_record(&self.columns).expect("in-memory write");
                for row in &self.rows {
                    writer.write_record(row.iter().map(Cell::csv)).expect("in-memory write");
                }
                let body = writer.into_inner().expect("in-memory flush");
                out.push_str(std::str::from_utf8(&body).expect("cells are UTF-8"));
                if !self.trailer.is_empty() {
                    let parts: Vec<String> = self
                        .trailer
                        .iter()
                        .map(|(k, v)| match v {
                            Value::String(s) => format!("{k}={s}"),
                            other => format!("{k}={other}"),
                        })
                        .collect();
                    let _ = writeln!(out, "# {}", parts.join(" "));
                }
                out
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let obj: Map<String, Value> =
                            self.columns.iter().zip(row).map(|(c, v)| (c.to_string(), v.json())).collect();
                        Value::Object(obj)
                    })
                    .collect();
                let mut doc = Map::new();
                doc.insert("metadata".into(), meta.to_value());
                doc.insert("rows".into(), Value::Array(rows));
                for (k, v) in &self.trailer {
                    doc.insert(k.to_string(), v.clone());
                }
                json_text(&Value::Object(doc))
            }
        }
    }
}

pub fn json_text(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    s.push('\n');
    s
}

/// Writes to `path`, or to stdout when there is none.
pub fn emit(path: Option<&Path>, text: &str) -> io::Result<()> {
    match path {
        Some(p) => fs::write(p, text),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()
        }
    }
}
