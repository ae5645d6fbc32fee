//! CSV and JSON envelopes.
//!
//! CSV files start with `# key,value` metadata lines, then one header row and
//! the data rows, all terminated by `\n`. Floats are written in scientific
//! notation with [`DEFAULT_PRECISION`] significant digits unless the
//! precision override is set. JSON output is one object with `meta` and
//! `data` keys. Both formats parse back into the same bytes.

use std::fmt;

use photon_clusters::thermo::PhysicalConstants;
use serde_json::{Map, Value};

use crate::error::CliError;

pub const TOOL: &str = "photon-clusters";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
/// Enough significant digits for every `f64` to survive a text round trip.
pub const DEFAULT_PRECISION: usize = 17;
pub const PRECISION_ENV: &str = "PHOTON_CLUSTERS_PRECISION";

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Bool(bool),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
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

/// `x` in scientific notation with `digits` significant digits.
pub fn format_float(x: f64, digits: usize) -> String {
    format!("{:.*e}", digits.saturating_sub(1), x)
}

/// `x` rounded to `digits` significant digits.
pub fn round_to_digits(x: f64, digits: usize) -> f64 {
    if digits >= DEFAULT_PRECISION || !x.is_finite() {
        return x;
    }
    format_float(x, digits).parse().unwrap_or(x)
}

impl Cell {
    fn to_text(&self, precision: usize) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format_float(*v, precision),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn parse(s: &str) -> Cell {
        if let Ok(v) = s.parse::<i64>() {
            return Cell::Int(v);
        }
        match s {
            "true" => return Cell::Bool(true),
            "false" => return Cell::Bool(false),
            _ => {}
        }
        match s.parse::<f64>() {
            Ok(v) => Cell::Float(v),
            Err(_) => Cell::Text(s.to_string()),
        }
    }

    fn to_json(&self, precision: usize) -> Value {
        match self {
            Cell::Int(v) => Value::from(*v),
            Cell::Float(v) => Value::from(round_to_digits(*v, precision)),
            Cell::Bool(v) => Value::from(*v),
            Cell::Text(s) => Value::from(s.as_str()),
        }
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
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Values of one column, if it exists.
    pub fn column(&self, name: &str) -> Option<Vec<&Cell>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| &r[i]).collect())
    }
}

/// Everything a command emits, independent of format.
#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub command: String,
    pub precision: usize,
    /// Command-specific scalars, in order.
    pub summary: Vec<(String, Cell)>,
    pub table: Table,
    /// Replaces the generic `data` object in JSON output when set.
    pub json_data: Option<Value>,
}

const HEADER_KEYS: [&str; 7] = ["tool", "version", "command", "h", "c", "k_B", "precision"];

impl Document {
    pub fn new(command: impl Into<String>, precision: usize, table: Table) -> Self {
        Document {
            command: command.into(),
            precision,
            summary: Vec::new(),
            table,
            json_data: None,
        }
    }

    fn header(&self) -> Vec<(String, Cell)> {
        let k = PhysicalConstants::SI;
        vec![
            ("tool".into(), TOOL.into()),
            ("version".into(), VERSION.into()),
            ("command".into(), self.command.clone().into()),
            ("h".into(), k.h.into()),
            ("c".into(), k.c.into()),
            ("k_B".into(), k.k_b.into()),
            ("precision".into(), Cell::Int(self.precision as i64)),
        ]
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => Ok(render_json(&self.to_json())),
        }
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut out = String::new();
        for (key, value) in self.header().iter().chain(&self.summary) {
            out.push_str("# ");
            out.push_str(&csv_line(&[key.clone(), value.to_text(self.precision)])?);
        }
        out.push_str(&csv_line(&self.table.columns)?);
        for row in &self.table.rows {
            let cells: Vec<String> = row.iter().map(|c| c.to_text(self.precision)).collect();
            out.push_str(&csv_line(&cells)?);
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Value {
        let k = PhysicalConstants::SI;
        let p = self.precision;
        let mut constants = Map::new();
        constants.insert("h".into(), Cell::from(k.h).to_json(p));
        constants.insert("c".into(), Cell::from(k.c).to_json(p));
        constants.insert("k_B".into(), Cell::from(k.k_b).to_json(p));
        let mut meta = Map::new();
        meta.insert("tool".into(), TOOL.into());
        meta.insert("version".into(), VERSION.into());
        meta.insert("command".into(), self.command.clone().into());
        meta.insert("constants".into(), Value::Object(constants));
        meta.insert("precision".into(), Value::from(p));
        let data = self.json_data.clone().unwrap_or_else(|| self.generic_json_data());
        let mut root = Map::new();
        root.insert("meta".into(), Value::Object(meta));
        root.insert("data".into(), data);
        Value::Object(root)
    }

    fn generic_json_data(&self) -> Value {
        let p = self.precision;
        let mut data = Map::new();
        if !self.summary.is_empty() {
            let summary: Map<String, Value> = self.summary.iter().map(|(k, v)| (k.clone(), v.to_json(p))).collect();
            data.insert("summary".into(), Value::Object(summary));
        }
        data.insert(
            "columns".into(),
            Value::Array(self.table.columns.iter().map(|c| Value::from(c.as_str())).collect()),
        );
        data.insert(
            "rows".into(),
            Value::Array(
                self.table
                    .rows
                    .iter()
                    .map(|r| Value::Array(r.iter().map(|c| c.to_json(p)).collect()))
                    .collect(),
            ),
        );
        Value::Object(data)
    }

    /// Parses CSV written by [`Document::to_csv`].
    pub fn parse_csv(text: &str) -> Result<Document, CliError> {
        let bad = |msg: &str| CliError::Parse(msg.to_string());
        let mut meta = Vec::new();
        let mut body = String::new();
        for line in text.split_inclusive('\n') {
            match line.strip_prefix("# ") {
                Some(rest) if body.is_empty() => {
                    let fields = csv_fields(rest)?;
                    let [key, value]: [String; 2] = fields
                        .try_into()
                        .map_err(|_| bad("metadata lines hold one key and one value"))?;
                    meta.push((key, value));
                }
                _ => body.push_str(line),
            }
        }
        if meta.len() < HEADER_KEYS.len() || meta.iter().zip(HEADER_KEYS).any(|((k, _), want)| k != want) {
            return Err(bad("missing metadata header"));
        }
        let precision = meta[6]
            .1
            .parse::<usize>()
            .map_err(|_| bad("precision must be an integer"))?;
        let summary = meta[HEADER_KEYS.len()..]
            .iter()
            .map(|(k, v)| (k.clone(), Cell::parse(v)))
            .collect();
        let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(body.as_bytes());
        let columns = reader.headers()?.iter().map(str::to_string).collect();
        let mut table = Table {
            columns,
            rows: Vec::new(),
        };
        for record in reader.records() {
            table.rows.push(record?.iter().map(Cell::parse).collect());
        }
        Ok(Document {
            command: meta[2].1.clone(),
            precision,
            summary,
            table,
            json_data: None,
        })
    }
}

/// Pretty-printed JSON with a trailing newline.
pub fn render_json(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serde_json::Value always serializes");
    s.push('\n');
    s
}

fn csv_line<S: AsRef<[u8]>>(fields: &[S]) -> Result<String, CliError> {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .flexible(true)
        .from_writer(Vec::new());
    writer.write_record(fields)?;
    let bytes = writer.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("fields are UTF-8"))
}

fn csv_fields(line: &str) -> Result<Vec<String>, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .from_reader(line.as_bytes());
    match reader.records().next() {
        Some(record) => Ok(record?.iter().map(str::to_string).collect()),
        None => Ok(Vec::new()),
    }
}
