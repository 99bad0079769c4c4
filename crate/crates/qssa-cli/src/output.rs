//! Serialization shared by all subcommands. Every finite number is written
//! as `{:.16e}` (17 significant digits) so equal runs give equal bytes;
//! non-finite numbers become `null` in JSON and `NaN`/`inf` in CSV.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::{Map, Value};

use crate::error::{CliError, CliResult};

pub fn fmt_num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "NaN".to_string()
    } else if x > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

/// Pretty JSON with every float in `{:.16e}`.
struct SciFormatter<'a>(PrettyFormatter<'a>);

impl Formatter for SciFormatter<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }

    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub fn to_json<T: Serialize + ?Sized>(value: &T) -> CliResult<String> {
    let mut buf = Vec::new();
    let mut ser =
        serde_json::Serializer::with_formatter(&mut buf, SciFormatter(PrettyFormatter::new()));
    value
        .serialize(&mut ser)
        .map_err(|e| CliError::Serialize(e.to_string()))?;
    buf.push(b'\n');
    String::from_utf8(buf).map_err(|e| CliError::Serialize(e.to_string()))
}

/// Any serializable value as JSON, ready for [`flatten`].
pub fn value_of<T: Serialize>(value: &T) -> CliResult<Value> {
    serde_json::to_value(value).map_err(|e| CliError::Serialize(e.to_string()))
}

pub fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

/// Nested objects become `outer_inner` keys; arrays and scalars stay put.
pub fn flatten(prefix: &str, value: Value, into: &mut Map<String, Value>) {
    match value {
        Value::Object(obj) => {
            for (k, v) in obj {
                let key = if prefix.is_empty() {
                    k
                } else {
                    format!("{prefix}_{k}")
                };
                flatten(&key, v, into);
            }
        }
        other => {
            into.insert(prefix.to_string(), other);
        }
    }
}

/// Numeric table with named columns.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> CliResult<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let ser = |e: csv::Error| CliError::Serialize(e.to_string());
        w.write_record(&self.header).map_err(ser)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|x| fmt_num(*x)))
                .map_err(ser)?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| CliError::Serialize(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Serialize(e.to_string()))
    }

    /// Column-oriented JSON object.
    pub fn to_json_value(&self) -> Value {
        let mut obj = Map::new();
        for (j, name) in self.header.iter().enumerate() {
            obj.insert(
                name.clone(),
                Value::Array(self.rows.iter().map(|r| num(r[j])).collect()),
            );
        }
        Value::Object(obj)
    }
}

/// One value of a flat record.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Bool(bool),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => fmt_num(*x),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(t) => t.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) => num(*x),
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Text(t) => Value::String(t.clone()),
        }
    }
}

/// Ordered flat key/value record; keys are unique.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Record(pub Vec<(String, Cell)>);

impl Record {
    pub fn num(&mut self, key: impl Into<String>, x: f64) {
        self.put(key.into(), Cell::Num(x));
    }

    pub fn flag(&mut self, key: impl Into<String>, b: bool) {
        self.put(key.into(), Cell::Bool(b));
    }

    pub fn text(&mut self, key: impl Into<String>, t: impl Into<String>) {
        self.put(key.into(), Cell::Text(t.into()));
    }

    /// Later values for an existing key are dropped.
    fn put(&mut self, key: String, cell: Cell) {
        if !self.0.iter().any(|(k, _)| *k == key) {
            self.0.push((key, cell));
        }
    }

    pub fn extend(&mut self, other: Record) {
        for (k, c) in other.0 {
            self.put(k, c);
        }
    }

    #[cfg(test)]
    pub fn get(&self, key: &str) -> Option<&Cell> {
        self.0.iter().find(|(k, _)| k == key).map(|(_, c)| c)
    }

    pub fn to_json_value(&self) -> Value {
        Value::Object(self.0.iter().map(|(k, c)| (k.clone(), c.json())).collect())
    }
}

/// Records sharing one header, as CSV.
pub fn records_to_csv(records: &[Record]) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let ser = |e: csv::Error| CliError::Serialize(e.to_string());
    if let Some(first) = records.first() {
        w.write_record(first.0.iter().map(|(k, _)| k))
            .map_err(ser)?;
    }
    for r in records {
        w.write_record(r.0.iter().map(|(_, c)| c.csv()))
            .map_err(ser)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Serialize(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Serialize(e.to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Where results go: files under `--out` when given, otherwise the primary
/// result on stdout and auxiliary files dropped.
pub struct Sink {
    dir: Option<PathBuf>,
}

impl Sink {
    pub fn new(dir: Option<&Path>) -> CliResult<Self> {
        if let Some(d) = dir {
            fs::create_dir_all(d).map_err(|e| CliError::io(d, e))?;
        }
        Ok(Self {
            dir: dir.map(Path::to_path_buf),
        })
    }

    pub fn has_dir(&self) -> bool {
        self.dir.is_some()
    }

    pub fn primary(&self, name: &str, content: &str) -> CliResult<()> {
        match &self.dir {
            Some(_) => self.aux(name, content),
            None => {
                let mut out = io::stdout().lock();
                out.write_all(content.as_bytes())
                    .and_then(|_| out.flush())
                    .map_err(|e| CliError::io("<stdout>", e))
            }
        }
    }

    pub fn aux(&self, name: &str, content: &str) -> CliResult<()> {
        if let Some(d) = &self.dir {
            let path = d.join(name);
            fs::write(&path, content).map_err(|e| CliError::io(&path, e))?;
        }
        Ok(())
    }

    /// Table as CSV or column JSON, named `stem.csv` / `stem.json`.
    pub fn table(&self, stem: &str, table: &Table, format: Format, primary: bool) -> CliResult<()> {
        let (name, content) = match format {
            Format::Csv => (format!("{stem}.csv"), table.to_csv()?),
            Format::Json => (format!("{stem}.json"), to_json(&table.to_json_value())?),
        };
        if primary {
            self.primary(&name, &content)
        } else {
            self.aux(&name, &content)
        }
    }
}
