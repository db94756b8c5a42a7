use std::io::Write;

use serde_json::{Map, Value};

pub const SCHEMA_VERSION: u32 = 1;

/// One output value. Non-finite numbers are written as `inf`, `-inf` or `nan`.
#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Bool(bool),
    Empty,
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::Num(v) => number_text(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(v) if v.is_finite() => Value::from(*v),
            Cell::Num(v) => Value::String(number_text(*v)),
            Cell::Int(v) => Value::from(*v),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Empty => Value::Null,
        }
    }
}

fn number_text(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{v:?}")
    }
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

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

/// A command's output: summary fields plus a fixed-column table.
#[derive(Clone, Debug)]
pub struct Report {
    pub command: &'static str,
    pub summary: Vec<(&'static str, Cell)>,
    pub columns: &'static [&'static str],
    pub rows: Vec<Vec<Cell>>,
}

impl Report {
    pub fn new(command: &'static str, columns: &'static [&'static str]) -> Self {
        Self { command, summary: Vec::new(), columns, rows: Vec::new() }
    }

    pub fn field(&mut self, key: &'static str, value: impl Into<Cell>) {
        self.summary.push((key, value.into()));
    }

    pub fn row(&mut self, cells: Vec<Cell>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
    }

    fn schema(&self) -> String {
        format!("roughmorrey.{}.v{SCHEMA_VERSION}", self.command)
    }

    pub fn write_json<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let mut summary = Map::new();
        for (k, v) in &self.summary {
            summary.insert((*k).to_string(), v.json());
        }
        let mut root = Map::new();
        root.insert("schema".into(), Value::String(self.schema()));
        root.insert("command".into(), Value::String(self.command.into()));
        root.insert("summary".into(), Value::Object(summary));
        root.insert("columns".into(), Value::from(self.columns.to_vec()));
        let rows = self.rows.iter().map(|r| Value::Array(r.iter().map(Cell::json).collect())).collect();
        root.insert("rows".into(), Value::Array(rows));
        serde_json::to_writer_pretty(&mut out, &Value::Object(root))?;
        writeln!(out)
    }

    /// A `# schema` line and `# key: value` summary lines, then the table.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "# schema: {}", self.schema())?;
        for (k, v) in &self.summary {
            writeln!(out, "# {k}: {}", v.text().replace('\n', " "))?;
        }
        let mut w = csv::Writer::from_writer(out);
        w.write_record(self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::text))?;
        }
        w.flush()
    }
}
