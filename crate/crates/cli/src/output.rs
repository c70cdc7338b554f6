//! Rendering of command results as CSV or JSON.

use serde_json::{Map, Value};

pub const SCHEMA_VERSION: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// A fixed-column table with an optional quantity/value summary.
pub struct Report {
    pub command: &'static str,
    pub meta: Vec<(&'static str, Value)>,
    pub tables: Vec<Table>,
    pub summary: Vec<(&'static str, Value)>,
}

pub struct Table {
    pub name: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

pub fn num(v: f64) -> Value {
    serde_json::Number::from_f64(v).map_or(Value::Null, Value::Number)
}

/// Shortest text that parses back to the same f64.
fn csv_number(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || (1e-4..1e16).contains(&a) || !v.is_finite() {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Number(n) if n.is_f64() => csv_number(n.as_f64().unwrap_or(f64::NAN)),
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        Value::Bool(b) => b.to_string(),
        other => other.to_string(),
    }
}

fn csv_block(header: &[&str], rows: &[Vec<Value>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("write to memory");
    for row in rows {
        w.write_record(row.iter().map(csv_cell))
            .expect("write to memory");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv output is utf-8")
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    /// Tables separated by blank lines, then the summary as quantity,value.
    fn to_csv(&self) -> String {
        let mut blocks: Vec<String> = self
            .tables
            .iter()
            .map(|t| csv_block(&t.columns, &t.rows))
            .collect();
        if !self.summary.is_empty() {
            let rows: Vec<Vec<Value>> = self
                .summary
                .iter()
                .map(|(k, v)| vec![Value::String(k.to_string()), v.clone()])
                .collect();
            blocks.push(csv_block(&["quantity", "value"], &rows));
        }
        blocks.join("\n")
    }

    fn to_json(&self) -> String {
        let mut top = Map::new();
        top.insert("schema_version".into(), Value::from(SCHEMA_VERSION));
        top.insert("command".into(), Value::from(self.command));
        for (k, v) in &self.meta {
            top.insert((*k).into(), v.clone());
        }
        for t in &self.tables {
            let rows = t
                .rows
                .iter()
                .map(|r| {
                    Value::Object(
                        t.columns
                            .iter()
                            .zip(r)
                            .map(|(c, v)| ((*c).to_string(), v.clone()))
                            .collect(),
                    )
                })
                .collect();
            top.insert(t.name.into(), Value::Array(rows));
        }
        if !self.summary.is_empty() {
            let s = self
                .summary
                .iter()
                .map(|(k, v)| ((*k).to_string(), v.clone()))
                .collect();
            top.insert("summary".into(), Value::Object(s));
        }
        let mut out = serde_json::to_string_pretty(&Value::Object(top)).expect("json encoding");
        out.push('\n');
        out
    }
}
