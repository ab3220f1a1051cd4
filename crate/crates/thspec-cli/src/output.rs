//! Structured output: one row model rendered to CSV, JSON, or aligned text.

use serde_json::{json, Map, Value as Json};
use std::io::Write;

/// A cell value; `Null` renders as an empty CSV field / JSON null.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Num(f64),
    Int(i64),
    Str(String),
    Null,
}

impl Value {
    fn to_json(&self) -> Json {
        match self {
            Value::Num(v) => json!(v),
            Value::Int(v) => json!(v),
            Value::Str(s) => json!(s),
            Value::Null => Json::Null,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Text,
}

/// How floating-point cells are printed in CSV/text.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NumberStyle {
    /// Fixed 7 decimals (natural-unit energies, matching reference tables).
    Fixed7,
    /// 9 significant digits (eV energies).
    Sig9,
}

/// An ordered table of rows plus metadata for the JSON envelope.
#[derive(Debug, Clone)]
pub struct Report {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
    /// `(key, value)` pairs recorded under `meta.params`.
    pub params: Vec<(String, Json)>,
    /// Free-form notes; printed as comment lines in text mode and recorded
    /// under `meta.notes` in JSON.
    pub notes: Vec<String>,
    pub style: NumberStyle,
}

impl Report {
    pub fn new(columns: Vec<&'static str>, style: NumberStyle) -> Self {
        Self {
            columns,
            rows: Vec::new(),
            params: Vec::new(),
            notes: Vec::new(),
            style,
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn param(&mut self, key: &str, value: Json) {
        self.params.push((key.to_string(), value));
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn render(&self, format: Format, out: &mut dyn Write) -> std::io::Result<()> {
        match format {
            Format::Csv => self.render_csv(out),
            Format::Json => self.render_json(out),
            Format::Text => self.render_text(out),
        }
    }

    fn render_csv(&self, out: &mut dyn Write) -> std::io::Result<()> {
        writeln!(out, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let fields: Vec<String> = row.iter().map(|v| csv_field(v)).collect();
            writeln!(out, "{}", fields.join(","))?;
        }
        Ok(())
    }

    fn render_json(&self, out: &mut dyn Write) -> std::io::Result<()> {
        let mut params = Map::new();
        for (k, v) in &self.params {
            params.insert(k.clone(), v.clone());
        }
        let mut meta = Map::new();
        meta.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
        meta.insert("params".into(), Json::Object(params));
        if !self.notes.is_empty() {
            meta.insert("notes".into(), json!(self.notes));
        }
        let rows: Vec<Json> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = Map::new();
                for (c, v) in self.columns.iter().zip(row) {
                    obj.insert((*c).into(), v.to_json());
                }
                Json::Object(obj)
            })
            .collect();
        let doc = json!({ "meta": Json::Object(meta), "rows": rows });
        writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)
    }

    fn render_text(&self, out: &mut dyn Write) -> std::io::Result<()> {
        let mut cells: Vec<Vec<String>> = vec![self.columns.iter().map(|c| c.to_string()).collect()];
        for row in &self.rows {
            cells.push(row.iter().map(|v| text_field(v, self.style)).collect());
        }
        let widths: Vec<usize> = (0..self.columns.len())
            .map(|j| cells.iter().map(|r| r[j].len()).max().unwrap_or(0))
            .collect();
        for line in &cells {
            let padded: Vec<String> = line
                .iter()
                .zip(&widths)
                .map(|(s, w)| format!("{s:>w$}"))
                .collect();
            writeln!(out, "{}", padded.join("  "))?;
        }
        for note in &self.notes {
            writeln!(out, "# {note}")?;
        }
        Ok(())
    }
}

/// CSV numeric fields carry 12 significant digits so that re-parsing and
/// re-printing reproduces the emitted text exactly.
pub fn csv_num(v: f64) -> String {
    format!("{v:.11e}")
}

fn csv_field(v: &Value) -> String {
    match v {
        Value::Num(x) => csv_num(*x),
        Value::Int(x) => x.to_string(),
        Value::Str(s) => s.clone(),
        Value::Null => String::new(),
    }
}

fn text_field(v: &Value, style: NumberStyle) -> String {
    match v {
        Value::Num(x) => match style {
            NumberStyle::Fixed7 => format!("{x:.7}"),
            NumberStyle::Sig9 => format!("{x:.8e}"),
        },
        Value::Int(x) => x.to_string(),
        Value::Str(s) => s.clone(),
        Value::Null => "-".into(),
    }
}
