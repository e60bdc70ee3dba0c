//! Rendering of command results as text, JSON, CSV or TeX.

use std::time::Duration;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
    Csv,
    /// TeX display-math lines; `enumerate` only.
    Tex,
}

/// Everything a command produced, in every representation it supports.
pub struct Response {
    pub result: Value,
    pub text: String,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub tex: Option<String>,
    pub exit: i32,
}

impl Response {
    pub fn new(result: Value, text: impl Into<String>) -> Self {
        Response {
            result,
            text: text.into(),
            header: Vec::new(),
            rows: Vec::new(),
            tex: None,
            exit: 0,
        }
    }

    pub fn csv(mut self, header: Vec<&'static str>, rows: Vec<Vec<String>>) -> Self {
        self.header = header;
        self.rows = rows;
        self
    }

    /// A single CSV record taken from a flat JSON object.
    pub fn csv_from_result(mut self, fields: &[&'static str]) -> Self {
        self.header = fields.to_vec();
        self.rows = vec![fields
            .iter()
            .map(|f| match &self.result[*f] {
                Value::String(s) => s.clone(),
                Value::Null => String::new(),
                v => v.to_string(),
            })
            .collect()];
        self
    }
}

/// The JSON document: command echo, configuration, result and optional timing.
#[derive(Serialize)]
pub struct ReportDocument<'a> {
    pub command: Value,
    pub config: Value,
    pub result: &'a Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<Value>,
}

pub fn timing(elapsed: Duration) -> Value {
    json!({ "elapsed_ms": elapsed.as_secs_f64() * 1e3 })
}

pub fn to_json(doc: &ReportDocument) -> String {
    // serde_json's map is ordered by key, so going through Value sorts every level
    let v = serde_json::to_value(doc).expect("documents serialize");
    let mut s = serde_json::to_string_pretty(&v).expect("values serialize");
    s.push('\n');
    s
}

pub fn to_csv(header: &[&str], rows: &[Vec<String>]) -> Result<String, String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(|e| e.to_string())?;
    for r in rows {
        w.write_record(r).map_err(|e| e.to_string())?;
    }
    let bytes = w.into_inner().map_err(|e| e.to_string())?;
    String::from_utf8(bytes).map_err(|e| e.to_string())
}
