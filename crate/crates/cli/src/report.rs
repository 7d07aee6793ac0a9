//! Report envelope and its JSON/CSV encodings.
//!
//! Every rational travels as a string. The CSV form is one row per JSON leaf
//! (`path,type,value`), which makes the two encodings lossless images of each
//! other.

use std::path::Path;

use anyhow::{bail, Context, Result};
use etafano::arith::{parse_rational, to_decimal};
use serde::Serialize;
use serde_json::{Map, Value};

/// Bumped whenever a payload key changes meaning.
pub const SCHEMA_VERSION: &str = "etafano.report.v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: &'static str,
    pub command: String,
    pub provenance: Value,
    pub result: Value,
    /// Display-only decimal forms keyed by CSV path; absent unless requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decimal: Option<Value>,
}

impl Report {
    pub fn new(command: &str, provenance: Value, result: Value) -> Self {
        Self { schema_version: SCHEMA_VERSION, command: command.to_string(), provenance, result, decimal: None }
    }

    /// Adds the decimal display map for every non-integer rational leaf.
    pub fn with_decimal(mut self, digits: Option<u32>) -> Self {
        if let Some(digits) = digits {
            let mut map = Map::new();
            for row in flatten(&self.payload()) {
                if let Some(d) = decimal_for(&row, digits) {
                    map.insert(row.path, Value::String(d));
                }
            }
            self.decimal = Some(Value::Object(map));
        }
        self
    }

    /// The exact part: everything except the decimal display map.
    pub fn payload(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("report is plain JSON");
        if let Value::Object(m) = &mut v {
            m.remove("decimal");
        }
        v
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => Ok(serde_json::to_string_pretty(self)? + "\n"),
            Format::Csv => {
                let digits = self.decimal.is_some();
                let decimals = self.decimal.as_ref().and_then(Value::as_object);
                let mut w = csv::Writer::from_writer(Vec::new());
                if digits {
                    w.write_record(["path", "type", "value", "decimal"])?;
                } else {
                    w.write_record(["path", "type", "value"])?;
                }
                for row in flatten(&self.payload()) {
                    if digits {
                        let d = decimals.and_then(|m| m.get(&row.path)).and_then(Value::as_str).unwrap_or("");
                        w.write_record([row.path.as_str(), row.kind, row.value.as_str(), d])?;
                    } else {
                        w.write_record([row.path.as_str(), row.kind, row.value.as_str()])?;
                    }
                }
                Ok(String::from_utf8(w.into_inner()?)?)
            }
        }
    }
}

fn decimal_for(row: &Row, digits: u32) -> Option<String> {
    if row.kind != "string" || !row.value.contains('/') {
        return None;
    }
    parse_rational(&row.value).ok().map(|x| to_decimal(&x, digits))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub path: String,
    pub kind: &'static str,
    pub value: String,
}

fn escape(key: &str) -> String {
    let k = key.replace('~', "~0").replace('/', "~1");
    match k.strip_prefix('[') {
        Some(rest) => format!("~2{rest}"),
        None => k,
    }
}

fn unescape(seg: &str) -> String {
    let s = match seg.strip_prefix("~2") {
        Some(rest) => format!("[{rest}"),
        None => seg.to_string(),
    };
    s.replace("~1", "/").replace("~0", "~")
}

/// Leaves in document order. Array elements are `[i]` segments; empty
/// containers get their own row so that they survive the round trip.
pub fn flatten(v: &Value) -> Vec<Row> {
    let mut rows = Vec::new();
    walk(v, String::new(), &mut rows);
    rows
}

fn walk(v: &Value, path: String, rows: &mut Vec<Row>) {
    let join = |seg: String| if path.is_empty() { seg } else { format!("{path}/{seg}") };
    let leaf = |kind, value: String| Row { path: path.clone(), kind, value };
    match v {
        Value::Object(m) if m.is_empty() => rows.push(leaf("object", String::new())),
        Value::Array(a) if a.is_empty() => rows.push(leaf("array", String::new())),
        Value::Object(m) => m.iter().for_each(|(k, x)| walk(x, join(escape(k)), rows)),
        Value::Array(a) => a.iter().enumerate().for_each(|(i, x)| walk(x, join(format!("[{i}]")), rows)),
        Value::Null => rows.push(leaf("null", String::new())),
        Value::Bool(b) => rows.push(leaf("bool", b.to_string())),
        Value::Number(n) => rows.push(leaf("number", n.to_string())),
        Value::String(s) => rows.push(leaf("string", s.clone())),
    }
}

/// Inverse of [`flatten`].
pub fn unflatten(rows: &[Row]) -> Result<Value> {
    let mut root = Value::Null;
    for row in rows {
        let leaf = match row.kind {
            "object" => Value::Object(Map::new()),
            "array" => Value::Array(Vec::new()),
            "null" => Value::Null,
            "bool" => Value::Bool(row.value.parse().with_context(|| format!("bool at {}", row.path))?),
            "number" => serde_json::from_str(&row.value).with_context(|| format!("number at {}", row.path))?,
            "string" => Value::String(row.value.clone()),
            other => bail!("unknown cell type {other:?} at {}", row.path),
        };
        let segs: Vec<&str> = if row.path.is_empty() { Vec::new() } else { row.path.split('/').collect() };
        insert(&mut root, &segs, leaf).with_context(|| format!("inconsistent path {}", row.path))?;
    }
    Ok(root)
}

fn insert(node: &mut Value, segs: &[&str], leaf: Value) -> Result<()> {
    let Some((head, rest)) = segs.split_first() else {
        *node = leaf;
        return Ok(());
    };
    let index = head.strip_prefix('[').and_then(|s| s.strip_suffix(']'));
    match index {
        Some(i) => {
            let i: usize = i.parse()?;
            if node.is_null() {
                *node = Value::Array(Vec::new());
            }
            let Value::Array(a) = node else { bail!("expected an array") };
            if i == a.len() {
                a.push(Value::Null);
            } else if i > a.len() {
                bail!("array index {i} out of order");
            }
            insert(&mut a[i], rest, leaf)
        }
        None => {
            if node.is_null() {
                *node = Value::Object(Map::new());
            }
            let Value::Object(m) = node else { bail!("expected an object") };
            insert(m.entry(unescape(head)).or_insert(Value::Null), rest, leaf)
        }
    }
}

/// Parses CSV produced by [`Report::render`]; the decimal column is dropped.
pub fn csv_to_json(text: &str) -> Result<Value> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let headers = r.headers()?.clone();
    if headers.get(0) != Some("path") || headers.get(1) != Some("type") || headers.get(2) != Some("value") {
        bail!("CSV header must start with path,type,value");
    }
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let kind = match &rec[1] {
            "object" => "object",
            "array" => "array",
            "null" => "null",
            "bool" => "bool",
            "number" => "number",
            "string" => "string",
            other => bail!("unknown cell type {other:?}"),
        };
        rows.push(Row { path: rec[0].to_string(), kind, value: rec[2].to_string() });
    }
    unflatten(&rows)
}

/// Reads a report in either encoding and returns its exact payload.
pub fn load(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut v = if text.trim_start().starts_with('{') {
        serde_json::from_str(&text)?
    } else {
        csv_to_json(&text)?
    };
    if let Value::Object(m) = &mut v {
        m.remove("decimal");
    }
    Ok(v)
}
