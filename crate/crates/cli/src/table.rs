//! In-memory CSV table with a JSON mirror.

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{Map, Number, Value};

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub comments: Vec<String>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, header: &str) -> Self {
        Self { name: name.into(), comments: Vec::new(), header: header.split(',').map(String::from).collect(), rows: Vec::new() }
    }

    /// Adds a `# ...` line above the header.
    pub fn comment(&mut self, text: impl Into<String>) {
        self.comments.push(text.into());
    }

    /// Adds a comma-joined row; the field count must match the header.
    pub fn push(&mut self, row: String) {
        let fields: Vec<String> = row.split(',').map(String::from).collect();
        assert_eq!(fields.len(), self.header.len(), "row {row:?} does not fit header of {}", self.name);
        self.rows.push(fields);
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for c in &self.comments {
            s += &format!("# {}\n", c.trim_start_matches('#').trim_start());
        }
        s += &self.header.join(",");
        s.push('\n');
        for r in &self.rows {
            s += &r.join(",");
            s.push('\n');
        }
        s
    }

    /// Rows as objects keyed by header; numeric fields become numbers.
    pub fn to_json(&self) -> Value {
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut obj = Map::new();
                for (k, v) in self.header.iter().zip(r) {
                    obj.insert(k.clone(), field_value(v));
                }
                Value::Object(obj)
            })
            .collect();
        let mut top = Map::new();
        top.insert("comments".into(), Value::Array(self.comments.iter().cloned().map(Value::String).collect()));
        top.insert("rows".into(), Value::Array(rows));
        Value::Object(top)
    }

    /// Writes `<dir>/<name>.csv` and, if asked, `<dir>/<name>.json`.
    pub fn write(&self, dir: &Path, json: bool) -> std::io::Result<Vec<PathBuf>> {
        let csv = dir.join(format!("{}.csv", self.name));
        fs::write(&csv, self.to_csv()).map_err(|e| with_path(e, &csv))?;
        let mut out = vec![csv];
        if json {
            let p = dir.join(format!("{}.json", self.name));
            let text = serde_json::to_string_pretty(&self.to_json()).expect("serializable table");
            fs::write(&p, text + "\n").map_err(|e| with_path(e, &p))?;
            out.push(p);
        }
        Ok(out)
    }
}

fn with_path(e: std::io::Error, p: &Path) -> std::io::Error {
    std::io::Error::new(e.kind(), format!("{}: {e}", p.display()))
}

fn field_value(v: &str) -> Value {
    if let Ok(i) = v.parse::<i64>() {
        return Value::Number(i.into());
    }
    match v.parse::<f64>().ok().and_then(Number::from_f64) {
        Some(n) => Value::Number(n),
        None => match v {
            "true" => Value::Bool(true),
            "false" => Value::Bool(false),
            "" => Value::Null,
            _ => Value::String(v.into()),
        },
    }
}
