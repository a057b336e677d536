//! JSON and CSV rendering of command reports.

use anyhow::Result;
use serde::Serialize;
use serde_json::Value;

pub struct Emit {
    pub csv: bool,
}

impl Emit {
    /// Prints `report` as pretty JSON, or `table` as CSV when `--csv` is set.
    pub fn one<T: Serialize>(&self, report: &T, table: Table) -> Result<()> {
        if self.csv {
            print!("{}", table.render());
        } else {
            println!("{}", serde_json::to_string_pretty(report)?);
        }
        Ok(())
    }
}

pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str], rows: Vec<Vec<String>>) -> Self {
        Table {
            header: header.iter().map(|h| h.to_string()).collect(),
            rows,
        }
    }

    /// One row whose columns are the leaves of `value`, keyed by dotted path.
    /// Arrays of scalars are joined with `;`.
    pub fn key_value(value: &Value) -> Self {
        let mut header = Vec::new();
        let mut row = Vec::new();
        flatten("", value, &mut header, &mut row);
        Table {
            header,
            rows: vec![row],
        }
    }

    pub fn render(&self) -> String {
        let mut out = join(&self.header);
        out.push('\n');
        for row in &self.rows {
            out.push_str(&join(row));
            out.push('\n');
        }
        out
    }
}

fn flatten(prefix: &str, value: &Value, header: &mut Vec<String>, row: &mut Vec<String>) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&key, v, header, row);
            }
        }
        Value::Array(items) if items.iter().all(|v| !v.is_object()) => {
            header.push(prefix.to_string());
            row.push(items.iter().map(scalar).collect::<Vec<_>>().join(";"));
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&format!("{prefix}.{i}"), v, header, row);
            }
        }
        other => {
            header.push(prefix.to_string());
            row.push(scalar(other));
        }
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Array(items) => format!(
            "[{}]",
            items.iter().map(scalar).collect::<Vec<_>>().join(" ")
        ),
        other => other.to_string(),
    }
}

fn join(cells: &[String]) -> String {
    cells
        .iter()
        .map(|c| {
            if c.contains([',', '"', '\n']) {
                format!("\"{}\"", c.replace('"', "\"\""))
            } else {
                c.clone()
            }
        })
        .collect::<Vec<_>>()
        .join(",")
}
