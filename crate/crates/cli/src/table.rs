use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Value};

/// Version of the column layout. Bump when columns change.
pub const TABLE_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Real(f64),
    /// A real that may be undefined (empty in CSV, null in JSON).
    MaybeReal(Option<f64>),
    Int(usize),
    Bool(bool),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Real(x) | Cell::MaybeReal(Some(x)) => format!("{x:.14e}"),
            Cell::MaybeReal(None) => String::new(),
            Cell::Int(k) => k.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Real(x) | Cell::MaybeReal(Some(x)) => Some(*x),
            Cell::Int(k) => Some(*k as f64),
            _ => None,
        }
    }
}

/// Output of one command: rows plus the pass/fail verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub command: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// Whether every numerical contract of the command held.
    pub pass: bool,
    /// Extra JSON, e.g. the verify summary.
    pub summary: Option<Value>,
}

impl Table {
    pub fn new(command: &'static str, columns: &[&'static str]) -> Self {
        Table { command, columns: columns.to_vec(), rows: Vec::new(), pass: true, summary: None }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<&Cell>> {
        let k = self.columns.iter().position(|c| *c == name)?;
        Some(self.rows.iter().map(|r| &r[k]).collect())
    }

    /// Versioned comment line, header row, one line per row, and the summary
    /// as a trailing comment when present.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# chlattice {} table v{TABLE_VERSION}", self.command);
        let _ = writeln!(out, "{}", self.columns.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        if let Some(s) = &self.summary {
            let _ = writeln!(out, "# summary {s}");
        }
        out
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Object(self.columns.iter().zip(r).map(|(c, v)| (c.to_string(), json!(v))).collect()))
            .collect();
        let mut doc = json!({
            "command": self.command,
            "version": TABLE_VERSION,
            "pass": self.pass,
            "columns": self.columns,
            "rows": rows,
        });
        if let Some(s) = &self.summary {
            doc["summary"] = s.clone();
        }
        let mut text = serde_json::to_string_pretty(&doc).expect("table serializes");
        text.push('\n');
        text
    }
}
