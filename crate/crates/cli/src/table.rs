//! Deterministic tabular output in CSV and JSON.

use std::fmt::Write as _;
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Bool(bool),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

#[derive(Debug, Clone)]
pub struct Column {
    pub name: &'static str,
    pub unit: &'static str,
}

pub fn col(name: &'static str, unit: &'static str) -> Column {
    Column { name, unit }
}

/// One emitted dataset: resolved parameters, column schema, rows.
#[derive(Debug)]
pub struct Table {
    pub command: String,
    pub params: Vec<(String, String)>,
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(command: &str, columns: Vec<Column>) -> Self {
        Table {
            command: command.to_string(),
            params: Vec::new(),
            columns,
            rows: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) {
        self.params.push((key.to_string(), value.to_string()));
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width mismatch");
        self.rows.push(row);
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn cell_text(cell: &Cell) -> String {
    match cell {
        Cell::Num(v) => format!("{v}"),
        Cell::Int(v) => format!("{v}"),
        Cell::Text(s) => s.clone(),
        Cell::Bool(b) => format!("{b}"),
    }
}

pub fn to_csv(table: &Table) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# scw-repeater {}", table.command);
    for (k, v) in &table.params {
        let _ = writeln!(out, "# {k} = {v}");
    }
    let header: Vec<String> = table
        .columns
        .iter()
        .map(|c| {
            if c.unit.is_empty() {
                csv_escape(c.name)
            } else {
                csv_escape(&format!("{} ({})", c.name, c.unit))
            }
        })
        .collect();
    let _ = writeln!(out, "{}", header.join(","));
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(|c| csv_escape(&cell_text(c))).collect();
        let _ = writeln!(out, "{}", cells.join(","));
    }
    out
}

fn cell_json(cell: &Cell) -> serde_json::Value {
    match cell {
        Cell::Num(v) => serde_json::Number::from_f64(*v)
            .map(serde_json::Value::Number)
            .unwrap_or_else(|| serde_json::Value::String(format!("{v}"))),
        Cell::Int(v) => serde_json::Value::from(*v),
        Cell::Text(s) => serde_json::Value::String(s.clone()),
        Cell::Bool(b) => serde_json::Value::Bool(*b),
    }
}

pub fn to_json(table: &Table) -> String {
    let params: serde_json::Map<String, serde_json::Value> = table
        .params
        .iter()
        .map(|(k, v)| (k.clone(), serde_json::Value::String(v.clone())))
        .collect();
    let columns: Vec<serde_json::Value> = table
        .columns
        .iter()
        .map(|c| serde_json::json!({ "name": c.name, "unit": c.unit }))
        .collect();
    let rows: Vec<serde_json::Value> = table
        .rows
        .iter()
        .map(|r| serde_json::Value::Array(r.iter().map(cell_json).collect()))
        .collect();
    let doc = serde_json::json!({
        "command": table.command,
        "params": params,
        "columns": columns,
        "rows": rows,
    });
    let mut text = serde_json::to_string_pretty(&doc).expect("table serializes");
    text.push('\n');
    text
}

pub fn render(table: &Table, format: Format) -> String {
    match format {
        Format::Csv => to_csv(table),
        Format::Json => to_json(table),
    }
}

pub fn write_table(table: &Table, format: Format, dir: &Path, stem: &str) -> std::io::Result<std::path::PathBuf> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(format!("{stem}.{}", format.extension()));
    std::fs::write(&path, render(table, format))?;
    Ok(path)
}
