//! Rendering of command results as text, CSV or JSON.

use std::fmt::Write as _;

use bfactorial::ExtNat;
use clap::ValueEnum;
use serde_json::{json, Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

impl Format {
    pub fn name(&self) -> &'static str {
        match self {
            Format::Text => "text",
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Clone, Debug)]
pub enum Cell {
    Text(String),
    Int(i64),
    Ext(ExtNat),
    Bool(bool),
    /// A big decimal; grouped with commas in text output.
    Decimal(String),
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Int(n) => n.to_string(),
            Cell::Ext(e) => e.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Decimal(d) => bfactorial::tables::with_commas(d),
        }
    }

    fn plain(&self) -> String {
        match self {
            Cell::Ext(e) => e.to_plain(),
            Cell::Decimal(d) => d.clone(),
            other => other.text(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Text(s) | Cell::Decimal(s) => Value::String(s.clone()),
            Cell::Int(n) => json!(n),
            Cell::Ext(e) => e.to_u64().map_or_else(|| Value::String(e.to_plain()), |n| json!(n)),
            Cell::Bool(b) => json!(b),
        }
    }
}

/// The resolved run configuration, as ordered key/value pairs.
#[derive(Clone, Debug, Default)]
pub struct Config {
    pub entries: Vec<(String, Value)>,
}

impl Config {
    pub fn set(&mut self, key: &str, value: impl Into<Value>) {
        self.entries.push((key.to_string(), value.into()));
    }

    fn header(&self) -> String {
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|(k, v)| match v {
                Value::String(s) => format!("{k}={s}"),
                other => format!("{k}={other}"),
            })
            .collect();
        format!("# bfact {} {}", env!("CARGO_PKG_VERSION"), parts.join(" "))
    }
}

/// A rectangular result with named columns.
#[derive(Clone, Debug, Default)]
pub struct Report {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// Free text printed after the header in text mode instead of the rows.
    pub body: Option<String>,
}

pub fn render(format: Format, config: &Config, report: &Report) -> String {
    match format {
        Format::Text => text(config, report),
        Format::Csv => csv(config, report),
        Format::Json => json_doc(config, report),
    }
}

fn text(config: &Config, report: &Report) -> String {
    let mut out = config.header();
    out.push('\n');
    if let Some(body) = &report.body {
        out.push_str(body);
        return out;
    }
    let cells: Vec<Vec<String>> = report.rows.iter().map(|r| r.iter().map(Cell::text).collect()).collect();
    if cells.len() == 1 {
        let width = report.columns.iter().map(|c| c.len()).max().unwrap_or(0);
        for (name, value) in report.columns.iter().zip(&cells[0]) {
            let _ = writeln!(out, "{name:<width$}  {value}");
        }
        return out;
    }
    let mut widths: Vec<usize> = report.columns.iter().map(|c| c.chars().count()).collect();
    for row in &cells {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |row: Vec<&str>| -> String {
        let padded: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
            .collect();
        padded.join("  ").trim_end().to_string()
    };
    out.push_str(&line(report.columns.clone()));
    out.push('\n');
    for row in &cells {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
        out.push('\n');
    }
    out
}

fn csv(config: &Config, report: &Report) -> String {
    let mut out = config.header();
    out.push('\n');
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(&report.columns).expect("in-memory write");
    for row in &report.rows {
        writer.write_record(row.iter().map(Cell::plain)).expect("in-memory write");
    }
    let bytes = writer.into_inner().expect("in-memory write");
    out.push_str(&String::from_utf8(bytes).expect("utf-8 cells"));
    out
}

fn json_doc(config: &Config, report: &Report) -> String {
    let config: Map<String, Value> = config.entries.iter().cloned().collect();
    let results: Vec<Value> = report
        .rows
        .iter()
        .map(|row| {
            let obj: Map<String, Value> =
                report.columns.iter().zip(row).map(|(c, v)| (c.to_string(), v.json())).collect();
            Value::Object(obj)
        })
        .collect();
    let doc = json!({
        "version": env!("CARGO_PKG_VERSION"),
        "config": config,
        "results": results,
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
    s.push('\n');
    s
}
