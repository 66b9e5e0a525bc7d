//! CSV and JSON writers sharing one record layout.

use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::Path;

/// A cell: a float, an integer, or empty (JSON `null`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(usize),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Float)
    }
}

/// 17 significant digits in scientific notation, independent of locale.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Float(v) => fmt_float(*v),
            Cell::Int(k) => k.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> String {
        match self {
            Cell::Float(v) if v.is_finite() => fmt_float(*v),
            Cell::Int(k) => k.to_string(),
            _ => "null".into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Config entries echoed into JSON output.
pub enum ConfigValue {
    Float(f64),
    Int(usize),
    Text(String),
}

pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

fn json_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

impl Table {
    pub fn render(&self, format: Format, config: &[(&str, ConfigValue)]) -> String {
        match format {
            Format::Csv => {
                let mut out = self.header.join(",");
                out.push('\n');
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(Cell::csv).collect();
                    out.push_str(&cells.join(","));
                    out.push('\n');
                }
                out
            }
            Format::Json => {
                let mut out = String::from("{\n  \"config\": {");
                for (i, (k, v)) in config.iter().enumerate() {
                    let v = match v {
                        ConfigValue::Float(f) => Cell::Float(*f).json(),
                        ConfigValue::Int(n) => n.to_string(),
                        ConfigValue::Text(s) => json_string(s),
                    };
                    let sep = if i == 0 { "" } else { "," };
                    let _ = write!(out, "{sep}\n    {}: {v}", json_string(k));
                }
                out.push_str("\n  },\n  \"rows\": [");
                for (i, row) in self.rows.iter().enumerate() {
                    let fields: Vec<String> = self
                        .header
                        .iter()
                        .zip(row)
                        .map(|(h, c)| format!("{}: {}", json_string(h), c.json()))
                        .collect();
                    let sep = if i == 0 { "" } else { "," };
                    let _ = write!(out, "{sep}\n    {{{}}}", fields.join(", "));
                }
                out.push_str("\n  ]\n}\n");
                out
            }
        }
    }
}

/// Writes to `path`, or to stdout when absent.
pub fn emit(text: &str, path: Option<&Path>) -> io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_has_seventeen_digits() {
        assert_eq!(fmt_float(1.0), "1.0000000000000000e0");
        assert_eq!(fmt_float(-0.1), "-1.0000000000000001e-1");
    }

    #[test]
    fn csv_and_json_agree_on_layout() {
        let t = Table {
            header: vec!["k", "v"],
            rows: vec![
                vec![Cell::Int(0), Cell::Float(0.5)],
                vec![Cell::Int(1), Cell::Empty],
            ],
        };
        assert_eq!(
            t.render(Format::Csv, &[]),
            "k,v\n0,5.0000000000000000e-1\n1,\n"
        );
        let j = t.render(
            Format::Json,
            &[
                ("n", ConfigValue::Int(2)),
                ("name", ConfigValue::Text("a\"b".into())),
            ],
        );
        assert!(j.contains("\"name\": \"a\\\"b\""));
        assert!(j.contains("{\"k\": 1, \"v\": null}"));
    }
}
