//! Tabular output as TSV or JSON lines.

use std::io::{self, Write};

use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    /// Tab-separated values with a header row.
    #[default]
    Tsv,
    /// One JSON object per row.
    JsonLines,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Int(u64),
    /// A probability or score: six significant digits in TSV.
    Real(f64),
    Bool(bool),
    Empty,
}

impl From<&str> for Cell {
    fn from(value: &str) -> Self {
        Cell::Text(value.to_string())
    }
}

impl From<String> for Cell {
    fn from(value: String) -> Self {
        Cell::Text(value)
    }
}

impl From<usize> for Cell {
    fn from(value: usize) -> Self {
        Cell::Int(value as u64)
    }
}

impl From<f64> for Cell {
    fn from(value: f64) -> Self {
        Cell::Real(value)
    }
}

impl From<bool> for Cell {
    fn from(value: bool) -> Self {
        Cell::Bool(value)
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    columns: &'static [&'static str],
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &'static [&'static str]) -> Self {
        Table { columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> io::Result<()> {
        match format {
            Format::Tsv => {
                writeln!(out, "{}", self.columns.join("\t"))?;
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(tsv_cell).collect();
                    writeln!(out, "{}", cells.join("\t"))?;
                }
            }
            Format::JsonLines => {
                for row in &self.rows {
                    let record: Map<String, Value> = self
                        .columns
                        .iter()
                        .zip(row)
                        .map(|(key, cell)| (key.to_string(), json_cell(cell)))
                        .collect();
                    writeln!(out, "{}", Value::Object(record))?;
                }
            }
        }
        Ok(())
    }
}

fn tsv_cell(cell: &Cell) -> String {
    match cell {
        Cell::Text(text) => text.replace('\\', "\\\\").replace('\t', "\\t"),
        Cell::Int(n) => n.to_string(),
        Cell::Real(x) => format_significant(*x),
        Cell::Bool(b) => b.to_string(),
        Cell::Empty => String::new(),
    }
}

fn json_cell(cell: &Cell) -> Value {
    match cell {
        Cell::Text(text) => Value::from(text.as_str()),
        Cell::Int(n) => Value::from(*n),
        Cell::Real(x) => Value::from(*x),
        Cell::Bool(b) => Value::from(*b),
        Cell::Empty => Value::Null,
    }
}

/// Six significant digits in the style of C's `%g`: fixed notation for
/// exponents in [-5, 5], scientific otherwise, trailing zeros removed.
pub fn format_significant(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exponent) = sci.split_once('e').expect("exponent form");
    let exponent: i32 = exponent.parse().expect("integer exponent");
    if (-4..6).contains(&exponent) {
        let decimals = (5 - exponent) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        let sign = if exponent < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa.to_string()), exponent.abs())
    }
}

fn trim_zeros(text: String) -> String {
    if !text.contains('.') {
        return text;
    }
    text.trim_end_matches('0').trim_end_matches('.').to_string()
}
