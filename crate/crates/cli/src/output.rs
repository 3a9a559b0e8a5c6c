use std::io::Write;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Flag(bool),
}

impl Cell {
    fn render(&self) -> String {
        match *self {
            Cell::Num(x) => format_number(x),
            Cell::Int(i) => i.to_string(),
            Cell::Flag(b) => b.to_string(),
        }
    }
}

/// Shortest round-trip form, in exponent notation outside `[1e-4, 1e6)`.
pub fn format_number(x: f64) -> String {
    if x == 0.0 || !x.is_finite() || (1e-4..1e6).contains(&x.abs()) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

/// A CSV table with `#`-prefixed metadata lines above the column header.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub notes: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|c| c.to_string()).collect(), ..Self::default() }
    }

    pub fn write<W: Write>(&self, mut out: W, preamble: &[String]) -> Result<(), CliError> {
        for line in preamble.iter().chain(&self.notes) {
            for part in line.lines() {
                writeln!(out, "# {part}")?;
            }
        }
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render))?;
        }
        w.flush()?;
        Ok(())
    }
}
