//! Plain-text number formatting and CSV writing shared by every exporter.
//!
//! Floats are written in scientific notation with 17 significant digits so that
//! parsing them back reproduces the exact `f64`. Lines end in `\n`.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Small row-oriented CSV builder.
#[derive(Debug, Clone, Default)]
pub struct CsvTable {
    text: String,
}

impl CsvTable {
    pub fn new(columns: &[&str]) -> Self {
        let mut text = columns.join(",");
        text.push('\n');
        Self { text }
    }

    /// Table preceded by `# ` comment lines.
    pub fn with_comments(comments: &[String], columns: &[&str]) -> Self {
        let mut text = String::new();
        for c in comments {
            let _ = writeln!(text, "# {c}");
        }
        text.push_str(&columns.join(","));
        text.push('\n');
        Self { text }
    }

    pub fn row(&mut self, cells: &[Cell]) {
        let line: Vec<String> = cells.iter().map(Cell::render).collect();
        self.text.push_str(&line.join(","));
        self.text.push('\n');
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, &self.text).map_err(|e| Error::io(path, e))
    }
}

#[derive(Debug, Clone)]
pub enum Cell {
    F(f64),
    U(u64),
    S(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::F(x) => fmt_f64(*x),
            Cell::U(u) => u.to_string(),
            Cell::S(s) => s.clone(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::F(x)
    }
}

impl From<usize> for Cell {
    fn from(u: usize) -> Self {
        Cell::U(u as u64)
    }
}

impl From<u64> for Cell {
    fn from(u: u64) -> Self {
        Cell::U(u)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::S(s.to_string())
    }
}
