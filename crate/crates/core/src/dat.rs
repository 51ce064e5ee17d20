//! Whitespace-delimited numeric tables.
//!
//! ```text
//! # classifier = logistic-no-s
//! # manifest = 1a2b3c4d5e6f7a8b
//! threshold pi accuracy ...
//! 1 0 0.7529 ...
//! ```
//!
//! `# key = value` lines are metadata; any other `#` line is a free-form note.
//! Values use shortest round-trip float formatting, so writing the same table
//! twice gives identical bytes.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Default)]
pub struct DatTable {
    pub meta: Vec<(String, String)>,
    pub notes: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl DatTable {
    pub fn new(columns: Vec<String>) -> Self {
        DatTable {
            columns,
            ..Default::default()
        }
    }

    pub fn with_meta(mut self, key: &str, value: impl ToString) -> Self {
        self.meta.push((key.to_string(), value.to_string()));
        self
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.meta
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }

    pub fn push_row(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.meta {
            let _ = writeln!(out, "# {k} = {v}");
        }
        for note in &self.notes {
            let _ = writeln!(out, "# {note}");
        }
        let _ = writeln!(out, "{}", self.columns.join(" "));
        for row in &self.rows {
            let mut first = true;
            for v in row {
                if !first {
                    out.push(' ');
                }
                first = false;
                let _ = write!(out, "{v}");
            }
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        let mut table = DatTable::default();
        let mut have_header = false;
        for (i, line) in text.lines().enumerate() {
            let no = i + 1;
            if let Some(comment) = line.strip_prefix('#') {
                let comment = comment.trim();
                match comment.split_once(" = ") {
                    Some((k, v)) if !k.contains(' ') => {
                        table.meta.push((k.to_string(), v.to_string()))
                    }
                    _ => table.notes.push(comment.to_string()),
                }
                continue;
            }
            if line.trim().is_empty() {
                continue;
            }
            if !have_header {
                table.columns = line.split_whitespace().map(str::to_string).collect();
                have_header = true;
                continue;
            }
            let row: Vec<f64> = line
                .split_whitespace()
                .map(|c| c.parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::parse(origin, no, format!("bad number: {e}")))?;
            if row.len() != table.columns.len() {
                return Err(Error::parse(
                    origin,
                    no,
                    format!("{} values for {} columns", row.len(), table.columns.len()),
                ));
            }
            table.rows.push(row);
        }
        if !have_header {
            return Err(Error::parse(origin, 0, "missing header line"));
        }
        Ok(table)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, path)
    }
}
