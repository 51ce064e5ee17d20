use std::io::Read;
use std::path::Path;

use crate::error::{Error, Result};

/// Cell value marking a missing entry.
pub const MISSING_MARKER: &str = "?";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MissingPolicy {
    /// Drop every row containing the missing marker in any cell.
    #[default]
    Drop,
    /// Keep rows; the marker becomes an ordinary categorical level.
    Keep,
}

impl MissingPolicy {
    pub fn as_str(self) -> &'static str {
        match self {
            MissingPolicy::Drop => "drop",
            MissingPolicy::Keep => "keep",
        }
    }
}

/// Column roles and ingestion choices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schema {
    pub label_col: String,
    /// Label cell value mapped to the positive outcome.
    pub positive_value: String,
    pub group_col: String,
    /// Group cell value mapped to the favored group.
    pub favored_value: String,
    pub missing: MissingPolicy,
    /// Include the protected attribute among the features.
    pub with_s: bool,
}

impl Schema {
    pub fn new(
        label_col: impl Into<String>,
        positive_value: impl Into<String>,
        group_col: impl Into<String>,
        favored_value: impl Into<String>,
    ) -> Self {
        Schema {
            label_col: label_col.into(),
            positive_value: positive_value.into(),
            group_col: group_col.into(),
            favored_value: favored_value.into(),
            missing: MissingPolicy::Drop,
            with_s: false,
        }
    }

    /// UCI Adult: income above 50K is positive, male is favored.
    pub fn adult() -> Self {
        Schema::new("income", ">50K", "sex", "Male")
    }

    pub fn with_s(mut self, with_s: bool) -> Self {
        self.with_s = with_s;
        self
    }
}

/// Rectangular table of trimmed string cells.
#[derive(Debug, Clone, PartialEq)]
pub struct RawTable {
    columns: Vec<String>,
    rows: Vec<Vec<String>>,
    label_idx: usize,
    group_idx: usize,
    dropped: usize,
}

impl RawTable {
    pub fn new(columns: Vec<String>, rows: Vec<Vec<String>>, schema: &Schema) -> Result<Self> {
        let find = |name: &str| {
            columns
                .iter()
                .position(|c| c == name)
                .ok_or_else(|| Error::UnknownColumn(name.to_string()))
        };
        let label_idx = find(&schema.label_col)?;
        let group_idx = find(&schema.group_col)?;
        if label_idx == group_idx {
            return Err(Error::InvalidArgument(
                "label and group columns must differ".into(),
            ));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != columns.len() {
                return Err(Error::InvalidArgument(format!(
                    "row {i} has {} cells, header has {}",
                    row.len(),
                    columns.len()
                )));
            }
        }
        let mut table = RawTable {
            columns,
            rows,
            label_idx,
            group_idx,
            dropped: 0,
        };
        if schema.missing == MissingPolicy::Drop {
            let before = table.rows.len();
            table
                .rows
                .retain(|row| row.iter().all(|cell| cell != MISSING_MARKER));
            table.dropped = before - table.rows.len();
        }
        Ok(table)
    }

    /// Parse CSV with a header row. Cells are trimmed of surrounding whitespace.
    pub fn from_reader<R: Read>(reader: R, schema: &Schema) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let columns: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
        let mut rows = Vec::new();
        for record in rdr.records() {
            let record = record?;
            rows.push(record.iter().map(str::to_string).collect());
        }
        RawTable::new(columns, rows, schema)
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<String>] {
        &self.rows
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn label_index(&self) -> usize {
        self.label_idx
    }

    pub fn group_index(&self) -> usize {
        self.group_idx
    }

    /// Rows removed by the missing-value policy.
    pub fn dropped_rows(&self) -> usize {
        self.dropped
    }

    /// Rows at `indices`, in the given order.
    pub fn subset(&self, indices: &[usize]) -> RawTable {
        RawTable {
            columns: self.columns.clone(),
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
            label_idx: self.label_idx,
            group_idx: self.group_idx,
            dropped: 0,
        }
    }
}

/// Read a CSV file with a header row.
pub fn load_csv(path: impl AsRef<Path>, schema: &Schema) -> Result<RawTable> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    RawTable::from_reader(std::io::BufReader::new(file), schema)
}
