use std::collections::BTreeSet;

use ndarray::Array2;

use super::table::{RawTable, Schema};
use super::Dataset;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum ColumnEncoding {
    /// z-scored with statistics of the fitting table; `scale == 0` encodes to zeros.
    Numeric { col: usize, mean: f64, scale: f64 },
    /// One indicator column per level; unseen levels encode to all zeros.
    Categorical { col: usize, levels: Vec<String> },
    /// Single 0/1 indicator of the favored group.
    Protected { col: usize },
}

/// Feature encoding fitted on one table (normally the training split) and
/// applied unchanged to others.
#[derive(Debug, Clone, PartialEq)]
pub struct Encoder {
    schema: Schema,
    columns: Vec<ColumnEncoding>,
    feature_names: Vec<String>,
}

impl Encoder {
    pub fn fit(raw: &RawTable, schema: &Schema) -> Result<Self> {
        if raw.n_rows() == 0 {
            return Err(Error::Empty("table"));
        }
        let label_values = distinct(raw, raw.label_index());
        check_binary(
            &schema.label_col,
            &label_values,
            &schema.positive_value,
            false,
        )?;
        let group_values = distinct(raw, raw.group_index());
        check_binary(
            &schema.group_col,
            &group_values,
            &schema.favored_value,
            true,
        )?;

        let mut columns = Vec::new();
        let mut feature_names = Vec::new();
        for (col, name) in raw.columns().iter().enumerate() {
            if col == raw.label_index() || col == raw.group_index() {
                continue;
            }
            let parsed: Option<Vec<f64>> = raw
                .rows()
                .iter()
                .map(|row| row[col].parse::<f64>().ok().filter(|v| v.is_finite()))
                .collect();
            match parsed {
                Some(values) => {
                    let n = values.len() as f64;
                    let mean = values.iter().sum::<f64>() / n;
                    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
                    let scale = var.sqrt();
                    if scale == 0.0 {
                        log::warn!("numeric column `{name}` has zero variance; encoded as zeros");
                    }
                    columns.push(ColumnEncoding::Numeric { col, mean, scale });
                    feature_names.push(name.clone());
                }
                None => {
                    let levels: Vec<String> = distinct(raw, col).into_iter().collect();
                    for level in &levels {
                        feature_names.push(format!("{name}={level}"));
                    }
                    columns.push(ColumnEncoding::Categorical { col, levels });
                }
            }
        }
        if schema.with_s {
            columns.push(ColumnEncoding::Protected {
                col: raw.group_index(),
            });
            feature_names.push(schema.group_col.clone());
        }
        Ok(Encoder {
            schema: schema.clone(),
            columns,
            feature_names,
        })
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn transform(&self, raw: &RawTable) -> Result<Dataset> {
        let n = raw.n_rows();
        let m = self.feature_names.len();
        let mut features = Array2::<f64>::zeros((n, m));
        let mut labels = Vec::with_capacity(n);
        let mut groups = Vec::with_capacity(n);

        for (r, row) in raw.rows().iter().enumerate() {
            labels.push(map_binary(
                &self.schema.label_col,
                &row[raw.label_index()],
                &self.schema.positive_value,
            )?);
            groups.push(map_binary(
                &self.schema.group_col,
                &row[raw.group_index()],
                &self.schema.favored_value,
            )?);

            let mut out = features.row_mut(r);
            let mut j = 0;
            for enc in &self.columns {
                match enc {
                    ColumnEncoding::Numeric { col, mean, scale } => {
                        let v: f64 = row[*col].parse().map_err(|_| {
                            Error::InvalidArgument(format!(
                                "row {r}: column `{}` expected a number, found `{}`",
                                raw.columns()[*col],
                                row[*col]
                            ))
                        })?;
                        out[j] = if *scale == 0.0 {
                            0.0
                        } else {
                            (v - mean) / scale
                        };
                        j += 1;
                    }
                    ColumnEncoding::Categorical { col, levels } => {
                        if let Ok(k) = levels.binary_search(&row[*col]) {
                            out[j + k] = 1.0;
                        }
                        j += levels.len();
                    }
                    ColumnEncoding::Protected { col } => {
                        out[j] = (row[*col] == self.schema.favored_value) as u8 as f64;
                        j += 1;
                    }
                }
            }
        }
        Dataset::new(features, labels, groups, self.feature_names.clone())
    }
}

/// Fit an encoder on `raw` and apply it to the same table.
pub fn encode(raw: &RawTable, schema: &Schema) -> Result<Dataset> {
    Encoder::fit(raw, schema)?.transform(raw)
}

fn distinct(raw: &RawTable, col: usize) -> BTreeSet<String> {
    raw.rows().iter().map(|row| row[col].clone()).collect()
}

fn check_binary(
    column: &str,
    values: &BTreeSet<String>,
    designated: &str,
    need_both: bool,
) -> Result<()> {
    if values.len() > 2 {
        return Err(Error::InvalidArgument(format!(
            "column `{column}` is not binary: {} distinct values",
            values.len()
        )));
    }
    if values.len() == 2 && !values.contains(designated) {
        return Err(Error::InvalidArgument(format!(
            "column `{column}` never takes the designated value `{designated}`"
        )));
    }
    if need_both && values.len() < 2 {
        return Err(Error::DegenerateGroup(format!(
            "column `{column}` has a single value; both groups are required"
        )));
    }
    Ok(())
}

fn map_binary(column: &str, cell: &str, designated: &str) -> Result<bool> {
    if cell == designated {
        Ok(true)
    } else if cell.is_empty() {
        Err(Error::InvalidArgument(format!(
            "column `{column}` has an empty cell"
        )))
    } else {
        Ok(false)
    }
}
