use std::path::Path;

use super::{split_indices, Dataset, DatasetSummary, Encoder, Manifest, RawTable, Schema};
use crate::error::{Error, Result};

/// A CSV file loaded, split and encoded with training-split statistics.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub manifest: Manifest,
    /// Summary of every retained row (before splitting).
    pub summary: DatasetSummary,
    pub encoder: Encoder,
    pub train: Dataset,
    pub test: Dataset,
}

/// Load `path`, split its retained rows with `split_indices(.., fraction, seed)`
/// and encode both halves with an encoder fit on the training half.
pub fn prepare(path: &Path, schema: &Schema, seed: u64, fraction: f64) -> Result<Prepared> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    let raw = RawTable::from_reader(&bytes[..], schema)?;
    let manifest = Manifest::new(path, &bytes, schema, raw.n_rows(), seed, fraction);
    let (train_idx, test_idx) = split_indices(raw.n_rows(), fraction, seed)?;
    let encoder = Encoder::fit(&raw.subset(&train_idx), schema)?;
    let all = encoder.transform(&raw)?;
    let summary = all.summarize()?;
    Ok(Prepared {
        manifest,
        summary,
        train: all.subset(&train_idx),
        test: all.subset(&test_idx),
        encoder,
    })
}
