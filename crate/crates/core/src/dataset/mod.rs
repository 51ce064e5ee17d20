//! Loading, encoding, splitting, summarizing and synthesizing datasets that
//! carry a binary label and a binary protected attribute.

mod encode;
mod manifest;
mod prepare;
mod synth;
mod table;

pub use encode::{encode, Encoder};
pub use manifest::{Manifest, MANIFEST_FILE};
pub use prepare::{prepare, Prepared};
pub use synth::{synthesize, SynthSpec};
pub use table::{load_csv, MissingPolicy, RawTable, Schema, MISSING_MARKER};

use ndarray::Array2;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::metrics;

/// Encoded feature matrix with labels (`true` = positive) and groups
/// (`true` = favored).
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    features: Array2<f64>,
    labels: Vec<bool>,
    groups: Vec<bool>,
    feature_names: Vec<String>,
}

impl Dataset {
    pub fn new(
        features: Array2<f64>,
        labels: Vec<bool>,
        groups: Vec<bool>,
        feature_names: Vec<String>,
    ) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::Empty("dataset"));
        }
        if groups.len() != n {
            return Err(Error::LengthMismatch {
                what: "groups",
                got: groups.len(),
                expected: n,
            });
        }
        if features.nrows() != n {
            return Err(Error::LengthMismatch {
                what: "feature rows",
                got: features.nrows(),
                expected: n,
            });
        }
        if feature_names.len() != features.ncols() {
            return Err(Error::LengthMismatch {
                what: "feature names",
                got: feature_names.len(),
                expected: features.ncols(),
            });
        }
        Ok(Dataset {
            features,
            labels,
            groups,
            feature_names,
        })
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn n_features(&self) -> usize {
        self.features.ncols()
    }

    pub fn features(&self) -> &Array2<f64> {
        &self.features
    }

    pub fn labels(&self) -> &[bool] {
        &self.labels
    }

    pub fn groups(&self) -> &[bool] {
        &self.groups
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    /// Same rows and features with replaced labels.
    pub fn with_labels(&self, labels: Vec<bool>) -> Result<Dataset> {
        Dataset::new(
            self.features.clone(),
            labels,
            self.groups.clone(),
            self.feature_names.clone(),
        )
    }

    /// Rows at `indices`, in the given order.
    pub fn subset(&self, indices: &[usize]) -> Dataset {
        Dataset {
            features: self.features.select(ndarray::Axis(0), indices),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            groups: indices.iter().map(|&i| self.groups[i]).collect(),
            feature_names: self.feature_names.clone(),
        }
    }

    /// Random (unstratified) split into `(train, test)` with `fraction` of the
    /// rows in train.
    pub fn split(&self, fraction: f64, seed: u64) -> Result<(Dataset, Dataset)> {
        let (train, test) = split_indices(self.n(), fraction, seed)?;
        Ok((self.subset(&train), self.subset(&test)))
    }

    pub fn summarize(&self) -> Result<DatasetSummary> {
        let t = metrics::tally(&self.labels, &self.labels, &self.groups)?;
        if t.positives_true == 0 || t.positives_true == t.total() {
            return Err(Error::DegenerateLabels(
                "dataset needs both positive and negative labels".into(),
            ));
        }
        let bundle = metrics::MetricBundle::from_tally(&t)?;
        Ok(DatasetSummary {
            n: self.n(),
            alpha: t.alpha(),
            pi0: t.pi0(),
            d0: bundle.d,
            delta0: bundle.delta,
        })
    }
}

/// Rates of the data itself: the oracle's metrics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DatasetSummary {
    pub n: usize,
    pub alpha: f64,
    pub pi0: f64,
    pub d0: f64,
    pub delta0: f64,
}

/// Shuffle `0..n` with a seeded generator and cut it at
/// `round(fraction * n)`. Both sides are returned in ascending row order.
pub fn split_indices(n: usize, fraction: f64, seed: u64) -> Result<(Vec<usize>, Vec<usize>)> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "split fraction must lie in (0, 1), got {fraction}"
        )));
    }
    let cut = (fraction * n as f64 + 0.5).floor() as usize;
    if cut == 0 || cut >= n {
        return Err(Error::InvalidArgument(format!(
            "splitting {n} rows at fraction {fraction} leaves one side empty"
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut train = order[..cut].to_vec();
    let mut test = order[cut..].to_vec();
    train.sort_unstable();
    test.sort_unstable();
    Ok((train, test))
}
