//! From-scratch probabilistic classifiers producing acceptance scores.

mod logistic;
mod model_io;
mod naive_bayes;

pub use logistic::{
    fit_logistic, loss_and_gradient, score_logistic, train_logistic, LinearModel, LogisticConfig,
    LogisticFit,
};
pub use model_io::{ClassifierKind, Model, ModelFile};
pub use naive_bayes::{
    score_naive_bayes, train_naive_bayes, FeatureLikelihood, NaiveBayesConfig, NaiveBayesModel,
};

use std::ops::Deref;

use crate::dataset::Dataset;
use crate::error::{Error, Result};

/// Per-individual acceptance probabilities, each in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Scores(Vec<f64>);

impl Scores {
    pub fn new(scores: Vec<f64>) -> Result<Self> {
        if let Some((i, s)) = scores
            .iter()
            .enumerate()
            .find(|(_, s)| !(0.0..=1.0).contains(*s))
        {
            return Err(Error::InvalidArgument(format!(
                "score {s} at row {i} is outside [0, 1]"
            )));
        }
        Ok(Scores(scores))
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for Scores {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// Accept iff `score > threshold`; a score equal to the threshold is rejected.
pub fn predict_at(scores: &[f64], threshold: f64) -> Vec<bool> {
    scores.iter().map(|&s| s > threshold).collect()
}

fn require_both_labels(ds: &Dataset) -> Result<()> {
    let positives = ds.labels().iter().filter(|&&y| y).count();
    if positives == 0 || positives == ds.n() {
        return Err(Error::DegenerateLabels(
            "training data needs both positive and negative labels".into(),
        ));
    }
    Ok(())
}

fn require_width(expected: usize, ds: &Dataset) -> Result<()> {
    if ds.n_features() != expected {
        return Err(Error::LengthMismatch {
            what: "feature columns",
            got: ds.n_features(),
            expected,
        });
    }
    Ok(())
}
