use std::f64::consts::PI;

use ndarray::{ArrayView1, Axis};

use super::{require_both_labels, require_width, Scores};
use crate::dataset::Dataset;
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NaiveBayesConfig {
    /// Lower bound on every Gaussian variance.
    pub variance_floor: f64,
    /// Model columns whose training values are all 0 or 1 as Bernoulli
    /// variables with add-one smoothing instead of Gaussians.
    pub bernoulli_indicators: bool,
}

impl Default for NaiveBayesConfig {
    fn default() -> Self {
        NaiveBayesConfig {
            variance_floor: 1e-9,
            bernoulli_indicators: true,
        }
    }
}

/// Class-conditional likelihood of one feature. Index 0 is the negative
/// class, index 1 the positive class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FeatureLikelihood {
    Gaussian {
        mean: [f64; 2],
        variance: [f64; 2],
    },
    /// Probability that the feature equals 1.
    Bernoulli {
        p_one: [f64; 2],
    },
}

impl FeatureLikelihood {
    fn ln_density(&self, c: usize, v: f64) -> f64 {
        match *self {
            FeatureLikelihood::Gaussian { mean, variance } => {
                -0.5 * ((2.0 * PI * variance[c]).ln() + (v - mean[c]).powi(2) / variance[c])
            }
            FeatureLikelihood::Bernoulli { p_one } => {
                v * p_one[c].ln() + (1.0 - v) * (1.0 - p_one[c]).ln()
            }
        }
    }
}

/// Naive Bayes over the encoded feature matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct NaiveBayesModel {
    /// `[p(-), p(+)]`.
    pub prior: [f64; 2],
    pub features: Vec<FeatureLikelihood>,
    pub feature_names: Vec<String>,
}

impl NaiveBayesModel {
    /// `ln p(class) + sum_j ln p(x_j | class)` for both classes.
    pub fn log_joint(&self, x: ArrayView1<f64>) -> [f64; 2] {
        std::array::from_fn(|c| {
            let ll: f64 = x
                .iter()
                .zip(&self.features)
                .map(|(&v, f)| f.ln_density(c, v))
                .sum();
            self.prior[c].ln() + ll
        })
    }

    /// Normalized class posteriors `[p(-|x), p(+|x)]`.
    pub fn posteriors(&self, x: ArrayView1<f64>) -> [f64; 2] {
        let [ln, lp] = self.log_joint(x);
        let top = ln.max(lp);
        let norm = top + ((ln - top).exp() + (lp - top).exp()).ln();
        [(ln - norm).exp(), (lp - norm).exp()]
    }
}

pub fn train_naive_bayes(train: &Dataset, config: &NaiveBayesConfig) -> Result<NaiveBayesModel> {
    require_both_labels(train)?;
    let idx: [Vec<usize>; 2] = std::array::from_fn(|c| {
        (0..train.n())
            .filter(|&i| train.labels()[i] == (c == 1))
            .collect()
    });
    let n = train.n() as f64;
    let prior = [idx[0].len() as f64 / n, idx[1].len() as f64 / n];
    let rows: [_; 2] = std::array::from_fn(|c| train.features().select(Axis(0), &idx[c]));
    let features = (0..train.n_features())
        .map(|j| {
            let col = train.features().column(j);
            if config.bernoulli_indicators && col.iter().all(|&v| v == 0.0 || v == 1.0) {
                let p_one = std::array::from_fn(|c| {
                    let ones = rows[c].column(j).sum();
                    (ones + 1.0) / (idx[c].len() as f64 + 2.0)
                });
                FeatureLikelihood::Bernoulli { p_one }
            } else {
                let mean =
                    std::array::from_fn(|c| rows[c].column(j).mean().expect("class is non-empty"));
                let variance =
                    std::array::from_fn(|c| rows[c].column(j).var(0.0).max(config.variance_floor));
                FeatureLikelihood::Gaussian { mean, variance }
            }
        })
        .collect();
    Ok(NaiveBayesModel {
        prior,
        features,
        feature_names: train.feature_names().to_vec(),
    })
}

pub fn score_naive_bayes(model: &NaiveBayesModel, ds: &Dataset) -> Result<Scores> {
    require_width(model.features.len(), ds)?;
    Scores::new(
        ds.features()
            .rows()
            .into_iter()
            .map(|row| model.posteriors(row)[1])
            .collect(),
    )
}
