#![allow(dead_code)]

use std::path::PathBuf;

use fairtrade::classifiers::{score_logistic, train_logistic, LogisticConfig};
use fairtrade::dataset::Dataset;
use fairtrade::massaging::{apply_massage, plan_massage};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Bundled Adult file, overridable with `FAIRTRADE_ADULT_CSV`.
pub fn adult_path() -> PathBuf {
    std::env::var_os("FAIRTRADE_ADULT_CSV")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/adult.csv"))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random labels and groups of length `n` with both labels, both groups and
/// positive discrimination.
pub fn random_instance(rng: &mut ChaCha8Rng, n: usize) -> (Vec<bool>, Vec<bool>) {
    loop {
        let labels: Vec<bool> = (0..n).map(|_| rng.random_bool(0.5)).collect();
        let groups: Vec<bool> = (0..n).map(|_| rng.random_bool(0.5)).collect();
        let Ok(m) = fairtrade::evaluate(&labels, &labels, &groups) else {
            continue;
        };
        if m.d > 0.0 {
            return (labels, groups);
        }
    }
}

/// Least-squares slope of `ys` on `xs`.
pub fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Sample mean and its standard error.
pub fn mean_and_se(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

pub fn stdev(v: &[f64]) -> f64 {
    let (_, se) = mean_and_se(v);
    se * (v.len() as f64).sqrt()
}

/// Complete-priority decisions: `round(pi n)` acceptances, favored rows
/// first. Groups are the first `round(alpha n)` rows; labels alternate.
pub fn titanic(n: usize, pi: f64, alpha: f64) -> (Vec<bool>, Vec<bool>, Vec<bool>) {
    let nf = (alpha * n as f64).round() as usize;
    let accepted = (pi * n as f64).round() as usize;
    let groups: Vec<bool> = (0..n).map(|i| i < nf).collect();
    let labels: Vec<bool> = (0..n).map(|i| i % 2 == 0).collect();
    let decisions: Vec<bool> = (0..n).map(|i| i < accepted).collect();
    (labels, decisions, groups)
}

/// Logistic classifier trained on `train` after massaging its labels with a
/// logistic ranker fit on the same data.
pub fn massaged_logistic(train: &Dataset, test: &Dataset) -> (Vec<f64>, usize) {
    let config = LogisticConfig::default();
    let ranker = train_logistic(train, &config).unwrap();
    let ranks = score_logistic(&ranker, train).unwrap();
    let plan = plan_massage(train, &ranks).unwrap();
    let massaged = apply_massage(train, &plan).unwrap();
    let model = train_logistic(&massaged, &config).unwrap();
    (score_logistic(&model, test).unwrap().into_inner(), plan.m())
}
