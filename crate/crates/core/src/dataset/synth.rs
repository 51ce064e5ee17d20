use ndarray::Array2;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::Dataset;
use crate::error::{Error, Result};

/// Target population for [`synthesize`].
///
/// Features, per individual with label `y` (±1) and group `g` (±1, favored = +1):
///
/// * `signal ~ N(y, 1)`: label information only.
/// * `proxy ~ N(g + y/2, 1)`: correlated with the group, weakly with the label.
/// * `noise_k ~ N(0, 1)` for `k < noise_features`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynthSpec {
    pub n: usize,
    /// Favored share.
    pub alpha: f64,
    /// Positive rate.
    pub pi0: f64,
    /// Acceptance-rate gap `p(+|favored) - p(+|protected)`.
    pub d0: f64,
    pub noise_features: usize,
}

impl SynthSpec {
    pub fn new(n: usize, alpha: f64, pi0: f64, d0: f64) -> Self {
        SynthSpec {
            n,
            alpha,
            pi0,
            d0,
            noise_features: 2,
        }
    }

    /// `(n_favored, positives_favored, positives_protected)` hitting the targets
    /// as closely as integer counts allow.
    pub fn counts(&self) -> Result<(usize, usize, usize)> {
        let n = self.n;
        if n < 2 {
            return Err(Error::InvalidArgument(format!("need n >= 2, got {n}")));
        }
        let nf = round_half_up(self.alpha * n as f64);
        if nf == 0 || nf >= n as i64 {
            return Err(Error::Infeasible(format!(
                "alpha={} leaves a group empty at n={n}",
                self.alpha
            )));
        }
        let nf = nf as usize;
        let np = n - nf;
        let rate_f = self.pi0 + (1.0 - self.alpha) * self.d0;
        let rate_p = self.pi0 - self.alpha * self.d0;
        if !(0.0..=1.0).contains(&rate_f) || !(0.0..=1.0).contains(&rate_p) {
            return Err(Error::Infeasible(format!(
                "(alpha={}, pi0={}, d0={}) implies group rates p(+|w)={rate_f:.4}, p(+|b)={rate_p:.4} outside [0, 1]",
                self.alpha, self.pi0, self.d0
            )));
        }

        // Half-up rounding of each group's positives can leave d off by up to
        // 1/(2 nf) + 1/(2 np); search the neighbourhood for a pair that keeps
        // the positive total within one individual of the target.
        let pf0 = round_half_up(rate_f * nf as f64);
        let pp0 = round_half_up(rate_p * np as f64);
        let target_total = self.pi0 * n as f64;
        let mut best: Option<((bool, f64, f64), usize, usize)> = None;
        for pf in (pf0 - 2).max(0)..=(pf0 + 2).min(nf as i64) {
            for pp in (pp0 - 2).max(0)..=(pp0 + 2).min(np as i64) {
                let total_err = ((pf + pp) as f64 - target_total).abs();
                let d = pf as f64 / nf as f64 - pp as f64 / np as f64;
                let key = (total_err > 1.0, (d - self.d0).abs(), total_err);
                if best.as_ref().is_none_or(|(k, _, _)| key < *k) {
                    best = Some((key, pf as usize, pp as usize));
                }
            }
        }
        let (_, pf, pp) = best.expect("candidate window is never empty");
        Ok((nf, pf, pp))
    }
}

/// Generate a dataset whose group sizes and per-group positive counts match
/// `spec` up to integer rounding. Row order is shuffled.
pub fn synthesize(spec: &SynthSpec, seed: u64) -> Result<Dataset> {
    let (nf, pf, pp) = spec.counts()?;
    let n = spec.n;
    let mut people: Vec<(bool, bool)> = Vec::with_capacity(n);
    for i in 0..nf {
        people.push((true, i < pf));
    }
    for i in 0..n - nf {
        people.push((false, i < pp));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    people.shuffle(&mut rng);

    let m = 2 + spec.noise_features;
    let mut features = Array2::<f64>::zeros((n, m));
    for (r, &(favored, positive)) in people.iter().enumerate() {
        let y = if positive { 1.0 } else { -1.0 };
        let g = if favored { 1.0 } else { -1.0 };
        let mut row = features.row_mut(r);
        for (j, v) in row.iter_mut().enumerate() {
            let z: f64 = StandardNormal.sample(&mut rng);
            *v = match j {
                0 => y + z,
                1 => g + 0.5 * y + z,
                _ => z,
            };
        }
    }
    let mut names = vec!["signal".to_string(), "proxy".to_string()];
    names.extend((0..spec.noise_features).map(|k| format!("noise_{k}")));
    Dataset::new(
        features,
        people.iter().map(|p| p.1).collect(),
        people.iter().map(|p| p.0).collect(),
        names,
    )
}

fn round_half_up(x: f64) -> i64 {
    (x + 0.5).floor() as i64
}
