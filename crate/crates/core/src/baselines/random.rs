use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::metrics::{max_discrimination, random_accuracy, MetricBundle};

/// Independent Bernoulli(`pi`) decisions that ignore every input.
pub fn random_predict(n: usize, pi: f64, seed: u64) -> Result<Vec<bool>> {
    check_rate("pi", pi)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..n).map(|_| rng.random_bool(pi)).collect())
}

/// Expected metrics of the random classifier: accuracy `R`, and zero kappa,
/// discrimination and normalized discrimination.
pub fn random_expected_metrics(pi0: f64, pi: f64, alpha: f64) -> Result<MetricBundle> {
    check_rate("pi0", pi0)?;
    check_rate("pi", pi)?;
    let r = random_accuracy(pi0, pi);
    Ok(MetricBundle {
        pi,
        accuracy: r,
        random_accuracy: r,
        kappa: 0.0,
        d: 0.0,
        d_max: max_discrimination(pi, alpha)?,
        delta: 0.0,
    })
}

fn check_rate(name: &str, v: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::InvalidArgument(format!(
            "{name} must lie in [0, 1], got {v}"
        )));
    }
    Ok(())
}
