use ndarray::{Array1, Array2};

use super::{require_both_labels, require_width, Scores};
use crate::dataset::Dataset;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogisticConfig {
    pub learning_rate: f64,
    pub max_epochs: usize,
    /// Stop once the loss changes by less than this between epochs.
    pub tolerance: f64,
    /// L2 penalty on the weights (not the bias).
    pub l2: f64,
}

impl Default for LogisticConfig {
    fn default() -> Self {
        LogisticConfig {
            learning_rate: 0.1,
            max_epochs: 5000,
            tolerance: 1e-8,
            l2: 1e-4,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    pub weights: Array1<f64>,
    pub bias: f64,
    pub feature_names: Vec<String>,
}

impl LinearModel {
    pub fn zeros(feature_names: Vec<String>) -> Self {
        LinearModel {
            weights: Array1::zeros(feature_names.len()),
            bias: 0.0,
            feature_names,
        }
    }
}

/// Trained model plus the loss after every epoch (index 0 is the initial loss).
#[derive(Debug, Clone)]
pub struct LogisticFit {
    pub model: LinearModel,
    pub losses: Vec<f64>,
    pub converged: bool,
}

/// Mean log-loss plus `l2/2 * |w|^2`, and its gradient as `(loss, d/dw, d/db)`.
pub fn loss_and_gradient(
    model: &LinearModel,
    features: &Array2<f64>,
    labels: &[bool],
    l2: f64,
) -> (f64, Array1<f64>, f64) {
    let n = labels.len() as f64;
    let m = model.weights.len();
    assert_eq!(
        features.dim(),
        (labels.len(), m),
        "features must be labels x weights"
    );
    let x = features.as_standard_layout();
    let xs = x.as_slice().expect("standard layout is contiguous");
    let w = model.weights.to_vec();
    let mut grad = vec![0.0; m];
    let (mut loss, mut grad_b) = (0.0, 0.0);
    // one pass over rows: z, loss and the gradient contribution of each row
    for (i, &y) in labels.iter().enumerate() {
        let row = &xs[i * m..(i + 1) * m];
        let z = model.bias + row.iter().zip(&w).map(|(a, b)| a * b).sum::<f64>();
        let y = y as u8 as f64;
        loss += softplus(z) - y * z;
        let r = sigmoid(z) - y;
        grad_b += r;
        for (g, v) in grad.iter_mut().zip(row) {
            *g += r * v;
        }
    }
    let grad_w = Array1::from(grad) / n + &model.weights * l2;
    let grad_b = grad_b / n;
    let penalty = 0.5 * l2 * model.weights.dot(&model.weights);
    (loss / n + penalty, grad_w, grad_b)
}

/// Full-batch gradient descent from zero initialization.
pub fn fit_logistic(train: &Dataset, config: &LogisticConfig) -> Result<LogisticFit> {
    require_both_labels(train)?;
    if train.features().iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument(
            "features contain non-finite values".into(),
        ));
    }
    let x = train.features();
    let y = train.labels();
    let mut model = LinearModel::zeros(train.feature_names().to_vec());
    let (mut loss, mut grad_w, mut grad_b) = loss_and_gradient(&model, x, y, config.l2);
    let mut losses = vec![loss];
    let mut converged = false;

    for epoch in 1..=config.max_epochs {
        model.weights.scaled_add(-config.learning_rate, &grad_w);
        model.bias -= config.learning_rate * grad_b;
        let (next, gw, gb) = loss_and_gradient(&model, x, y, config.l2);
        if !next.is_finite() {
            return Err(Error::Diverged { epoch });
        }
        losses.push(next);
        let change = (loss - next).abs();
        loss = next;
        grad_w = gw;
        grad_b = gb;
        if change < config.tolerance {
            converged = true;
            break;
        }
    }
    log::debug!(
        "logistic: {} epochs, final loss {loss:.6}, converged={converged}",
        losses.len() - 1
    );
    Ok(LogisticFit {
        model,
        losses,
        converged,
    })
}

pub fn train_logistic(train: &Dataset, config: &LogisticConfig) -> Result<LinearModel> {
    Ok(fit_logistic(train, config)?.model)
}

pub fn score_logistic(model: &LinearModel, ds: &Dataset) -> Result<Scores> {
    require_width(model.weights.len(), ds)?;
    let z = ds.features().dot(&model.weights) + model.bias;
    Scores::new(z.iter().map(|&v| sigmoid(v)).collect())
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// `ln(1 + e^z)` without overflow.
fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}
