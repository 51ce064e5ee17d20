//! Evaluation of binary classifiers under non-discrimination constraints.
//!
//! Accuracy is normalized against a random classifier with the same acceptance
//! rate (Cohen's kappa) and discrimination against the largest gap achievable at
//! that acceptance rate, so classifiers accepting different shares of the
//! population can be compared.

pub mod baselines;
pub mod classifiers;
pub mod dat;
pub mod dataset;
mod error;
pub mod massaging;
pub mod metrics;
pub mod plot;
pub mod sweep;

pub use error::{Error, Result};
pub use metrics::{evaluate, GroupedTally, MetricBundle};
