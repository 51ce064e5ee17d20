//! Reference classifiers: the input-blind random classifier, the label-aware
//! oracle with its discrimination-removal strategies, and an exhaustive
//! optimizer for tiny instances that serves as a testing oracle.

mod brute;
mod oracle;
mod random;

pub use brute::{brute_force_best, BruteConstraint, DiscriminationBound, BRUTE_FORCE_MAX_N};
pub use oracle::{
    default_d_grid, frontier_to_dat, oracle_frontier, oracle_predict, FrontierEntry, FrontierPoint,
    OracleRequest, OracleStrategy, OracleTarget, FRONTIER_COLUMNS,
};
pub use random::{random_expected_metrics, random_predict};
