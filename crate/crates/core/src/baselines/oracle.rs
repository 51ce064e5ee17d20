use std::fmt;
use std::str::FromStr;

use crate::dat::DatTable;
use crate::error::{Error, Result};
use crate::metrics::{self, max_discrimination, GroupedTally, MetricBundle};

/// How the oracle trades accuracy for lower discrimination. Every strategy
/// starts from the true labels and flips decisions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OracleStrategy {
    /// Reject favored individuals with a positive label.
    DecreaseFavored,
    /// Accept protected individuals with a negative label.
    IncreaseProtected,
    /// Swap pairs (one of each flip above) so the acceptance count is unchanged.
    ChangeBothFixedPi,
}

impl OracleStrategy {
    pub const ALL: [OracleStrategy; 3] = [
        OracleStrategy::DecreaseFavored,
        OracleStrategy::IncreaseProtected,
        OracleStrategy::ChangeBothFixedPi,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            OracleStrategy::DecreaseFavored => "decrease-favored",
            OracleStrategy::IncreaseProtected => "increase-protected",
            OracleStrategy::ChangeBothFixedPi => "change-both",
        }
    }
}

impl fmt::Display for OracleStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for OracleStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "decrease-favored" | "decrease_favored" => Ok(OracleStrategy::DecreaseFavored),
            "increase-protected" | "increase_protected" => Ok(OracleStrategy::IncreaseProtected),
            "change-both" | "change_both" | "change_both_fixed_pi" => {
                Ok(OracleStrategy::ChangeBothFixedPi)
            }
            other => Err(Error::InvalidArgument(format!(
                "unknown oracle strategy `{other}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OracleTarget {
    /// Desired raw discrimination.
    D(f64),
    /// Desired normalized discrimination.
    Delta(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleRequest {
    pub strategy: OracleStrategy,
    pub target: OracleTarget,
}

/// Group sizes and label counts the oracle works from.
#[derive(Debug, Clone, Copy)]
struct Counts {
    nf: u64,
    np: u64,
    pos_f: u64,
    pos_p: u64,
}

impl Counts {
    fn new(labels: &[bool], groups: &[bool]) -> Result<Self> {
        let t = metrics::tally(labels, labels, groups)?;
        if t.n_favored == 0 || t.n_protected == 0 {
            return Err(Error::DegenerateGroup("oracle needs both groups".into()));
        }
        if t.positives_true == 0 || t.positives_true == t.total() {
            return Err(Error::DegenerateLabels("oracle needs both labels".into()));
        }
        Ok(Counts {
            nf: t.n_favored,
            np: t.n_protected,
            pos_f: t.accepted_favored,
            pos_p: t.accepted_protected,
        })
    }

    fn n(&self) -> u64 {
        self.nf + self.np
    }

    fn d0(&self) -> f64 {
        self.pos_f as f64 / self.nf as f64 - self.pos_p as f64 / self.np as f64
    }

    /// Largest number of flips the strategy can make.
    fn capacity(&self, strategy: OracleStrategy) -> u64 {
        match strategy {
            OracleStrategy::DecreaseFavored => self.pos_f,
            OracleStrategy::IncreaseProtected => self.np - self.pos_p,
            OracleStrategy::ChangeBothFixedPi => self.pos_f.min(self.np - self.pos_p),
        }
    }

    /// Tally of the oracle's decisions after `k` flips (pairs for change-both).
    fn tally_after(&self, strategy: OracleStrategy, k: u64) -> GroupedTally {
        let (af, ap, errors) = match strategy {
            OracleStrategy::DecreaseFavored => (self.pos_f - k, self.pos_p, k),
            OracleStrategy::IncreaseProtected => (self.pos_f, self.pos_p + k, k),
            OracleStrategy::ChangeBothFixedPi => (self.pos_f - k, self.pos_p + k, 2 * k),
        };
        GroupedTally {
            n_favored: self.nf,
            n_protected: self.np,
            accepted_favored: af,
            accepted_protected: ap,
            correct: self.n() - errors,
            positives_true: self.pos_f + self.pos_p,
        }
    }

    fn flips(&self, strategy: OracleStrategy, target: OracleTarget) -> Result<u64> {
        let cap = self.capacity(strategy);
        let k = match (strategy, target) {
            (_, OracleTarget::D(d)) => self.flips_for_d(strategy, d)?,
            (OracleStrategy::ChangeBothFixedPi, OracleTarget::Delta(delta)) => {
                let n = self.n() as f64;
                let pi0 = (self.pos_f + self.pos_p) as f64 / n;
                let d_max = max_discrimination(pi0, self.nf as f64 / n)?;
                self.flips_for_d(strategy, delta * d_max)?
            }
            (_, OracleTarget::Delta(delta)) => self.flips_for_delta(strategy, delta)?,
        };
        if k > cap {
            let binding = match strategy {
                OracleStrategy::DecreaseFavored => format!("favored positives = {}", self.pos_f),
                OracleStrategy::IncreaseProtected => {
                    format!("protected negatives = {}", self.np - self.pos_p)
                }
                OracleStrategy::ChangeBothFixedPi => format!(
                    "min(favored positives = {}, protected negatives = {})",
                    self.pos_f,
                    self.np - self.pos_p
                ),
            };
            return Err(Error::Infeasible(format!(
                "{strategy} needs {k} flips but only {binding} are available"
            )));
        }
        Ok(k)
    }

    fn flips_for_d(&self, strategy: OracleStrategy, target: f64) -> Result<u64> {
        let gap = self.d0() - target;
        let scale = match strategy {
            OracleStrategy::DecreaseFavored => self.nf as f64,
            OracleStrategy::IncreaseProtected => self.np as f64,
            OracleStrategy::ChangeBothFixedPi => (self.nf * self.np) as f64 / self.n() as f64,
        };
        // half-up, tolerant of products like 2.4999999999999996
        let k = (gap * scale + 0.5 + 1e-9).floor();
        if k < 0.0 {
            return Err(Error::Infeasible(format!(
                "target d*={target} lies above the data's discrimination {:.6}; flips only lower it",
                self.d0()
            )));
        }
        Ok(k as u64)
    }

    /// One-sided strategies change the acceptance rate, so the flip count is
    /// found by scanning for the normalized discrimination closest to target.
    fn flips_for_delta(&self, strategy: OracleStrategy, target: f64) -> Result<u64> {
        let mut best: Option<(f64, u64)> = None;
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for k in 0..=self.capacity(strategy) {
            let delta = MetricBundle::from_tally(&self.tally_after(strategy, k))?.delta;
            lo = lo.min(delta);
            hi = hi.max(delta);
            let gap = (delta - target).abs();
            if best.is_none_or(|(g, _)| gap < g) {
                best = Some((gap, k));
            }
        }
        if target > hi + 1e-12 || target < lo - 1e-12 {
            return Err(Error::Infeasible(format!(
                "{strategy} reaches normalized discrimination only within [{lo:.4}, {hi:.4}], target {target}"
            )));
        }
        Ok(best.map(|(_, k)| k).unwrap_or(0))
    }
}

/// Decisions of the oracle: true labels with the strategy's flips applied to
/// the lowest-indexed eligible individuals.
pub fn oracle_predict(labels: &[bool], groups: &[bool], req: &OracleRequest) -> Result<Vec<bool>> {
    let counts = Counts::new(labels, groups)?;
    let k = counts.flips(req.strategy, req.target)?;
    Ok(apply_flips(labels, groups, req.strategy, k))
}

fn apply_flips(labels: &[bool], groups: &[bool], strategy: OracleStrategy, k: u64) -> Vec<bool> {
    let mut decisions = labels.to_vec();
    let demote = matches!(
        strategy,
        OracleStrategy::DecreaseFavored | OracleStrategy::ChangeBothFixedPi
    );
    let promote = matches!(
        strategy,
        OracleStrategy::IncreaseProtected | OracleStrategy::ChangeBothFixedPi
    );
    let (mut demoted, mut promoted) = (0u64, 0u64);
    for (i, (&y, &favored)) in labels.iter().zip(groups).enumerate() {
        if demote && demoted < k && favored && y {
            decisions[i] = false;
            demoted += 1;
        } else if promote && promoted < k && !favored && !y {
            decisions[i] = true;
            promoted += 1;
        }
    }
    decisions
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrontierPoint {
    pub target_d: f64,
    pub achieved_d: f64,
    pub pi: f64,
    pub accuracy: f64,
    pub kappa: f64,
    pub delta: f64,
    /// Altered decisions (two per pair for change-both).
    pub flips: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FrontierEntry {
    Reached(FrontierPoint),
    Unreachable { target_d: f64, reason: String },
}

impl FrontierEntry {
    pub fn point(&self) -> Option<&FrontierPoint> {
        match self {
            FrontierEntry::Reached(p) => Some(p),
            FrontierEntry::Unreachable { .. } => None,
        }
    }
}

/// Oracle accuracy at each target discrimination in `d_grid` (non-increasing).
pub fn oracle_frontier(
    labels: &[bool],
    groups: &[bool],
    strategy: OracleStrategy,
    d_grid: &[f64],
) -> Result<Vec<FrontierEntry>> {
    if d_grid.is_empty() {
        return Err(Error::Empty("d grid"));
    }
    if d_grid.windows(2).any(|w| w[1] > w[0]) {
        return Err(Error::InvalidArgument(
            "d grid must be non-increasing".into(),
        ));
    }
    let counts = Counts::new(labels, groups)?;
    d_grid
        .iter()
        .map(
            |&target_d| match counts.flips(strategy, OracleTarget::D(target_d)) {
                Ok(k) => {
                    let decisions = apply_flips(labels, groups, strategy, k);
                    let m = metrics::evaluate(labels, &decisions, groups)?;
                    let flips = match strategy {
                        OracleStrategy::ChangeBothFixedPi => 2 * k,
                        _ => k,
                    };
                    Ok(FrontierEntry::Reached(FrontierPoint {
                        target_d,
                        achieved_d: m.d,
                        pi: m.pi,
                        accuracy: m.accuracy,
                        kappa: m.kappa,
                        delta: m.delta,
                        flips,
                    }))
                }
                Err(Error::Infeasible(reason)) => {
                    Ok(FrontierEntry::Unreachable { target_d, reason })
                }
                Err(e) => Err(e),
            },
        )
        .collect()
}

/// Column names of a frontier `.dat` file.
pub const FRONTIER_COLUMNS: [&str; 7] =
    ["target_d", "d", "pi", "accuracy", "kappa", "delta", "flips"];

/// Frontier as a `.dat` table; unreachable targets become note lines.
pub fn frontier_to_dat(
    strategy: OracleStrategy,
    entries: &[FrontierEntry],
    manifest_hash: &str,
) -> DatTable {
    let mut t = DatTable::new(FRONTIER_COLUMNS.iter().map(|c| c.to_string()).collect())
        .with_meta("kind", "frontier")
        .with_meta("strategy", strategy)
        .with_meta("manifest", manifest_hash);
    for e in entries {
        match e {
            FrontierEntry::Reached(p) => t.push_row(vec![
                p.target_d,
                p.achieved_d,
                p.pi,
                p.accuracy,
                p.kappa,
                p.delta,
                p.flips as f64,
            ]),
            FrontierEntry::Unreachable { target_d, reason } => t
                .notes
                .push(format!("unreachable target_d={target_d}: {reason}")),
        }
    }
    t
}

/// `steps + 1` evenly spaced targets from `d0` down to 0.
pub fn default_d_grid(d0: f64, steps: usize) -> Vec<f64> {
    let steps = steps.max(1);
    (0..=steps)
        .map(|i| d0 * (steps - i) as f64 / steps as f64)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{synthesize, SynthSpec};

    // favored: rows 0..6 with labels 1,1,1,1,0,0; protected: rows 6..10 with 1,0,0,0
    fn toy() -> (Vec<bool>, Vec<bool>) {
        let labels = vec![
            true, true, true, true, false, false, true, false, false, false,
        ];
        let groups = vec![
            true, true, true, true, true, true, false, false, false, false,
        ];
        (labels, groups)
    }

    fn req(strategy: OracleStrategy, d: f64) -> OracleRequest {
        OracleRequest {
            strategy,
            target: OracleTarget::D(d),
        }
    }

    #[test]
    fn target_at_data_discrimination_changes_nothing() {
        let (labels, groups) = toy();
        let d0 = metrics::evaluate(&labels, &labels, &groups).unwrap().d;
        for s in OracleStrategy::ALL {
            let dec = oracle_predict(&labels, &groups, &req(s, d0)).unwrap();
            assert_eq!(dec, labels);
        }
    }

    #[test]
    fn one_sided_strategies_touch_one_group() {
        let (labels, groups) = toy();
        let dec =
            oracle_predict(&labels, &groups, &req(OracleStrategy::DecreaseFavored, 0.0)).unwrap();
        // d0 = 4/6 - 1/4 = 5/12; k = round(5/12 * 6) = round(2.5) = 3
        assert_eq!(
            dec,
            vec![false, false, false, true, false, false, true, false, false, false]
        );
        for i in 6..10 {
            assert_eq!(dec[i], labels[i]);
        }
        let dec = oracle_predict(
            &labels,
            &groups,
            &req(OracleStrategy::IncreaseProtected, 0.0),
        )
        .unwrap();
        // k = round(5/12 * 4) = round(1.667) = 2
        assert_eq!(&dec[..6], &labels[..6]);
        assert_eq!(&dec[6..], &[true, true, true, false]);
    }

    #[test]
    fn change_both_preserves_acceptances() {
        let (labels, groups) = toy();
        let dec = oracle_predict(
            &labels,
            &groups,
            &req(OracleStrategy::ChangeBothFixedPi, 0.0),
        )
        .unwrap();
        // k = round(5/12 * 24/10) = 1
        assert_eq!(
            dec.iter().filter(|&&d| d).count(),
            labels.iter().filter(|&&y| y).count()
        );
        assert_eq!(dec.iter().zip(&labels).filter(|(a, b)| a != b).count(), 2);
    }

    #[test]
    fn decrease_favored_follows_linear_law() {
        let ds = synthesize(&SynthSpec::new(2000, 0.5, 0.5, 0.4), 1).unwrap();
        let dec = oracle_predict(
            ds.labels(),
            ds.groups(),
            &req(OracleStrategy::DecreaseFavored, 0.0),
        )
        .unwrap();
        let m = metrics::evaluate(ds.labels(), &dec, ds.groups()).unwrap();
        assert!((m.accuracy - 0.8).abs() < 1e-12, "{}", m.accuracy);
        assert!(m.d.abs() < 1e-12);
    }

    #[test]
    fn unreachable_targets_are_infeasible() {
        let (labels, groups) = toy();
        let err = oracle_predict(&labels, &groups, &req(OracleStrategy::DecreaseFavored, 0.9))
            .unwrap_err();
        assert!(err.is_infeasible());
        // removing more than the four favored positives can give
        let err = oracle_predict(
            &labels,
            &groups,
            &req(OracleStrategy::DecreaseFavored, -0.5),
        )
        .unwrap_err();
        assert!(err.is_infeasible(), "{err}");
        assert!(err.to_string().contains("favored positives"));
    }

    #[test]
    fn delta_targets() {
        let ds = synthesize(&SynthSpec::new(1000, 0.6, 0.3, 0.2), 4).unwrap();
        for s in OracleStrategy::ALL {
            let r = OracleRequest {
                strategy: s,
                target: OracleTarget::Delta(0.1),
            };
            let dec = oracle_predict(ds.labels(), ds.groups(), &r).unwrap();
            let m = metrics::evaluate(ds.labels(), &dec, ds.groups()).unwrap();
            assert!((m.delta - 0.1).abs() < 0.01, "{s}: {}", m.delta);
        }
    }

    #[test]
    fn frontier_marks_unreachable_points() {
        let (labels, groups) = toy();
        let d0 = 5.0 / 12.0;
        let grid = [0.9, d0, 0.0, -0.9];
        let f = oracle_frontier(&labels, &groups, OracleStrategy::DecreaseFavored, &grid).unwrap();
        assert_eq!(f.len(), 4);
        assert!(matches!(f[0], FrontierEntry::Unreachable { .. }));
        assert_eq!(f[1].point().unwrap().flips, 0);
        assert!(f[2].point().is_some());
        assert!(matches!(f[3], FrontierEntry::Unreachable { .. }));
        assert!(oracle_frontier(&labels, &groups, OracleStrategy::DecreaseFavored, &[]).is_err());
        assert!(oracle_frontier(
            &labels,
            &groups,
            OracleStrategy::DecreaseFavored,
            &[0.0, 0.1]
        )
        .is_err());
    }

    #[test]
    fn frontier_table_lists_unreachable_targets_as_notes() {
        let (labels, groups) = toy();
        let f = oracle_frontier(
            &labels,
            &groups,
            OracleStrategy::IncreaseProtected,
            &[0.9, 0.0],
        )
        .unwrap();
        let t = frontier_to_dat(OracleStrategy::IncreaseProtected, &f, "h");
        assert_eq!(t.rows.len(), 1);
        assert_eq!(t.notes.len(), 1);
        assert!(t.notes[0].starts_with("unreachable target_d=0.9"));
        assert_eq!(t.meta("strategy"), Some("increase-protected"));
    }

    #[test]
    fn default_grid_runs_from_d0_to_zero() {
        let g = default_d_grid(0.4, 4);
        assert_eq!(g.len(), 5);
        assert_eq!(g[0], 0.4);
        assert_eq!(g[4], 0.0);
    }
}
