use crate::error::{Error, Result};
use crate::metrics::{GroupedTally, MetricBundle};

/// Largest instance [`brute_force_best`] accepts (it visits all `2^n` vectors).
pub const BRUTE_FORCE_MAX_N: usize = 16;

const SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum DiscriminationBound {
    #[default]
    None,
    /// Raw discrimination at most this value.
    D(f64),
    /// Normalized discrimination at most this value.
    Delta(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BruteConstraint {
    pub bound: DiscriminationBound,
    /// Require exactly this many acceptances (fixes the acceptance rate).
    pub fixed_accepted: Option<usize>,
}

/// Most accurate decision vector satisfying `constraint`, found by
/// enumerating every vector. Ties go to the lexicographically smallest vector
/// (`false < true`, row 0 most significant).
pub fn brute_force_best(
    labels: &[bool],
    groups: &[bool],
    constraint: &BruteConstraint,
) -> Result<(Vec<bool>, MetricBundle)> {
    let n = labels.len();
    if groups.len() != n {
        return Err(Error::LengthMismatch {
            what: "groups",
            got: groups.len(),
            expected: n,
        });
    }
    if n == 0 {
        return Err(Error::Empty("labels"));
    }
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::Infeasible(format!(
            "exhaustive search is limited to {BRUTE_FORCE_MAX_N} rows, got {n}"
        )));
    }
    // Row i lives at bit n-1-i so that counting upwards visits vectors in
    // lexicographic order.
    let bit = |i: usize| 1u32 << (n - 1 - i);
    let pack = |v: &[bool]| {
        v.iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .fold(0u32, |m, (i, _)| m | bit(i))
    };
    let label_mask = pack(labels);
    let favored_mask = pack(groups);
    let all = (1u32 << n) - 1;
    let protected_mask = all & !favored_mask;
    let n_favored = favored_mask.count_ones() as u64;
    let n_protected = protected_mask.count_ones() as u64;
    if n_favored == 0 || n_protected == 0 {
        return Err(Error::DegenerateGroup("both groups are required".into()));
    }
    let positives = label_mask.count_ones() as u64;
    if positives == 0 || positives == n as u64 {
        return Err(Error::DegenerateLabels("both labels are required".into()));
    }

    let mut best: Option<(u64, u32, MetricBundle)> = None;
    for mask in 0..=all {
        if let Some(k) = constraint.fixed_accepted {
            if mask.count_ones() as usize != k {
                continue;
            }
        }
        let correct = n as u64 - (mask ^ label_mask).count_ones() as u64;
        if best.as_ref().is_some_and(|(c, _, _)| correct <= *c) {
            continue;
        }
        let t = GroupedTally {
            n_favored,
            n_protected,
            accepted_favored: (mask & favored_mask).count_ones() as u64,
            accepted_protected: (mask & protected_mask).count_ones() as u64,
            correct,
            positives_true: positives,
        };
        let m = MetricBundle::from_tally(&t)?;
        let ok = match constraint.bound {
            DiscriminationBound::None => true,
            DiscriminationBound::D(b) => m.d <= b + SLACK,
            DiscriminationBound::Delta(b) => m.delta <= b + SLACK,
        };
        if ok {
            best = Some((correct, mask, m));
        }
    }
    let (_, mask, bundle) = best
        .ok_or_else(|| Error::Infeasible(format!("no decision vector satisfies {constraint:?}")))?;
    let decisions = (0..n).map(|i| mask & bit(i) != 0).collect();
    Ok((decisions, bundle))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics;

    #[test]
    fn unconstrained_optimum_is_the_labels() {
        let labels = [true, false, true, false, false];
        let groups = [true, true, false, false, true];
        let (dec, m) = brute_force_best(&labels, &groups, &BruteConstraint::default()).unwrap();
        assert_eq!(dec, labels);
        assert_eq!(m.accuracy, 1.0);
    }

    #[test]
    fn bundle_matches_evaluation_of_returned_vector() {
        let labels = [true, true, false, true, false, false];
        let groups = [true, true, true, false, false, false];
        let c = BruteConstraint {
            bound: DiscriminationBound::D(0.0),
            fixed_accepted: None,
        };
        let (dec, m) = brute_force_best(&labels, &groups, &c).unwrap();
        assert_eq!(m, metrics::evaluate(&labels, &dec, &groups).unwrap());
        assert!(m.d <= 1e-12);
        // one flip suffices: 2/3 vs 1/3 -> reject one favored positive
        assert_eq!(m.accuracy, 5.0 / 6.0);
        // lexicographically smallest: the first favored positive is rejected
        assert_eq!(dec, vec![false, true, false, true, false, false]);
    }

    #[test]
    fn fixed_acceptance_and_infeasibility() {
        let labels = [true, false, false, true];
        let groups = [true, true, false, false];
        let c = BruteConstraint {
            bound: DiscriminationBound::None,
            fixed_accepted: Some(4),
        };
        let (dec, _) = brute_force_best(&labels, &groups, &c).unwrap();
        assert_eq!(dec, vec![true; 4]);
        let c = BruteConstraint {
            bound: DiscriminationBound::Delta(-2.0),
            fixed_accepted: None,
        };
        assert!(brute_force_best(&labels, &groups, &c)
            .unwrap_err()
            .is_infeasible());
    }

    #[test]
    fn size_limit() {
        let labels = vec![true; 17];
        let groups = vec![true; 17];
        assert!(brute_force_best(&labels, &groups, &BruteConstraint::default()).is_err());
    }
}
