//! Raw and acceptance-rate-normalized accuracy and discrimination.
//!
//! Every quantity is a function of a [`GroupedTally`]. Bundle values are
//! formed as integer numerator/denominator pairs and converted to `f64` with a
//! single division, so bound checks and ties come out the same on every run.
//!
//! Group encoding is fixed: `true` is the favored group, `false` the protected
//! group. Labels and decisions use `true` for the positive outcome.

use crate::error::{Error, Result};

/// Sufficient statistic for every metric in this module.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct GroupedTally {
    pub n_favored: u64,
    pub n_protected: u64,
    pub accepted_favored: u64,
    pub accepted_protected: u64,
    /// Decisions equal to the true label.
    pub correct: u64,
    /// True positive labels in the dataset.
    pub positives_true: u64,
}

impl GroupedTally {
    pub fn new(
        n_favored: u64,
        n_protected: u64,
        accepted_favored: u64,
        accepted_protected: u64,
        correct: u64,
        positives_true: u64,
    ) -> Result<Self> {
        let t = GroupedTally {
            n_favored,
            n_protected,
            accepted_favored,
            accepted_protected,
            correct,
            positives_true,
        };
        t.validate()?;
        Ok(t)
    }

    fn validate(&self) -> Result<()> {
        let total = self.total();
        if total == 0 {
            return Err(Error::Empty("tally"));
        }
        if self.accepted_favored > self.n_favored || self.accepted_protected > self.n_protected {
            return Err(Error::InvalidArgument(format!(
                "accepted counts ({}, {}) exceed group sizes ({}, {})",
                self.accepted_favored, self.accepted_protected, self.n_favored, self.n_protected
            )));
        }
        if self.correct > total || self.positives_true > total {
            return Err(Error::InvalidArgument(format!(
                "correct={} / positives={} exceed total {total}",
                self.correct, self.positives_true
            )));
        }
        Ok(())
    }

    pub fn total(&self) -> u64 {
        self.n_favored + self.n_protected
    }

    pub fn accepted(&self) -> u64 {
        self.accepted_favored + self.accepted_protected
    }

    /// Acceptance rate of the decisions.
    pub fn pi(&self) -> f64 {
        self.accepted() as f64 / self.total() as f64
    }

    /// Share of the favored group.
    pub fn alpha(&self) -> f64 {
        self.n_favored as f64 / self.total() as f64
    }

    /// Positive rate of the true labels.
    pub fn pi0(&self) -> f64 {
        self.positives_true as f64 / self.total() as f64
    }

    fn require_both_groups(&self) -> Result<()> {
        if self.n_favored == 0 || self.n_protected == 0 {
            return Err(Error::DegenerateGroup(format!(
                "need members of both groups (favored={}, protected={})",
                self.n_favored, self.n_protected
            )));
        }
        Ok(())
    }

    /// Numerator over `n_favored * n_protected` of the acceptance-rate gap.
    fn gap_numerator(&self) -> i128 {
        self.accepted_favored as i128 * self.n_protected as i128
            - self.accepted_protected as i128 * self.n_favored as i128
    }
}

/// Count group sizes, acceptances and correct decisions.
pub fn tally(labels: &[bool], decisions: &[bool], groups: &[bool]) -> Result<GroupedTally> {
    let n = labels.len();
    if decisions.len() != n {
        return Err(Error::LengthMismatch {
            what: "decisions",
            got: decisions.len(),
            expected: n,
        });
    }
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
    let mut t = GroupedTally::default();
    for ((&y, &yhat), &favored) in labels.iter().zip(decisions).zip(groups) {
        if favored {
            t.n_favored += 1;
            t.accepted_favored += yhat as u64;
        } else {
            t.n_protected += 1;
            t.accepted_protected += yhat as u64;
        }
        t.correct += (y == yhat) as u64;
        t.positives_true += y as u64;
    }
    Ok(t)
}

/// `p(+|favored) - p(+|protected)`.
pub fn discrimination(t: &GroupedTally) -> Result<f64> {
    t.require_both_groups()?;
    Ok(ratio(
        t.gap_numerator(),
        t.n_favored as i128 * t.n_protected as i128,
    ))
}

/// Largest achievable discrimination at acceptance rate `pi` when a share
/// `alpha` of the population is favored: every favored individual is accepted
/// before any protected one.
pub fn max_discrimination(pi: f64, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::DegenerateGroup(format!(
            "favored share must lie in (0, 1), got {alpha}"
        )));
    }
    if !(0.0..=1.0).contains(&pi) {
        return Err(Error::InvalidArgument(format!(
            "acceptance rate must lie in [0, 1], got {pi}"
        )));
    }
    Ok((pi / alpha).min((1.0 - pi) / (1.0 - alpha)))
}

/// `d / d_max`, with the convention that it is 0 when `d_max` is 0 (everyone
/// or nobody accepted).
pub fn normalized_discrimination(d: f64, d_max: f64) -> f64 {
    debug_assert!(d_max >= 0.0, "negative d_max {d_max}");
    if d_max == 0.0 {
        0.0
    } else {
        d / d_max
    }
}

/// Fraction of decisions equal to the true label.
pub fn accuracy(t: &GroupedTally) -> Result<f64> {
    if t.total() == 0 {
        return Err(Error::Empty("tally"));
    }
    Ok(t.correct as f64 / t.total() as f64)
}

/// Expected accuracy of a classifier accepting at random with rate `pi` on
/// data with positive rate `pi0`.
pub fn random_accuracy(pi0: f64, pi: f64) -> f64 {
    pi0 * pi + (1.0 - pi0) * (1.0 - pi)
}

/// `(A - R) / (1 - R)`.
pub fn cohens_kappa(accuracy: f64, random_accuracy: f64) -> Result<f64> {
    if random_accuracy >= 1.0 {
        return Err(Error::DegenerateLabels(
            "random accuracy is 1 (labels and decisions are constant); kappa is undefined".into(),
        ));
    }
    Ok((accuracy - random_accuracy) / (1.0 - random_accuracy))
}

/// Raw and normalized measures of one decision vector against one dataset.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricBundle {
    pub pi: f64,
    pub accuracy: f64,
    pub random_accuracy: f64,
    pub kappa: f64,
    pub d: f64,
    pub d_max: f64,
    pub delta: f64,
}

impl MetricBundle {
    pub fn from_tally(t: &GroupedTally) -> Result<Self> {
        t.validate()?;
        t.require_both_groups()?;
        let n = t.total() as i128;
        let nf = t.n_favored as i128;
        let np = t.n_protected as i128;
        let accepted = t.accepted() as i128;
        let positives = t.positives_true as i128;
        let correct = t.correct as i128;

        // R * n^2
        let random_num = positives * accepted + (n - positives) * (n - accepted);
        let n2 = n * n;
        if random_num == n2 {
            return Err(Error::DegenerateLabels(
                "random accuracy is 1 (labels and decisions are constant); kappa is undefined"
                    .into(),
            ));
        }

        let gap = t.gap_numerator();
        // d_max = min(accepted / nf, (n - accepted) / np); compare by cross-multiplying.
        let (d_max, delta) = if accepted * np <= (n - accepted) * nf {
            (ratio(accepted, nf), ratio_or_zero(gap, np * accepted))
        } else {
            (
                ratio(n - accepted, np),
                ratio_or_zero(gap, nf * (n - accepted)),
            )
        };

        Ok(MetricBundle {
            pi: ratio(accepted, n),
            accuracy: ratio(correct, n),
            random_accuracy: ratio(random_num, n2),
            kappa: ratio(correct * n - random_num, n2 - random_num),
            d: ratio(gap, nf * np),
            d_max,
            delta,
        })
    }
}

/// Tally the inputs and compute every measure from that single tally.
pub fn evaluate(labels: &[bool], decisions: &[bool], groups: &[bool]) -> Result<MetricBundle> {
    MetricBundle::from_tally(&tally(labels, decisions, groups)?)
}

fn ratio(num: i128, den: i128) -> f64 {
    num as f64 / den as f64
}

fn ratio_or_zero(num: i128, den: i128) -> f64 {
    if den == 0 {
        0.0
    } else {
        ratio(num, den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    const W: bool = true;
    const B: bool = false;

    #[test]
    fn tally_counts_two_rows() {
        let t = tally(&[true, false], &[true, false], &[W, B]).unwrap();
        assert_eq!(t, GroupedTally::new(1, 1, 1, 0, 2, 1).unwrap());
    }

    #[test]
    fn tally_all_reject() {
        let t = tally(&[true, true, false, false], &[false; 4], &[W, W, B, B]).unwrap();
        assert_eq!(t.correct, 2);
        assert_eq!(t.accepted_favored, 0);
        assert_eq!(t.accepted_protected, 0);
    }

    #[test]
    fn tally_rejects_bad_shapes() {
        assert!(matches!(
            tally(&[true], &[true, false], &[W]),
            Err(Error::LengthMismatch {
                what: "decisions",
                ..
            })
        ));
        assert!(matches!(
            tally(&[true], &[true], &[W, B]),
            Err(Error::LengthMismatch { what: "groups", .. })
        ));
        assert!(matches!(tally(&[], &[], &[]), Err(Error::Empty(_))));
    }

    #[test]
    fn tally_constructor_checks_invariants() {
        assert!(GroupedTally::new(2, 2, 3, 0, 0, 0).is_err());
        assert!(GroupedTally::new(2, 2, 0, 0, 5, 0).is_err());
        assert!(GroupedTally::new(0, 0, 0, 0, 0, 0).is_err());
    }

    #[test]
    fn discrimination_examples() {
        let everyone = GroupedTally::new(3, 5, 3, 5, 0, 0).unwrap();
        assert_eq!(discrimination(&everyone).unwrap(), 0.0);

        let polar = GroupedTally::new(3, 5, 3, 0, 0, 0).unwrap();
        assert_eq!(discrimination(&polar).unwrap(), 1.0);

        // rates 0.3124 and 0.1135 as 3124/10000 and 1135/10000
        let data_row = GroupedTally::new(10_000, 10_000, 3124, 1135, 0, 0).unwrap();
        assert_abs_diff_eq!(discrimination(&data_row).unwrap(), 0.1989, epsilon = 1e-12);
        assert_abs_diff_eq!(discrimination(&data_row).unwrap(), 0.199, epsilon = 0.005);

        let one_group = GroupedTally::new(4, 0, 2, 0, 0, 0).unwrap();
        assert!(matches!(
            discrimination(&one_group),
            Err(Error::DegenerateGroup(_))
        ));
    }

    #[test]
    fn max_discrimination_examples() {
        assert_eq!(max_discrimination(0.5, 0.5).unwrap(), 1.0);
        assert_eq!(max_discrimination(0.0, 0.3).unwrap(), 0.0);
        assert_eq!(max_discrimination(1.0, 0.3).unwrap(), 0.0);
        // 0.247 / 0.675 = 0.36593
        assert_abs_diff_eq!(
            max_discrimination(0.247, 0.675).unwrap(),
            0.3659,
            epsilon = 1e-4
        );
        assert!(matches!(
            max_discrimination(0.5, 0.0),
            Err(Error::DegenerateGroup(_))
        ));
        assert!(matches!(
            max_discrimination(0.5, 1.0),
            Err(Error::DegenerateGroup(_))
        ));
        assert!(max_discrimination(1.5, 0.5).is_err());
    }

    #[test]
    fn normalized_discrimination_examples() {
        assert_abs_diff_eq!(
            normalized_discrimination(0.199, 0.3659),
            0.544,
            epsilon = 0.001
        );
        assert_eq!(normalized_discrimination(0.0, 0.7), 0.0);
        assert_eq!(normalized_discrimination(0.0, 0.0), 0.0);
        let nb_with_s =
            normalized_discrimination(0.135, max_discrimination(0.154, 0.6815).unwrap());
        assert_abs_diff_eq!(nb_with_s, 0.597, epsilon = 0.001);
    }

    #[test]
    fn accuracy_examples() {
        let labels = [true, false, true, true, false];
        let groups = [W, B, W, B, B];
        let same = tally(&labels, &labels, &groups).unwrap();
        assert_eq!(accuracy(&same).unwrap(), 1.0);
        let flipped: Vec<bool> = labels.iter().map(|y| !y).collect();
        let t = tally(&labels, &flipped, &groups).unwrap();
        assert_eq!(accuracy(&t).unwrap(), 0.0);
    }

    #[test]
    fn random_accuracy_examples() {
        for pi in [0.0, 0.2, 0.77, 1.0] {
            assert_abs_diff_eq!(random_accuracy(0.5, pi), 0.5, epsilon = 1e-15);
        }
        // 0.247*0.202 + 0.753*0.798 = 0.049894 + 0.600894
        assert_abs_diff_eq!(random_accuracy(0.247, 0.202), 0.650788, epsilon = 1e-12);
        assert_abs_diff_eq!(random_accuracy(0.247, 0.0), 0.753, epsilon = 1e-15);
    }

    #[test]
    fn kappa_examples() {
        assert_abs_diff_eq!(cohens_kappa(0.849, 0.6508).unwrap(), 0.567, epsilon = 0.001);
        assert_eq!(cohens_kappa(1.0, 0.3).unwrap(), 1.0);
        assert_eq!(cohens_kappa(0.3, 0.3).unwrap(), 0.0);
        assert_abs_diff_eq!(cohens_kappa(0.819, 0.6751).unwrap(), 0.443, epsilon = 0.001);
        assert!(matches!(
            cohens_kappa(1.0, 1.0),
            Err(Error::DegenerateLabels(_))
        ));
    }

    #[test]
    fn evaluate_perfect_and_all_accept() {
        let labels = [true, true, false, true, false, false, false, true];
        let groups = [W, W, W, B, B, B, B, W];
        let perfect = evaluate(&labels, &labels, &groups).unwrap();
        assert_eq!(perfect.kappa, 1.0);
        assert_eq!(perfect.accuracy, 1.0);
        // favored 3/4 accepted, protected 1/4
        assert_eq!(perfect.d, 0.5);

        let all = evaluate(&labels, &[true; 8], &groups).unwrap();
        assert_eq!(all.pi, 1.0);
        assert_eq!(all.d, 0.0);
        assert_eq!(all.d_max, 0.0);
        assert_eq!(all.delta, 0.0);
        assert_eq!(all.kappa, 0.0);
    }

    #[test]
    fn evaluate_matches_step_by_step_recomputation() {
        let labels = [
            true, false, false, true, true, false, true, false, false, false,
        ];
        let decisions = [
            true, true, false, false, true, false, true, false, true, false,
        ];
        let groups = [W, W, W, W, W, W, B, B, B, B];
        let m = evaluate(&labels, &decisions, &groups).unwrap();
        // favored: 6 rows, accepted 3; protected: 4 rows, accepted 2
        let pi = 5.0 / 10.0;
        let alpha = 6.0 / 10.0;
        let pi0 = 4.0 / 10.0;
        let a = 7.0 / 10.0;
        let r = pi0 * pi + (1.0 - pi0) * (1.0 - pi);
        let d = 3.0 / 6.0 - 2.0 / 4.0;
        let d_max = f64::min(pi / alpha, (1.0 - pi) / (1.0 - alpha));
        assert_abs_diff_eq!(m.pi, pi, epsilon = 1e-15);
        assert_abs_diff_eq!(m.accuracy, a, epsilon = 1e-15);
        assert_abs_diff_eq!(m.random_accuracy, r, epsilon = 1e-15);
        assert_abs_diff_eq!(m.kappa, (a - r) / (1.0 - r), epsilon = 1e-15);
        assert_abs_diff_eq!(m.d, d, epsilon = 1e-15);
        assert_abs_diff_eq!(m.d_max, d_max, epsilon = 1e-15);
        assert_abs_diff_eq!(m.delta, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn reverse_discrimination_is_not_bounded_by_d_max() {
        // all protected accepted, no favored: pi = 5/7, alpha = 2/7
        let t = GroupedTally::new(2, 5, 0, 5, 1, 1).unwrap();
        let m = MetricBundle::from_tally(&t).unwrap();
        assert_eq!(m.d, -1.0);
        assert_abs_diff_eq!(m.d_max, 0.4, epsilon = 1e-15);
        assert_abs_diff_eq!(m.delta, -2.5, epsilon = 1e-12);
    }

    #[test]
    fn evaluate_rejects_constant_everything() {
        let labels = [true; 4];
        let err = evaluate(&labels, &labels, &[W, B, W, B]).unwrap_err();
        assert!(matches!(err, Error::DegenerateLabels(_)));
    }

    fn tally_strategy() -> impl Strategy<Value = GroupedTally> {
        (1u64..200, 1u64..200).prop_flat_map(|(nf, np)| {
            (0..=nf, 0..=np, 0..=nf + np, 0..=nf + np).prop_map(move |(af, ap, c, p)| {
                GroupedTally {
                    n_favored: nf,
                    n_protected: np,
                    accepted_favored: af,
                    accepted_protected: ap,
                    correct: c,
                    positives_true: p,
                }
            })
        })
    }

    proptest! {
        #[test]
        fn bundle_agrees_with_scalar_formulas(t in tally_strategy()) {
            prop_assume!(t.positives_true != 0 && t.positives_true != t.total());
            let m = MetricBundle::from_tally(&t).unwrap();
            let d_max = max_discrimination(t.pi(), t.alpha()).unwrap();
            prop_assert!((m.d_max - d_max).abs() < 1e-12);
            prop_assert!((m.d - discrimination(&t).unwrap()).abs() < 1e-12);
            prop_assert!((m.delta - normalized_discrimination(m.d, m.d_max)).abs() < 1e-9);
            let r = random_accuracy(t.pi0(), t.pi());
            prop_assert!((m.random_accuracy - r).abs() < 1e-12);
            prop_assert!((m.kappa - cohens_kappa(accuracy(&t).unwrap(), r).unwrap()).abs() < 1e-9);
            if m.d_max == 0.0 {
                prop_assert_eq!(m.d, 0.0);
                prop_assert_eq!(m.delta, 0.0);
            }
            // d_max bounds the favored side; the mirrored bound (groups
            // swapped) limits reverse discrimination
            let eps = 1.0 / t.n_favored.min(t.n_protected) as f64;
            prop_assert!(m.d <= m.d_max + eps);
            prop_assert!(m.delta <= 1.0 + eps);
            let reverse_max = max_discrimination(t.pi(), 1.0 - t.alpha()).unwrap();
            prop_assert!(-m.d <= reverse_max + eps);
        }

        #[test]
        fn more_favored_acceptances_raise_discrimination(t in tally_strategy()) {
            prop_assume!(t.accepted_favored < t.n_favored);
            let mut more = t;
            more.accepted_favored += 1;
            prop_assert!(discrimination(&more).unwrap() > discrimination(&t).unwrap());
        }

        #[test]
        fn swapping_same_group_decisions_keeps_metrics(
            rows in proptest::collection::vec((any::<bool>(), any::<bool>(), any::<bool>()), 2..40),
            i in 0usize..40,
            j in 0usize..40,
        ) {
            let n = rows.len();
            let (i, j) = (i % n, j % n);
            let labels: Vec<bool> = rows.iter().map(|r| r.0).collect();
            let mut decisions: Vec<bool> = rows.iter().map(|r| r.1).collect();
            let groups: Vec<bool> = rows.iter().map(|r| r.2).collect();
            prop_assume!(groups.iter().any(|&g| g) && groups.iter().any(|&g| !g));
            prop_assume!(labels.iter().any(|&y| y) && labels.iter().any(|&y| !y));
            prop_assume!(groups[i] == groups[j] && labels[i] == labels[j]);
            let before = evaluate(&labels, &decisions, &groups).unwrap();
            decisions.swap(i, j);
            let after = evaluate(&labels, &decisions, &groups).unwrap();
            prop_assert_eq!(before, after);
        }
    }
}
