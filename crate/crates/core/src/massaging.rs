//! Label massaging: relabel the lowest-ranked positives of the advantaged
//! group and the same number of highest-ranked negatives of the other group so
//! the training discrimination is zero and the positive rate is unchanged.
//!
//! The relabel count solving `(P_f - m)/n_f = (P_p + m)/n_p` is
//! `m = (P_f n_p - P_p n_f) / n = n_f n_p d0 / n`, rounded half-up.

use std::fmt::Write as _;
use std::path::Path;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::metrics;

/// Indices to relabel. `demote` rows go from positive to negative, `promote`
/// rows from negative to positive; both lists have the same length.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MassagePlan {
    pub demote: Vec<usize>,
    pub promote: Vec<usize>,
}

impl MassagePlan {
    pub fn m(&self) -> usize {
        self.demote.len()
    }

    pub fn is_empty(&self) -> bool {
        self.demote.is_empty()
    }

    /// Two-column audit file. Comment lines carry the manifest hash.
    pub fn to_tsv(&self, manifest_hash: &str) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# fairtrade massage plan");
        let _ = writeln!(out, "# manifest = {manifest_hash}");
        let _ = writeln!(out, "demote\tpromote");
        for (d, p) in self.demote.iter().zip(&self.promote) {
            let _ = writeln!(out, "{d}\t{p}");
        }
        out
    }

    /// Parse [`MassagePlan::to_tsv`] output, returning the plan and its
    /// manifest hash.
    pub fn parse_tsv(text: &str, origin: &Path) -> Result<(MassagePlan, String)> {
        let mut plan = MassagePlan::default();
        let mut manifest = None;
        let mut saw_header = false;
        for (i, line) in text.lines().enumerate() {
            let no = i + 1;
            if let Some(comment) = line.strip_prefix('#') {
                if let Some(hash) = comment.trim().strip_prefix("manifest = ") {
                    manifest = Some(hash.trim().to_string());
                }
                continue;
            }
            if line.trim().is_empty() {
                continue;
            }
            if !saw_header {
                if line != "demote\tpromote" {
                    return Err(Error::parse(
                        origin,
                        no,
                        "expected header `demote<TAB>promote`",
                    ));
                }
                saw_header = true;
                continue;
            }
            let mut cells = line.split('\t').map(|c| c.trim().parse::<usize>());
            match (cells.next(), cells.next(), cells.next()) {
                (Some(Ok(d)), Some(Ok(p)), None) => {
                    plan.demote.push(d);
                    plan.promote.push(p);
                }
                _ => return Err(Error::parse(origin, no, "expected two row indices")),
            }
        }
        if !saw_header {
            return Err(Error::parse(origin, 0, "missing header"));
        }
        let manifest = manifest.ok_or_else(|| Error::parse(origin, 0, "missing manifest line"))?;
        Ok((plan, manifest))
    }
}

/// Rank training rows by `scores` and pick the rows to relabel.
///
/// When the favored group is the disadvantaged one in `train` (negative
/// discrimination) the roles of the two groups swap.
pub fn plan_massage(train: &Dataset, scores: &[f64]) -> Result<MassagePlan> {
    if scores.len() != train.n() {
        return Err(Error::LengthMismatch {
            what: "scores",
            got: scores.len(),
            expected: train.n(),
        });
    }
    let t = metrics::tally(train.labels(), train.labels(), train.groups())?;
    if t.n_favored == 0 || t.n_protected == 0 {
        return Err(Error::DegenerateGroup("massaging needs both groups".into()));
    }
    let gap = t.accepted_favored as i128 * t.n_protected as i128
        - t.accepted_protected as i128 * t.n_favored as i128;
    let advantaged = gap >= 0;
    let n = t.total() as i128;
    let m = ((2 * gap.abs() + n) / (2 * n)) as usize;

    let mut demote: Vec<usize> = (0..train.n())
        .filter(|&i| train.groups()[i] == advantaged && train.labels()[i])
        .collect();
    let mut promote: Vec<usize> = (0..train.n())
        .filter(|&i| train.groups()[i] != advantaged && !train.labels()[i])
        .collect();
    if m > demote.len() || m > promote.len() {
        return Err(Error::Infeasible(format!(
            "massaging needs {m} relabels per side but only {} positives / {} negatives are available",
            demote.len(),
            promote.len()
        )));
    }
    demote.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]).then(a.cmp(&b)));
    promote.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    demote.truncate(m);
    promote.truncate(m);
    Ok(MassagePlan { demote, promote })
}

/// Copy of `train` with the plan's labels flipped; features and groups are untouched.
pub fn apply_massage(train: &Dataset, plan: &MassagePlan) -> Result<Dataset> {
    if plan.demote.len() != plan.promote.len() {
        return Err(Error::InvalidArgument(format!(
            "plan has {} demotions but {} promotions",
            plan.demote.len(),
            plan.promote.len()
        )));
    }
    let n = train.n();
    let mut labels = train.labels().to_vec();
    let mut touched = vec![false; n];
    let roles = plan
        .demote
        .iter()
        .map(|&i| (i, false))
        .chain(plan.promote.iter().map(|&i| (i, true)));
    // demoted rows share one group, promoted rows the other
    let mut demote_group: Option<bool> = None;
    for (i, promote) in roles {
        if i >= n {
            return Err(Error::InvalidArgument(format!(
                "plan index {i} out of range for {n} rows"
            )));
        }
        if touched[i] {
            return Err(Error::InvalidArgument(format!(
                "row {i} appears twice in the plan"
            )));
        }
        touched[i] = true;
        let side = train.groups()[i] ^ promote;
        if side != *demote_group.get_or_insert(side) {
            return Err(Error::InvalidArgument(format!(
                "row {i} is in the wrong group for its role"
            )));
        }
        if labels[i] == promote {
            return Err(Error::InvalidArgument(format!(
                "row {i} already has the label the plan assigns"
            )));
        }
        labels[i] = promote;
    }
    train.with_labels(labels)
}
