//! Threshold sweeps: metrics of one score vector at every threshold of a grid,
//! from "reject everyone" to "accept everyone".

use std::str::FromStr;

use crate::dat::DatTable;
use crate::error::{Error, Result};
use crate::metrics::{self, GroupedTally, MetricBundle};

/// Column names of a sweep `.dat` file, in order.
pub const SWEEP_COLUMNS: [&str; 10] = [
    "threshold",
    "pi",
    "accuracy",
    "kappa",
    "d",
    "d_max",
    "delta",
    "d_data",
    "delta_data",
    "pi_data",
];

/// Tables are aligned on the nearest acceptance rate within this distance.
pub const ALIGN_TOLERANCE: f64 = 0.01;

/// Threshold used for the accept-everyone row when some score is exactly 0
/// (decisions are `score > threshold`).
pub const BELOW_ALL_SCORES: f64 = -1.0;

#[derive(Debug, Clone, PartialEq)]
pub enum ThresholdGrid {
    /// One threshold between each pair of adjacent distinct scores.
    PerUniqueScore,
    /// `n` evenly spaced thresholds from 1 down to 0.
    Uniform(usize),
    Explicit(Vec<f64>),
}

impl FromStr for ThresholdGrid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "unique" {
            return Ok(ThresholdGrid::PerUniqueScore);
        }
        if let Some(n) = s.strip_prefix("uniform:") {
            let n: usize = n
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad grid size in `{s}`")))?;
            if n < 2 {
                return Err(Error::InvalidArgument(
                    "uniform grid needs at least 2 points".into(),
                ));
            }
            return Ok(ThresholdGrid::Uniform(n));
        }
        Err(Error::InvalidArgument(format!(
            "grid must be `unique` or `uniform:N`, got `{s}`"
        )))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub threshold: f64,
    pub pi: f64,
    pub accuracy: f64,
    pub kappa: f64,
    pub d: f64,
    pub d_max: f64,
    pub delta: f64,
    pub d_data: f64,
    pub delta_data: f64,
    pub pi_data: f64,
}

impl SweepRow {
    fn new(threshold: f64, m: &MetricBundle, data: &MetricBundle) -> Self {
        SweepRow {
            threshold,
            pi: m.pi,
            accuracy: m.accuracy,
            kappa: m.kappa,
            d: m.d,
            d_max: m.d_max,
            delta: m.delta,
            d_data: data.d,
            delta_data: data.delta,
            pi_data: data.pi,
        }
    }

    fn values(&self) -> [f64; 10] {
        [
            self.threshold,
            self.pi,
            self.accuracy,
            self.kappa,
            self.d,
            self.d_max,
            self.delta,
            self.d_data,
            self.delta_data,
            self.pi_data,
        ]
    }

    fn from_values(v: &[f64]) -> Self {
        SweepRow {
            threshold: v[0],
            pi: v[1],
            accuracy: v[2],
            kappa: v[3],
            d: v[4],
            d_max: v[5],
            delta: v[6],
            d_data: v[7],
            delta_data: v[8],
            pi_data: v[9],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SweepMeta {
    /// Variant id, e.g. `logistic-no-s`.
    pub classifier: String,
    pub manifest_hash: String,
    pub seed: u64,
}

/// Rows ordered by descending threshold (non-decreasing acceptance rate).
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub meta: SweepMeta,
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    pub fn to_dat(&self) -> DatTable {
        let mut t = DatTable::new(SWEEP_COLUMNS.iter().map(|c| c.to_string()).collect())
            .with_meta("kind", "sweep")
            .with_meta("classifier", &self.meta.classifier)
            .with_meta("manifest", &self.meta.manifest_hash)
            .with_meta("seed", self.meta.seed);
        for row in &self.rows {
            t.push_row(row.values().to_vec());
        }
        t
    }

    pub fn from_dat(t: &DatTable) -> Result<Self> {
        if t.columns.iter().map(String::as_str).ne(SWEEP_COLUMNS) {
            return Err(Error::InvalidArgument(format!(
                "not a sweep table: columns {:?}",
                t.columns
            )));
        }
        let seed = match t.meta("seed") {
            Some(s) => s
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad seed `{s}`")))?,
            None => 0,
        };
        Ok(SweepTable {
            meta: SweepMeta {
                classifier: t.meta("classifier").unwrap_or_default().to_string(),
                manifest_hash: t.meta("manifest").unwrap_or_default().to_string(),
                seed,
            },
            rows: t.rows.iter().map(|r| SweepRow::from_values(r)).collect(),
        })
    }

    /// Row whose acceptance rate is closest to `pi` (earliest on ties).
    pub fn nearest(&self, pi: f64) -> Option<&SweepRow> {
        let k = self.rows.partition_point(|r| r.pi < pi);
        let candidates = [k.checked_sub(1), Some(k)];
        candidates
            .into_iter()
            .flatten()
            .filter_map(|i| self.rows.get(i))
            .min_by(|a, b| (a.pi - pi).abs().total_cmp(&(b.pi - pi).abs()))
    }
}

/// Thresholds for `grid`, descending, with both extremes present: the first
/// rejects every score and the last accepts every score.
pub fn thresholds(scores: &[f64], grid: &ThresholdGrid) -> Result<Vec<f64>> {
    if scores.is_empty() {
        return Err(Error::Empty("scores"));
    }
    let mut distinct: Vec<f64> = scores.to_vec();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    let (lo, hi) = (distinct[0], distinct[distinct.len() - 1]);

    let mut out: Vec<f64> = match grid {
        ThresholdGrid::PerUniqueScore => distinct
            .windows(2)
            .rev()
            .map(|w| 0.5 * (w[0] + w[1]))
            .collect(),
        ThresholdGrid::Uniform(n) => {
            if *n < 2 {
                return Err(Error::InvalidArgument(
                    "uniform grid needs at least 2 points".into(),
                ));
            }
            (0..*n).map(|i| 1.0 - i as f64 / (*n - 1) as f64).collect()
        }
        ThresholdGrid::Explicit(list) => {
            if list.is_empty() {
                return Err(Error::Empty("threshold grid"));
            }
            if list.iter().any(|t| !t.is_finite()) {
                return Err(Error::InvalidArgument("thresholds must be finite".into()));
            }
            let mut l = list.clone();
            l.sort_by(|a, b| b.total_cmp(a));
            l.dedup();
            l
        }
    };
    if out.first().is_none_or(|&t| t < hi) {
        out.insert(0, hi.max(1.0));
    }
    if out.last().is_none_or(|&t| t >= lo) {
        out.push(if lo > 0.0 { 0.0 } else { BELOW_ALL_SCORES });
    }
    Ok(out)
}

/// Evaluate `scores` at every threshold of `grid`.
///
/// Rows are computed incrementally from a single descending pass over the
/// scores; each row equals `evaluate(labels, predict_at(scores, t), groups)`.
pub fn sweep(
    scores: &[f64],
    labels: &[bool],
    groups: &[bool],
    grid: &ThresholdGrid,
    meta: SweepMeta,
) -> Result<SweepTable> {
    let n = labels.len();
    if scores.len() != n {
        return Err(Error::LengthMismatch {
            what: "scores",
            got: scores.len(),
            expected: n,
        });
    }
    let data = metrics::evaluate(labels, labels, groups)?;
    let thresholds = thresholds(scores, grid)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));

    let base = metrics::tally(labels, &vec![false; n], groups)?;
    let mut t = GroupedTally { ..base };
    let mut next = 0;
    let mut rows = Vec::with_capacity(thresholds.len());
    for &threshold in &thresholds {
        while next < n && scores[order[next]] > threshold {
            let i = order[next];
            if groups[i] {
                t.accepted_favored += 1;
            } else {
                t.accepted_protected += 1;
            }
            if labels[i] {
                t.correct += 1;
            } else {
                t.correct -= 1;
            }
            next += 1;
        }
        rows.push(SweepRow::new(
            threshold,
            &MetricBundle::from_tally(&t)?,
            &data,
        ));
    }
    Ok(SweepTable { meta, rows })
}

/// Several sweeps of the same data aligned on the acceptance rate of the
/// first (reference) table.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub variants: Vec<String>,
    pub manifest_hash: String,
    pub rows: Vec<ComparisonRow>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub pi: f64,
    /// One entry per table; `None` when that table has no row within
    /// [`ALIGN_TOLERANCE`] of `pi`.
    pub entries: Vec<Option<SweepRow>>,
}

impl Comparison {
    /// Largest |kappa| or |delta| difference from the reference over aligned rows.
    pub fn max_abs_difference(&self) -> f64 {
        self.rows
            .iter()
            .flat_map(|row| {
                let reference = row.entries[0].expect("reference aligns with itself");
                row.entries[1..].iter().flatten().map(move |e| {
                    (e.kappa - reference.kappa)
                        .abs()
                        .max((e.delta - reference.delta).abs())
                })
            })
            .fold(0.0, f64::max)
    }

    /// Mean delta of table `j` over aligned rows whose reference rate lies in `[lo, hi]`.
    pub fn mean_delta(&self, j: usize, lo: f64, hi: f64) -> Option<f64> {
        let vals: Vec<f64> = self
            .rows
            .iter()
            .filter(|r| (lo..=hi).contains(&r.pi))
            .filter_map(|r| r.entries[j].map(|e| e.delta))
            .collect();
        (!vals.is_empty()).then(|| vals.iter().sum::<f64>() / vals.len() as f64)
    }

    pub fn to_dat(&self) -> DatTable {
        let mut columns = vec!["pi".to_string()];
        for v in &self.variants {
            columns.push(format!("pi:{v}"));
            columns.push(format!("kappa:{v}"));
            columns.push(format!("delta:{v}"));
        }
        let mut t = DatTable::new(columns)
            .with_meta("kind", "comparison")
            .with_meta("manifest", &self.manifest_hash)
            .with_meta("variants", self.variants.join(","));
        for row in &self.rows {
            let mut values = vec![row.pi];
            for e in &row.entries {
                match e {
                    Some(r) => values.extend([r.pi, r.kappa, r.delta]),
                    None => values.extend([f64::NAN; 3]),
                }
            }
            t.push_row(values);
        }
        t
    }
}

pub fn compare_sweeps(tables: &[SweepTable]) -> Result<Comparison> {
    if tables.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "comparison needs at least two sweeps, got {}",
            tables.len()
        )));
    }
    let manifest = &tables[0].meta.manifest_hash;
    if let Some(other) = tables.iter().find(|t| &t.meta.manifest_hash != manifest) {
        return Err(Error::ManifestMismatch {
            expected: manifest.clone(),
            found: other.meta.manifest_hash.clone(),
        });
    }
    let rows = tables[0]
        .rows
        .iter()
        .map(|reference| ComparisonRow {
            pi: reference.pi,
            entries: std::iter::once(Some(*reference))
                .chain(tables[1..].iter().map(|t| {
                    t.nearest(reference.pi)
                        .filter(|r| (r.pi - reference.pi).abs() <= ALIGN_TOLERANCE)
                        .copied()
                }))
                .collect(),
        })
        .collect();
    Ok(Comparison {
        variants: tables.iter().map(|t| t.meta.classifier.clone()).collect(),
        manifest_hash: manifest.clone(),
        rows,
    })
}
