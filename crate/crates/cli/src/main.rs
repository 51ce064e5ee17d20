//! `fairtrade`: command-line runner for accuracy/discrimination tradeoff
//! experiments on a CSV with a binary label and a binary protected attribute.
//!
//! Exit codes: 0 success, 2 usage error, 3 data or I/O error, 4 infeasible request.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{ArgGroup, Args, Parser, Subcommand};
use fairtrade::baselines::OracleStrategy;
use fairtrade::classifiers::ClassifierKind;
use fairtrade::dataset::Schema;
use fairtrade::sweep::ThresholdGrid;

/// Seed used when neither `--seed` nor `FAIRTRADE_SEED` is given.
pub const DEFAULT_SEED: u64 = 42;

const EXIT_DATA: u8 = 3;
const EXIT_INFEASIBLE: u8 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "fairtrade",
    version,
    about = "Accuracy versus discrimination experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the data's acceptance rate, group balance and discrimination.
    Summarize {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long)]
        output_dir: PathBuf,
    },
    /// Fit a classifier on the training split and save it.
    Train {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, default_value = "logistic")]
        classifier: ClassifierKind,
        /// Relabel the training split with a plan written by `massage` first.
        #[arg(long)]
        massage_plan: Option<PathBuf>,
        #[arg(long)]
        output_dir: PathBuf,
    },
    /// Metrics of saved or freshly trained models at every threshold of a grid.
    #[command(group(ArgGroup::new("source").required(true).multiple(true).args(["model", "classifier"])))]
    Sweep {
        #[command(flatten)]
        data: DataArgs,
        /// Saved model file; repeat to sweep several.
        #[arg(long)]
        model: Vec<PathBuf>,
        /// Train this classifier on the training split and sweep it.
        #[arg(long)]
        classifier: Option<ClassifierKind>,
        /// `unique` (one threshold per distinct score) or `uniform:N`.
        #[arg(long, default_value = "unique")]
        grid: ThresholdGrid,
        #[arg(long)]
        output_dir: PathBuf,
    },
    /// Oracle frontiers on the test split: true labels with flipped decisions.
    Oracle {
        #[command(flatten)]
        data: DataArgs,
        /// `decrease-favored`, `increase-protected` or `change-both`; repeatable.
        /// Defaults to all three.
        #[arg(long)]
        strategy: Vec<OracleStrategy>,
        /// `steps:N` (N+1 targets from d0 down to 0) or a comma-separated list.
        #[arg(long, default_value = "steps:20")]
        d_grid: DGrid,
        #[arg(long)]
        output_dir: PathBuf,
    },
    /// Plan the training-label relabeling that removes discrimination.
    Massage {
        #[command(flatten)]
        data: DataArgs,
        /// Classifier used to rank training rows.
        #[arg(long, default_value = "logistic")]
        classifier: ClassifierKind,
        #[arg(long)]
        output_dir: PathBuf,
    },
    /// Print one row per model (pi, A, d, kappa, delta; all x100) on the test split.
    #[command(group(ArgGroup::new("source").required(true).multiple(true).args(["model", "oracle"])))]
    Evaluate {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long)]
        model: Vec<PathBuf>,
        /// Include the true labels as a row.
        #[arg(long)]
        oracle: bool,
        #[arg(long, default_value_t = 0.5)]
        threshold: f64,
        #[arg(long)]
        output_dir: Option<PathBuf>,
    },
    /// Render SVG charts from sweep and frontier tables.
    Report {
        /// `.dat` table; repeatable.
        #[arg(long, required = true)]
        input: Vec<PathBuf>,
        #[arg(long)]
        output_dir: PathBuf,
    },
}

#[derive(Debug, Args)]
struct DataArgs {
    /// CSV file with a header row; `?` marks a missing cell.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    label_col: String,
    /// Label value meaning the positive outcome.
    #[arg(long)]
    positive_value: String,
    #[arg(long)]
    group_col: String,
    /// Group value meaning the favored group.
    #[arg(long)]
    favored_value: String,
    /// Use the protected attribute as a feature.
    #[arg(long)]
    with_s: bool,
    #[arg(long, env = "FAIRTRADE_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Fraction of rows in the training split.
    #[arg(long, default_value_t = 0.5)]
    split: f64,
}

impl DataArgs {
    fn schema(&self) -> Schema {
        Schema::new(
            &self.label_col,
            &self.positive_value,
            &self.group_col,
            &self.favored_value,
        )
        .with_s(self.with_s)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum DGrid {
    Steps(usize),
    /// Sorted descending.
    List(Vec<f64>),
}

impl FromStr for DGrid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if let Some(n) = s.strip_prefix("steps:") {
            return match n.parse::<usize>() {
                Ok(n) if n >= 1 => Ok(DGrid::Steps(n)),
                _ => Err(format!("`{s}`: steps must be a positive integer")),
            };
        }
        let mut list = s
            .split(',')
            .map(|v| v.trim().parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| format!("`{s}`: {e}"))?;
        if list.iter().any(|d| !d.is_finite()) {
            return Err(format!("`{s}`: targets must be finite"));
        }
        list.sort_by(|a, b| b.total_cmp(a));
        list.dedup();
        Ok(DGrid::List(list))
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    let infeasible = err.chain().any(|e| {
        e.downcast_ref::<fairtrade::Error>()
            .is_some_and(fairtrade::Error::is_infeasible)
    });
    if infeasible {
        EXIT_INFEASIBLE
    } else {
        EXIT_DATA
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
