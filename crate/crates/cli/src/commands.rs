use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use fairtrade::baselines::{
    default_d_grid, frontier_to_dat, oracle_frontier, FrontierEntry, OracleStrategy,
};
use fairtrade::classifiers::{
    predict_at, train_logistic, train_naive_bayes, ClassifierKind, LogisticConfig, Model,
    ModelFile, NaiveBayesConfig,
};
use fairtrade::dat::DatTable;
use fairtrade::dataset::{prepare, Dataset, Prepared, MANIFEST_FILE};
use fairtrade::massaging::{apply_massage, plan_massage, MassagePlan};
use fairtrade::plot::standard_figures;
use fairtrade::sweep::{compare_sweeps, sweep, SweepMeta, ThresholdGrid};
use fairtrade::{evaluate, MetricBundle};

use crate::{Command, DGrid, DataArgs};

const PLAN_FILE: &str = "massage_plan.tsv";
const EVALUATION_FILE: &str = "evaluation.txt";

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Summarize { data, output_dir } => summarize(&data, &output_dir),
        Command::Train {
            data,
            classifier,
            massage_plan,
            output_dir,
        } => train(&data, classifier, massage_plan.as_deref(), &output_dir),
        Command::Sweep {
            data,
            model,
            classifier,
            grid,
            output_dir,
        } => cmd_sweep(&data, &model, classifier, &grid, &output_dir),
        Command::Oracle {
            data,
            strategy,
            d_grid,
            output_dir,
        } => oracle(&data, &strategy, &d_grid, &output_dir),
        Command::Massage {
            data,
            classifier,
            output_dir,
        } => massage(&data, classifier, &output_dir),
        Command::Evaluate {
            data,
            model,
            oracle,
            threshold,
            output_dir,
        } => cmd_evaluate(&data, &model, oracle, threshold, output_dir.as_deref()),
        Command::Report { input, output_dir } => report(&input, &output_dir),
    }
}

fn load(data: &DataArgs) -> Result<Prepared> {
    prepare(&data.input, &data.schema(), data.seed, data.split)
        .with_context(|| format!("loading {}", data.input.display()))
}

/// Create `dir` and write the run's manifest into it.
fn open_output(dir: &Path, prepared: &Prepared) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    prepared.manifest.write_to_dir(dir)?;
    Ok(())
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))?;
    log::info!("wrote {}", path.display());
    Ok(())
}

fn variant(kind: ClassifierKind, with_s: bool) -> String {
    format!("{}-{}", kind.as_str(), if with_s { "s" } else { "no-s" })
}

fn fit(kind: ClassifierKind, train: &Dataset) -> Result<Model> {
    let model = match kind {
        ClassifierKind::Logistic => {
            Model::Logistic(train_logistic(train, &LogisticConfig::default())?)
        }
        ClassifierKind::NaiveBayes => {
            Model::NaiveBayes(train_naive_bayes(train, &NaiveBayesConfig::default())?)
        }
    };
    Ok(model)
}

fn load_model(path: &Path, prepared: &Prepared) -> Result<ModelFile> {
    let file = ModelFile::load(path)?;
    prepared
        .manifest
        .check(&file.manifest_hash)
        .with_context(|| format!("model {}", path.display()))?;
    Ok(file)
}

fn summarize(data: &DataArgs, output_dir: &Path) -> Result<()> {
    let prepared = load(data)?;
    open_output(output_dir, &prepared)?;
    let s = &prepared.summary;
    println!("rows      {}", s.n);
    println!("train     {}", prepared.train.n());
    println!("test      {}", prepared.test.n());
    println!("alpha     {:.4}", s.alpha);
    println!("pi0       {:.4}", s.pi0);
    println!("d0        {:.4}", s.d0);
    println!("delta0    {:.4}", s.delta0);
    println!("manifest  {}", prepared.manifest.hash());
    Ok(())
}

fn train(
    data: &DataArgs,
    kind: ClassifierKind,
    plan_path: Option<&Path>,
    output_dir: &Path,
) -> Result<()> {
    let prepared = load(data)?;
    let hash = prepared.manifest.hash();
    let mut name = variant(kind, data.with_s);
    let train_set = match plan_path {
        Some(path) => {
            let text =
                fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let (plan, plan_hash) = MassagePlan::parse_tsv(&text, path)?;
            prepared
                .manifest
                .check(&plan_hash)
                .with_context(|| format!("massage plan {}", path.display()))?;
            name.push_str("-massaged");
            apply_massage(&prepared.train, &plan).context("applying massage plan")?
        }
        None => prepared.train.clone(),
    };
    let model = fit(kind, &train_set).with_context(|| format!("training {name}"))?;
    open_output(output_dir, &prepared)?;
    let file = ModelFile {
        model,
        variant: name.clone(),
        manifest_hash: hash,
    };
    let path = output_dir.join(format!("{name}.model"));
    write(&path, &file.to_text())?;
    println!("{}", path.display());
    Ok(())
}

fn cmd_sweep(
    data: &DataArgs,
    models: &[PathBuf],
    classifier: Option<ClassifierKind>,
    grid: &ThresholdGrid,
    output_dir: &Path,
) -> Result<()> {
    let prepared = load(data)?;
    let hash = prepared.manifest.hash();
    let mut files = Vec::new();
    for path in models {
        files.push(load_model(path, &prepared)?);
    }
    if let Some(kind) = classifier {
        let name = variant(kind, data.with_s);
        files.push(ModelFile {
            model: fit(kind, &prepared.train).with_context(|| format!("training {name}"))?,
            variant: name,
            manifest_hash: hash.clone(),
        });
    }
    let names: BTreeSet<&str> = files.iter().map(|f| f.variant.as_str()).collect();
    if names.len() != files.len() {
        bail!("two models share a variant name; sweep them into separate directories");
    }

    let test = &prepared.test;
    let mut tables = Vec::new();
    for file in &files {
        let scores = file
            .model
            .score(test)
            .with_context(|| format!("scoring {}", file.variant))?;
        let meta = SweepMeta {
            classifier: file.variant.clone(),
            manifest_hash: hash.clone(),
            seed: data.seed,
        };
        tables.push(sweep(&scores, test.labels(), test.groups(), grid, meta)?);
    }

    open_output(output_dir, &prepared)?;
    for t in &tables {
        let path = output_dir.join(format!("sweep_{}.dat", t.meta.classifier));
        write(&path, &t.to_dat().to_text())?;
        println!("{}", path.display());
    }
    if tables.len() >= 2 {
        let path = output_dir.join("comparison.dat");
        write(&path, &compare_sweeps(&tables)?.to_dat().to_text())?;
        println!("{}", path.display());
    }
    Ok(())
}

fn oracle(
    data: &DataArgs,
    strategies: &[OracleStrategy],
    d_grid: &DGrid,
    output_dir: &Path,
) -> Result<()> {
    let prepared = load(data)?;
    let test = &prepared.test;
    let targets = match d_grid {
        DGrid::Steps(n) => default_d_grid(test.summarize()?.d0, *n),
        DGrid::List(list) => list.clone(),
    };
    let strategies = if strategies.is_empty() {
        OracleStrategy::ALL.to_vec()
    } else {
        strategies.to_vec()
    };
    let hash = prepared.manifest.hash();
    let mut tables = Vec::new();
    for &strategy in &strategies {
        let entries = oracle_frontier(test.labels(), test.groups(), strategy, &targets)
            .with_context(|| format!("oracle {strategy}"))?;
        if entries.iter().all(|e| e.point().is_none()) {
            let reason = match &entries[0] {
                FrontierEntry::Unreachable { reason, .. } => reason.clone(),
                FrontierEntry::Reached(_) => unreachable!(),
            };
            return Err(fairtrade::Error::Infeasible(reason))
                .with_context(|| format!("oracle {strategy}: no target is reachable"));
        }
        for e in &entries {
            if let FrontierEntry::Unreachable { target_d, reason } = e {
                log::warn!("{strategy}: target d={target_d} unreachable: {reason}");
            }
        }
        tables.push((strategy, frontier_to_dat(strategy, &entries, &hash)));
    }
    open_output(output_dir, &prepared)?;
    for (strategy, table) in &tables {
        let path = output_dir.join(format!("frontier_{strategy}.dat"));
        write(&path, &table.to_text())?;
        println!("{}", path.display());
    }
    Ok(())
}

fn massage(data: &DataArgs, kind: ClassifierKind, output_dir: &Path) -> Result<()> {
    let prepared = load(data)?;
    let train = &prepared.train;
    let ranker = fit(kind, train).context("training the ranker")?;
    let scores = ranker.score(train)?;
    let plan = plan_massage(train, &scores).context("planning massage")?;
    let before = train.summarize()?;
    let after = apply_massage(train, &plan)?.summarize()?;
    open_output(output_dir, &prepared)?;
    let path = output_dir.join(PLAN_FILE);
    write(&path, &plan.to_tsv(&prepared.manifest.hash()))?;
    println!("relabeled {} pairs", plan.m());
    println!("train d   {:.4} -> {:.4}", before.d0, after.d0);
    println!("train pi0 {:.4} -> {:.4}", before.pi0, after.pi0);
    println!("{}", path.display());
    Ok(())
}

fn percent(x: f64) -> String {
    // +0.0 folds -0.0 so a tiny negative never prints as "-0.0"
    let v = (100.0 * x * 10.0).round() / 10.0 + 0.0;
    format!("{v:>7.1}")
}

fn table_row(name: &str, m: &MetricBundle) -> String {
    format!(
        "{name:<24}{}{}{}{}{}",
        percent(m.pi),
        percent(m.accuracy),
        percent(m.d),
        percent(m.kappa),
        percent(m.delta)
    )
}

fn cmd_evaluate(
    data: &DataArgs,
    models: &[PathBuf],
    oracle: bool,
    threshold: f64,
    output_dir: Option<&Path>,
) -> Result<()> {
    if !threshold.is_finite() {
        bail!("threshold must be finite");
    }
    let prepared = load(data)?;
    let test = &prepared.test;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<24}{:>7}{:>7}{:>7}{:>7}{:>7}",
        "variant", "pi", "A", "d", "kappa", "delta"
    );
    if oracle {
        let m = evaluate(test.labels(), test.labels(), test.groups())?;
        let _ = writeln!(out, "{}", table_row("oracle", &m));
    }
    for path in models {
        let file = load_model(path, &prepared)?;
        let scores = file
            .model
            .score(test)
            .with_context(|| format!("scoring {}", file.variant))?;
        let decisions = predict_at(&scores, threshold);
        let m = evaluate(test.labels(), &decisions, test.groups())?;
        let _ = writeln!(out, "{}", table_row(&file.variant, &m));
    }
    print!("{out}");
    if let Some(dir) = output_dir {
        open_output(dir, &prepared)?;
        write(&dir.join(EVALUATION_FILE), &out)?;
    }
    Ok(())
}

fn report(inputs: &[PathBuf], output_dir: &Path) -> Result<()> {
    let mut tables = Vec::new();
    for path in inputs {
        let table = DatTable::read(path)?;
        if table.rows.is_empty() {
            bail!("{}: table has no rows", path.display());
        }
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        tables.push((name, table));
    }
    let hashes: BTreeSet<&str> = tables
        .iter()
        .filter_map(|(_, t)| t.meta("manifest"))
        .collect();
    if hashes.len() > 1 {
        log::warn!("tables come from {} different manifests", hashes.len());
    }
    let figures = standard_figures(&tables).context("rendering figures")?;

    fs::create_dir_all(output_dir).with_context(|| format!("creating {}", output_dir.display()))?;
    if let [hash] = hashes.into_iter().collect::<Vec<_>>()[..] {
        copy_manifest(inputs, hash, output_dir)?;
    }
    for (file, svg) in &figures {
        let path = output_dir.join(file);
        write(&path, svg)?;
        println!("{}", path.display());
    }
    Ok(())
}

/// Copy the first manifest next to an input table whose hash is `hash`.
fn copy_manifest(inputs: &[PathBuf], hash: &str, output_dir: &Path) -> Result<()> {
    let target = output_dir.join(MANIFEST_FILE);
    for input in inputs {
        let candidate = input.with_file_name(MANIFEST_FILE);
        if candidate == target || !candidate.is_file() {
            continue;
        }
        let manifest = fairtrade::dataset::Manifest::read(&candidate)?;
        if manifest.hash() == hash {
            manifest.write_to_dir(output_dir)?;
            return Ok(());
        }
    }
    Ok(())
}
