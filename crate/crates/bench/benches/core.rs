use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use fairtrade::baselines::{
    brute_force_best, default_d_grid, oracle_frontier, BruteConstraint, DiscriminationBound,
    OracleStrategy,
};
use fairtrade::classifiers::{
    loss_and_gradient, predict_at, score_logistic, train_logistic, train_naive_bayes, LinearModel,
    LogisticConfig, NaiveBayesConfig,
};
use fairtrade::dataset::{synthesize, Dataset, SynthSpec};
use fairtrade::massaging::plan_massage;
use fairtrade::sweep::{sweep, SweepMeta, ThresholdGrid};

// Same size as one half of the Adult split.
const N: usize = 15_000;

fn data() -> Dataset {
    let mut spec = SynthSpec::new(N, 0.675, 0.25, 0.2);
    spec.noise_features = 40;
    synthesize(&spec, 7).unwrap()
}

fn scores(ds: &Dataset) -> Vec<f64> {
    let config = LogisticConfig {
        max_epochs: 200,
        ..LogisticConfig::default()
    };
    score_logistic(&train_logistic(ds, &config).unwrap(), ds)
        .unwrap()
        .into_inner()
}

fn metrics(c: &mut Criterion) {
    let ds = data();
    let s = scores(&ds);
    let decisions = predict_at(&s, 0.5);
    c.bench_function("evaluate", |b| {
        b.iter(|| fairtrade::evaluate(ds.labels(), black_box(&decisions), ds.groups()).unwrap())
    });
    for (name, grid) in [
        ("sweep/unique", ThresholdGrid::PerUniqueScore),
        ("sweep/uniform101", ThresholdGrid::Uniform(101)),
    ] {
        c.bench_function(name, |b| {
            b.iter(|| {
                sweep(
                    black_box(&s),
                    ds.labels(),
                    ds.groups(),
                    &grid,
                    SweepMeta::default(),
                )
                .unwrap()
            })
        });
    }
}

fn baselines(c: &mut Criterion) {
    let ds = data();
    let d0 = ds.summarize().unwrap().d0;
    let grid = default_d_grid(d0, 20);
    for strategy in OracleStrategy::ALL {
        c.bench_function(&format!("oracle_frontier/{strategy}"), |b| {
            b.iter(|| {
                oracle_frontier(ds.labels(), ds.groups(), strategy, black_box(&grid)).unwrap()
            })
        });
    }
    let labels: Vec<bool> = (0..14).map(|i| i % 3 != 1).collect();
    let groups: Vec<bool> = (0..14).map(|i| i < 9).collect();
    let constraint = BruteConstraint {
        bound: DiscriminationBound::D(0.1),
        fixed_accepted: None,
    };
    c.bench_function("brute_force/n14", |b| {
        b.iter(|| brute_force_best(black_box(&labels), &groups, &constraint).unwrap())
    });
}

fn classifiers(c: &mut Criterion) {
    let ds = data();
    let model = LinearModel::zeros(ds.feature_names().to_vec());
    c.bench_function("logistic/loss_and_gradient", |b| {
        b.iter(|| loss_and_gradient(black_box(&model), ds.features(), ds.labels(), 1e-4))
    });
    c.bench_function("naive_bayes/train", |b| {
        b.iter(|| train_naive_bayes(black_box(&ds), &NaiveBayesConfig::default()).unwrap())
    });
    let s = scores(&ds);
    c.bench_function("massaging/plan", |b| {
        b.iter_batched(
            || s.clone(),
            |s| plan_massage(&ds, &s).unwrap(),
            BatchSize::SmallInput,
        )
    });
}

criterion_group!(benches, metrics, baselines, classifiers);
criterion_main!(benches);
