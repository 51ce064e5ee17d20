mod common;

use fairtrade::metrics::{max_discrimination, tally, MetricBundle};
use fairtrade::{evaluate, Error};
use rand::Rng;

/// Every decision vector on small datasets obeys the discrimination bounds:
/// d_max above, the group-swapped d_max below.
#[test]
fn all_decision_vectors_on_small_datasets_respect_bounds() {
    let mut rng = common::rng(12);
    let mut checked = 0usize;
    for n in 2..=12 {
        for _ in 0..6 {
            let labels: Vec<bool> = (0..n).map(|_| rng.random_bool(0.5)).collect();
            let groups: Vec<bool> = (0..n).map(|_| rng.random_bool(0.5)).collect();
            let nf = groups.iter().filter(|&&g| g).count();
            if nf == 0 || nf == n || labels.iter().all(|&y| y) || labels.iter().all(|&y| !y) {
                continue;
            }
            let eps = 1.0 / nf.min(n - nf) as f64;
            for mask in 0u32..(1 << n) {
                let decisions: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
                let m = evaluate(&labels, &decisions, &groups).unwrap();
                assert!(m.d <= m.d_max + eps, "n={n} mask={mask:b}: {m:?}");
                assert!(m.delta <= 1.0 + eps, "n={n} mask={mask:b}: {m:?}");
                let reverse = max_discrimination(m.pi, 1.0 - nf as f64 / n as f64).unwrap();
                assert!(-m.d <= reverse + eps, "n={n} mask={mask:b}: {m:?}");
                if m.d_max == 0.0 {
                    assert_eq!((m.d, m.delta), (0.0, 0.0));
                }
                assert!((-1.0..=1.0).contains(&m.kappa) && (0.0..=1.0).contains(&m.accuracy));
                checked += 1;
            }
        }
    }
    assert!(checked > 10_000, "{checked}");
}

#[test]
fn bundle_matches_independent_recount() {
    let mut rng = common::rng(13);
    for _ in 0..200 {
        let n = rng.random_range(2..40);
        let (labels, groups) = common::random_instance(&mut rng, n);
        let decisions: Vec<bool> = (0..n).map(|_| rng.random_bool(0.4)).collect();
        let m = evaluate(&labels, &decisions, &groups).unwrap();

        let count = |f: &dyn Fn(usize) -> bool| (0..n).filter(|&i| f(i)).count() as f64;
        let nf = count(&|i| groups[i]);
        let np = n as f64 - nf;
        let pi = count(&|i| decisions[i]) / n as f64;
        let pi0 = count(&|i| labels[i]) / n as f64;
        let a = count(&|i| labels[i] == decisions[i]) / n as f64;
        let r = pi0 * pi + (1.0 - pi0) * (1.0 - pi);
        let d = count(&|i| groups[i] && decisions[i]) / nf
            - count(&|i| !groups[i] && decisions[i]) / np;
        let alpha = nf / n as f64;
        let d_max = (pi / alpha).min((1.0 - pi) / (1.0 - alpha));
        let delta = if d_max == 0.0 { 0.0 } else { d / d_max };
        let kappa = if r < 1.0 {
            (a - r) / (1.0 - r)
        } else {
            f64::NAN
        };
        let close = |x: f64, y: f64| (x - y).abs() < 1e-12;
        assert!(close(m.pi, pi) && close(m.accuracy, a) && close(m.random_accuracy, r));
        assert!(close(m.d, d) && close(m.d_max, d_max) && close(m.delta, delta));
        assert!(close(m.kappa, kappa), "{} vs {kappa}", m.kappa);
    }
}

#[test]
fn perfect_predictions_reproduce_the_data_rates() {
    let ds = fairtrade::dataset::synthesize(
        &fairtrade::dataset::SynthSpec::new(1000, 0.675, 0.247, 0.199),
        2,
    )
    .unwrap();
    let m = evaluate(ds.labels(), ds.labels(), ds.groups()).unwrap();
    let s = ds.summarize().unwrap();
    assert_eq!((m.accuracy, m.kappa), (1.0, 1.0));
    assert_eq!((m.d, m.delta), (s.d0, s.delta0));
    let all = vec![true; ds.n()];
    let m = evaluate(ds.labels(), &all, ds.groups()).unwrap();
    assert_eq!((m.pi, m.d, m.delta, m.kappa), (1.0, 0.0, 0.0, 0.0));
}

#[test]
fn bundle_from_tally_equals_evaluate() {
    let labels = [true, false, true, true, false, false];
    let decisions = [true, true, false, true, false, true];
    let groups = [true, true, true, false, false, false];
    let t = tally(&labels, &decisions, &groups).unwrap();
    assert_eq!(
        MetricBundle::from_tally(&t).unwrap(),
        evaluate(&labels, &decisions, &groups).unwrap()
    );
    assert!(matches!(
        evaluate(&labels, &decisions[..5], &groups),
        Err(Error::LengthMismatch { .. })
    ));
}
