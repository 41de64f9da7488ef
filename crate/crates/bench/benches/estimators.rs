use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use varextropy::uniformity::{calibrate_critical_value, statistic, StatKind};
use varextropy::{estimate, EstimatorId, EstimatorOptions};
use varextropy_bench::uniform_sample;

fn estimators(c: &mut Criterion) {
    let opts = EstimatorOptions::default();
    let mut group = c.benchmark_group("estimator");
    for n in [20, 100, 800] {
        let s = uniform_sample(n, 1);
        for id in EstimatorId::ALL {
            group.bench_with_input(BenchmarkId::new(id.name(), n), &s, |b, s| {
                b.iter(|| estimate(id, black_box(s), &opts).unwrap())
            });
        }
    }
    group.finish();
}

fn statistics(c: &mut Criterion) {
    let s = uniform_sample(30, 2);
    let mut group = c.benchmark_group("statistic_n30");
    for kind in StatKind::ALL {
        group.bench_function(kind.name(), |b| b.iter(|| statistic(kind, black_box(&s)).unwrap()));
    }
    group.finish();
}

fn calibration(c: &mut Criterion) {
    let mut group = c.benchmark_group("calibration");
    group.sample_size(10);
    for kind in [StatKind::Gv, StatKind::Gd] {
        group.bench_function(format!("{}_n20_1000reps", kind.name()), |b| {
            b.iter(|| calibrate_critical_value(kind, 20, 0.05, 1000, 1).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, estimators, statistics, calibration);
criterion_main!(benches);
