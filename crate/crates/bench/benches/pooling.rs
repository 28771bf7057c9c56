use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use trafo_ensemble::pooling::pool_panel;
use trafo_ensemble::scoring::mean_score;
use trafo_ensemble::{PoolKind, ScoreKind, SimplexWeights, TargetDistribution};
use trafo_ensemble_bench::fixture_panel;

fn pools(c: &mut Criterion) {
    let panel = fixture_panel(5, 7, 1000, 1);
    let w = SimplexWeights::equal(5).unwrap();
    let mut group = c.benchmark_group("pool_panel");
    group.throughput(Throughput::Elements(panel.n_instances() as u64));
    for kind in [
        PoolKind::Linear,
        PoolKind::LogLinearCdf,
        PoolKind::LogLinearPdf,
        PoolKind::Transformation(TargetDistribution::Logistic),
        PoolKind::Transformation(TargetDistribution::StandardNormal),
        PoolKind::Transformation(TargetDistribution::MinExtremeValue),
    ] {
        group.bench_with_input(BenchmarkId::from_parameter(kind), &kind, |b, &kind| {
            b.iter(|| pool_panel(black_box(&panel), kind, &w).unwrap())
        });
    }
    group.finish();
}

fn scores(c: &mut Criterion) {
    let panel = fixture_panel(1, 7, 10_000, 2);
    let cdfs = &panel.cdfs[0];
    let mut group = c.benchmark_group("mean_score");
    group.throughput(Throughput::Elements(cdfs.len() as u64));
    for kind in [ScoreKind::Nll, ScoreKind::Rps] {
        group.bench_with_input(
            BenchmarkId::from_parameter(kind.name()),
            &kind,
            |b, &kind| b.iter(|| mean_score(black_box(cdfs), &panel.outcomes, kind).unwrap()),
        );
    }
    group.finish();
}

criterion_group!(benches, pools, scores);
criterion_main!(benches);
