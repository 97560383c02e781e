use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use digitop_core::corpus::builtin;
use digitop_core::{
    digital_box, enumerate_continuous_self_maps, interval, is_freezing, is_reducible, is_rigid, DigitalImage,
    MapConstraints, SearchBudget, SearchMode,
};

fn images() -> Vec<(&'static str, DigitalImage)> {
    ["interval05", "curve8", "curve6-c2", "figure-eight", "rigid10-c2"]
        .into_iter()
        .map(|name| (name, builtin(name).unwrap()))
        .collect()
}

fn bench_rigidity(c: &mut Criterion) {
    let mut group = c.benchmark_group("is_rigid");
    for (name, x) in images() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &x, |b, x| {
            b.iter(|| is_rigid(black_box(x), SearchBudget::default()))
        });
    }
    group.finish();
}

fn bench_reducibility(c: &mut Criterion) {
    let mut group = c.benchmark_group("is_reducible");
    group.sample_size(20);
    for (name, x) in images() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &x, |b, x| {
            b.iter(|| is_reducible(black_box(x), SearchBudget::default()))
        });
    }
    group.finish();
}

fn bench_freezing(c: &mut Criterion) {
    let mut group = c.benchmark_group("is_freezing");
    for k in [2, 3, 4] {
        let x = digital_box(&[(0, k), (0, k)], 1).unwrap();
        let boundary = x.boundary();
        group.bench_with_input(BenchmarkId::new("box-boundary", k), &x, |b, x| {
            b.iter(|| is_freezing(black_box(x), &boundary, SearchBudget::default()).unwrap())
        });
    }
    group.finish();
}

fn bench_enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate_self_maps");
    for n in [2, 4, 6] {
        let x = interval(0, n).unwrap();
        group.bench_with_input(BenchmarkId::new("interval", n), &x, |b, x| {
            b.iter(|| {
                enumerate_continuous_self_maps(black_box(x), &MapConstraints::none(), SearchBudget::default(), SearchMode::Exhaustive)
                    .unwrap()
            })
        });
    }
    group.finish();
}

criterion_group!(benches, bench_rigidity, bench_reducibility, bench_freezing, bench_enumeration);
criterion_main!(benches);
