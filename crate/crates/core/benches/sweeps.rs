use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use spin_transfer::{eigensystem, first_peak, optimize_delta, sample_curve, table1_sweep, ChainSpec};

#[cfg(feature = "parallel")]
fn pools() -> Vec<(&'static str, rayon::ThreadPool)> {
    let build = |n| rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap();
    vec![("1-thread", build(1)), ("all-threads", build(0))]
}

#[cfg(feature = "parallel")]
fn run<R>(pool: &rayon::ThreadPool, f: impl FnOnce() -> R + Send) -> R
where
    R: Send,
{
    pool.install(f)
}

#[cfg(not(feature = "parallel"))]
fn pools() -> Vec<(&'static str, ())> {
    vec![("sequential", ())]
}

#[cfg(not(feature = "parallel"))]
fn run<R>(_: &(), f: impl FnOnce() -> R) -> R {
    f()
}

fn bench_sweeps(c: &mut Criterion) {
    let pools = pools();

    let mut group = c.benchmark_group("table1_sweep");
    group.sample_size(10);
    for (label, pool) in &pools {
        group.bench_function(BenchmarkId::from_parameter(label), |b| {
            b.iter(|| run(pool, || table1_sweep(black_box(2.38), &[4, 6, 8, 10, 12, 14, 16])))
        });
    }
    group.finish();

    let mut group = c.benchmark_group("optimize_delta_n8");
    group.sample_size(10);
    for (label, pool) in &pools {
        group.bench_function(BenchmarkId::from_parameter(label), |b| {
            b.iter(|| run(pool, || optimize_delta(8, black_box(2.0), 3.0)))
        });
    }
    group.finish();

    let spec = ChainSpec::new(12, 2.38).unwrap();
    let mut group = c.benchmark_group("first_peak_n12");
    for (label, pool) in &pools {
        group.bench_function(BenchmarkId::from_parameter(label), |b| {
            b.iter(|| run(pool, || first_peak(black_box(&spec))))
        });
    }
    group.finish();

    let eig = eigensystem(&ChainSpec::new(16, 2.38).unwrap()).unwrap();
    let mut group = c.benchmark_group("sample_curve_n16_1e5");
    for (label, pool) in &pools {
        group.bench_function(BenchmarkId::from_parameter(label), |b| {
            b.iter(|| run(pool, || sample_curve(black_box(&eig), 16, 2000.0, 100_000)))
        });
    }
    group.finish();
}

criterion_group!(benches, bench_sweeps);
criterion_main!(benches);
