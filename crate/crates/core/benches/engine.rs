//! Sequential (one worker) against the default thread pool.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use sidorenko_local::bigraph::family::{complete_bipartite, theta};
use sidorenko_local::density::{density, expansion};
use sidorenko_local::exec::with_threads;
use sidorenko_local::harness::{check_entry, find_entry, CheckConfig};
use sidorenko_local::kernel::KernelSampler;

const POOLS: [(&str, usize); 2] = [("sequential", 1), ("pool", 0)];

fn bench_density(c: &mut Criterion) {
    let mut group = c.benchmark_group("density");
    let w = KernelSampler::new(6, 6).random_measures(true).sample(3);
    let wf = w.to_f64();
    let f = theta(&[3, 3, 3]).unwrap();
    for (name, threads) in POOLS {
        group.bench_with_input(BenchmarkId::new("rational", name), &threads, |b, &t| {
            b.iter(|| with_threads(t, || density(black_box(&f), &w).unwrap()))
        });
        group.bench_with_input(BenchmarkId::new("float", name), &threads, |b, &t| {
            b.iter(|| with_threads(t, || density(black_box(&f), &wf).unwrap()))
        });
    }
    group.finish();
}

fn bench_expansion(c: &mut Criterion) {
    let mut group = c.benchmark_group("expansion");
    group.sample_size(10);
    let u = KernelSampler::new(3, 3).mean_zero(true).sample(5).to_f64();
    let f = complete_bipartite(3, 3);
    for (name, threads) in POOLS {
        group.bench_with_input(BenchmarkId::new("K3,3", name), &threads, |b, &t| {
            b.iter(|| with_threads(t, || expansion(black_box(&f), &u).unwrap()))
        });
    }
    group.finish();
}

fn bench_cut_norm(c: &mut Criterion) {
    let mut group = c.benchmark_group("cut_norm");
    let u = KernelSampler::new(14, 14).sample(9).to_f64();
    for (name, threads) in POOLS {
        group.bench_with_input(BenchmarkId::new("14x14", name), &threads, |b, &t| {
            b.iter(|| with_threads(t, || black_box(&u).cut_norm().value))
        });
    }
    group.finish();
}

fn bench_check(c: &mut Criterion) {
    let mut group = c.benchmark_group("check");
    group.sample_size(10);
    let entry = find_entry("CYCLE").unwrap();
    let config = CheckConfig { trials: 20, seed: 1, tol: 1e-9, max_blocks: 5, adversarial: true };
    for (name, threads) in POOLS {
        group.bench_with_input(BenchmarkId::new("CYCLE", name), &threads, |b, &t| {
            b.iter(|| with_threads(t, || check_entry(&entry, &config).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, bench_density, bench_expansion, bench_cut_norm, bench_check);
criterion_main!(benches);
