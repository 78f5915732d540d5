//! Benchmarks for the statistical engine and the transcript parsers.
//!
//! Run with `cargo bench -p mac-bench`. The sizes are chosen so a full run
//! stays under a few minutes while still exercising the interesting paths:
//! conditional independence testing, the full PC loop, both exact-search
//! strategies, DirectLiNGAM's pairwise ordering, and the response parsers.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use mac_core::agents::{parse_judge_verdicts, parse_react_blocks};
use mac_core::graph::EdgeConstraints;
use mac_core::scd::{direct_lingam, exact_search, fisher_z, pc, SearchMethod};
use mac_core::sim::{self, NoiseKind};
use mac_core::AlgorithmConfig;

fn bench_fisher_z(c: &mut Criterion) {
    let data = sim::random_dag_sem(8, 0.4, 7).sample(2_000, 7);
    c.bench_function("fisher_z/cond2_2000rows", |b| {
        b.iter(|| fisher_z(black_box(&data), 0, 1, &[2, 3], 0.05).unwrap())
    });
}

fn bench_pc(c: &mut Criterion) {
    let mut group = c.benchmark_group("pc");
    let constraints = EdgeConstraints::default();
    let config = AlgorithmConfig::default();
    for &n in &[5usize, 8, 10] {
        let data = sim::random_dag_sem(n, 0.3, 11).sample(1_000, 11);
        group.bench_with_input(BenchmarkId::new("vars", n), &data, |b, data| {
            b.iter(|| pc(black_box(data), &config, &constraints).unwrap())
        });
    }
    group.finish();
}

fn bench_exact_search(c: &mut Criterion) {
    let mut group = c.benchmark_group("exact_search");
    for method in [SearchMethod::Dp, SearchMethod::Astar] {
        let config = AlgorithmConfig {
            search_method: method,
            ..AlgorithmConfig::default()
        };
        for &n in &[6usize, 9] {
            let data = sim::random_dag_sem(n, 0.35, 3).sample(500, 3);
            let id = BenchmarkId::new(format!("{method:?}"), n);
            group.bench_with_input(id, &data, |b, data| {
                b.iter(|| exact_search(black_box(data), &config, None).unwrap())
            });
        }
    }
    group.finish();
}

fn bench_lingam(c: &mut Criterion) {
    let mut group = c.benchmark_group("direct_lingam");
    let config = AlgorithmConfig::default();
    for &n in &[5usize, 8] {
        let data = sim::chain_sem(n, 0.8, NoiseKind::Uniform(1.0)).sample(1_000, 5);
        group.bench_with_input(BenchmarkId::new("vars", n), &data, |b, data| {
            b.iter(|| direct_lingam(black_box(data), &config, None).unwrap())
        });
    }
    group.finish();
}

fn bench_parsers(c: &mut Criterion) {
    let react = sim::react_answers(&[true, false, true, false, true, true, false, true]);
    let verdicts = sim::judge_decisive(&[true, false, true, false, true, true, false, true]);
    c.bench_function("parse/react_blocks_8q", |b| {
        b.iter(|| parse_react_blocks(black_box(&react)).unwrap())
    });
    c.bench_function("parse/judge_verdicts_8q", |b| {
        b.iter(|| parse_judge_verdicts(black_box(&verdicts), 8).unwrap())
    });
}

criterion_group!(
    benches,
    bench_fisher_z,
    bench_pc,
    bench_exact_search,
    bench_lingam,
    bench_parsers
);
criterion_main!(benches);
