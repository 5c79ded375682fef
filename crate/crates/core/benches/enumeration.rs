//! Sequential versus parallel enumeration on the same search trees.
//!
//! With the `parallel` feature disabled both variants run the sequential
//! walk, which makes the fallback cost visible as well.

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use thinlie::arith::{PrimeChar, PrimeField};
use thinlie::search::{collect_ordered, AlgebraKind, MaxClassSearch, SearchConfig, ThinSearch};

fn jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get()).max(2)
}

fn config(p: u64, n: usize, kind: AlgebraKind) -> (PrimeField, SearchConfig) {
    let ch = PrimeChar::new(p).unwrap();
    (PrimeField::new(ch), SearchConfig::new(ch, n, kind).unwrap())
}

fn maxclass(c: &mut Criterion) {
    let mut group = c.benchmark_group("maxclass_p2_n33");
    let (f, cfg) = config(2, 33, AlgebraKind::MaxClass);
    let tree = MaxClassSearch::new(f, &cfg).unwrap();
    for workers in [1, jobs()] {
        group.bench_with_input(BenchmarkId::from_parameter(workers), &workers, |b, &w| {
            b.iter(|| black_box(collect_ordered(&tree, w).0.len()))
        });
    }
    group.finish();
}

fn thin(c: &mut Criterion) {
    let mut group = c.benchmark_group("thin_p7_n13");
    group.sample_size(10);
    let (f, cfg) = config(7, 13, AlgebraKind::Thin);
    let tree = ThinSearch::new(f, &cfg).unwrap();
    for workers in [1, jobs()] {
        group.bench_with_input(BenchmarkId::from_parameter(workers), &workers, |b, &w| {
            b.iter(|| black_box(collect_ordered(&tree, w).0.len()))
        });
    }
    group.finish();
}

criterion_group!(benches, maxclass, thin);
criterion_main!(benches);
