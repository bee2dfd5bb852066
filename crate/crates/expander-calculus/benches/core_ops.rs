//! Benchmarks for the data-parallel core operations. Run twice to compare
//! threading configurations:
//!
//! ```text
//! cargo bench --bench core_ops                          # rayon (default)
//! cargo bench --bench core_ops --no-default-features    # sequential
//! ```
//!
//! `RAYON_NUM_THREADS` controls the pool size in the parallel build.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use expander_calculus::graph;
use expander_calculus::poincare::{self, ExactKernel};
use expander_calculus::products;
use expander_calculus::spectral;

fn bench_matvec(c: &mut Criterion) {
    let mut group = c.benchmark_group("matvec");
    for &n in &[4096usize, 32768] {
        let g = graph::random_regular(n, 16, 7).unwrap();
        let a = g.normalized_adjacency();
        let v: Vec<f64> = (0..n).map(|i| ((i * 37) % 101) as f64 / 101.0).collect();
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| black_box(a.matvec(black_box(&v))));
        });
    }
    group.finish();
}

fn bench_cesaro(c: &mut Criterion) {
    let g = graph::random_regular(1024, 16, 7).unwrap();
    c.bench_function("cesaro m=8 n=1024", |b| {
        b.iter(|| black_box(g.cesaro(8).unwrap()));
    });
}

fn bench_zigzag(c: &mut Criterion) {
    let g1 = graph::random_regular(2048, 16, 7).unwrap();
    let g2 = graph::random_regular(16, 4, 11).unwrap();
    let lab = products::default_labeling(&g1, &g2).unwrap();
    c.bench_function("zigzag 2048x16", |b| {
        b.iter(|| black_box(products::zigzag(&g1, &g2, &lab).unwrap()));
    });
}

fn bench_lambda_abs(c: &mut Criterion) {
    let g = graph::random_regular(32768, 16, 7).unwrap();
    let a = g.normalized_adjacency();
    let mut group = c.benchmark_group("lambda_abs");
    group.sample_size(10);
    group.bench_function("iterative n=32768", |b| {
        b.iter(|| black_box(spectral::lambda_abs_iterative(&a).unwrap()));
    });
    group.finish();
}

fn bench_oracle(c: &mut Criterion) {
    let g = graph::random_regular(8, 4, 7).unwrap();
    let two = vec![vec![0.0, 1.0], vec![1.0, 0.0]];
    let kernel = ExactKernel::from_metric(&two, 2).unwrap();
    c.bench_function("gamma_plus bruteforce n=8 two-point", |b| {
        b.iter(|| {
            black_box(poincare::gamma_plus_bruteforce(&g, &kernel, 1_000_000).unwrap())
        });
    });
}

criterion_group!(
    benches,
    bench_matvec,
    bench_cesaro,
    bench_zigzag,
    bench_lambda_abs,
    bench_oracle
);
criterion_main!(benches);
