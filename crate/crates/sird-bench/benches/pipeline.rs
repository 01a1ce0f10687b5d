use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use sird_core::synth::{planted_block_embeddings, random_complete_graph};
use sird_core::{correct_weights, correlation_graph, knn_graph, optimize, select_k_star, EncodingTree};

fn bench_sparsify(c: &mut Criterion) {
    let mut group = c.benchmark_group("select_k_star");
    group.sample_size(10);
    for n in [32usize, 64, 128] {
        let g = random_complete_graph(n, n as u64).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &g, |b, g| {
            b.iter(|| select_k_star(g).unwrap());
        });
    }
    group.finish();
}

fn bench_optimize(c: &mut Criterion) {
    let mut group = c.benchmark_group("optimize_knn");
    group.sample_size(10);
    for n in [128usize, 256, 512] {
        let g = random_complete_graph(n, n as u64).unwrap();
        let sparse = knn_graph(&correct_weights(&g).unwrap(), 8).unwrap();
        let flat = EncodingTree::flat(&sparse).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &(), |b, _| {
            b.iter(|| optimize(&sparse, &flat, 2).unwrap());
        });
    }
    group.finish();
}

fn bench_correlation(c: &mut Criterion) {
    let mut group = c.benchmark_group("correlation_graph");
    group.sample_size(10);
    for blocks in [4usize, 8] {
        let sizes = vec![8usize; blocks];
        let (e, _) = planted_block_embeddings(&sizes, 32, 0.9, 0.05, 7).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(blocks * 8), &e, |b, e| {
            b.iter(|| correlation_graph(e).unwrap());
        });
    }
    group.finish();
}

criterion_group!(benches, bench_sparsify, bench_optimize, bench_correlation);
criterion_main!(benches);
