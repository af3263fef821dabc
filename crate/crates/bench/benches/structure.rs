use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use pancake_core::automorphisms::compute_automorphism_group;
use pancake_core::connectivity::vertex_connectivity;
use pancake_core::domination::enumerate_efficient_dominating_sets;
use pancake_core::PancakeGraph;

fn build(c: &mut Criterion) {
    let mut group = c.benchmark_group("build");
    for n in [5, 6, 7] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| PancakeGraph::build(black_box(n)).unwrap())
        });
    }
    group.finish();
}

fn girth(c: &mut Criterion) {
    let mut group = c.benchmark_group("girth");
    for n in [5, 6] {
        let g = PancakeGraph::build(n).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &g, |b, g| b.iter(|| g.girth()));
    }
    group.finish();
}

fn connectivity(c: &mut Criterion) {
    let mut group = c.benchmark_group("vertex_connectivity");
    group.sample_size(10);
    for n in [5, 6] {
        let g = PancakeGraph::build(n).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &g, |b, g| b.iter(|| vertex_connectivity(g)));
    }
    group.finish();
}

fn domination(c: &mut Criterion) {
    let mut group = c.benchmark_group("perfect_codes");
    group.sample_size(10);
    for n in [4, 5, 6] {
        let g = PancakeGraph::build(n).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &g, |b, g| {
            b.iter(|| enumerate_efficient_dominating_sets(g).unwrap())
        });
    }
    group.finish();
}

fn automorphisms(c: &mut Criterion) {
    let mut group = c.benchmark_group("automorphism_group");
    group.sample_size(10);
    for n in [4, 5, 6] {
        let g = PancakeGraph::build(n).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &g, |b, g| {
            b.iter(|| compute_automorphism_group(g).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, build, girth, connectivity, domination, automorphisms);
criterion_main!(benches);
