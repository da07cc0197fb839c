use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use coarsegraph::constructions::{build_2fat_witness, build_g, build_n_gadget, AssemblyParams, GadgetParams};
use coarsegraph::corpus::{random_connected_graph, seeded};
use coarsegraph::fatminor::{find_fat_minor, verify_model, PatternGraph};
use coarsegraph::graph::{neighborhood, power_graph, AllPairs};
use coarsegraph::treedecomp::decompose_n_gadget;
use coarsegraph::{Graph, Rational, VertexSet};

fn r(x: i64) -> Rational {
    Rational::from_integer(x)
}

fn host(n: usize, density: f64) -> Graph {
    random_connected_graph(&mut seeded(42), n, density)
}

fn bfs(c: &mut Criterion) {
    let g = build_n_gadget(GadgetParams::new(10, 10).unwrap()).unwrap().graph;
    let root = VertexSet::singleton(0);
    c.bench_function("ball radius 20 in gadget (10,10)", |b| {
        b.iter(|| neighborhood(black_box(&g), &root, r(20)).unwrap())
    });
    let small = host(200, 0.02);
    c.bench_function("all pairs on 200 vertices", |b| {
        b.iter(|| AllPairs::new(black_box(&small)).unwrap())
    });
}

fn power(c: &mut Criterion) {
    let g = host(300, 0.01);
    let mut group = c.benchmark_group("power graph, 300 vertices");
    for k in [2, 3, 5] {
        group.bench_with_input(BenchmarkId::from_parameter(k), &k, |b, &k| {
            b.iter(|| power_graph(black_box(&g), k).unwrap())
        });
    }
    group.finish();
}

fn verify(c: &mut Criterion) {
    let a = build_g(AssemblyParams::new(5, 3, 3, 8, 6).unwrap()).unwrap();
    let w = build_2fat_witness(&a).unwrap();
    c.bench_function("verify 2-fat witness (5,3,3,8,6)", |b| {
        b.iter(|| verify_model(&a.graph, &w.pattern, &w.model, r(2)).unwrap())
    });
}

fn decompose(c: &mut Criterion) {
    let g = build_n_gadget(GadgetParams::new(10, 8).unwrap()).unwrap();
    c.bench_function("decompose gadget (10,8)", |b| {
        b.iter(|| decompose_n_gadget(black_box(&g)))
    });
}

fn search(c: &mut Criterion) {
    let k3 = PatternGraph::named("k3").unwrap();
    let cycle = Graph::cycle(20);
    c.bench_function("find 3-fat K3 in C20", |b| {
        b.iter(|| find_fat_minor(black_box(&cycle), &k3, r(3), u64::MAX).unwrap())
    });
    let dense = host(9, 0.5);
    c.bench_function("exhaust 2-fat K3 on 9 vertices", |b| {
        b.iter(|| find_fat_minor(black_box(&dense), &k3, r(2), u64::MAX).unwrap())
    });
}

criterion_group!(kernels, bfs, power, verify, decompose, search);
criterion_main!(kernels);
