use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use digitop::catalog::{random, random_contractible, sphere};
use digitop::contract::{simple_pairs, Contractor};
use digitop::euler::e_vector_with;
use digitop::Execution;

const STRATEGIES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn clique_counting(c: &mut Criterion) {
    let mut group = c.benchmark_group("e_vector");
    group.sample_size(20);
    let inputs = [("random-40-0.7", random(40, 0.7, 7)), ("sphere-11", sphere(11))];
    for (name, g) in &inputs {
        for (label, exec) in STRATEGIES {
            group.bench_with_input(BenchmarkId::new(label, name), g, |b, g| {
                b.iter(|| e_vector_with(black_box(g), g.len(), exec).unwrap())
            });
        }
    }
    group.finish();
}

fn simple_classification(c: &mut Criterion) {
    let mut group = c.benchmark_group("simple_points");
    let inputs = [("random-18-0.5", random(18, 0.5, 3)), ("contractible-20", random_contractible(20, 5))];
    for (name, g) in &inputs {
        for (label, exec) in STRATEGIES {
            group.bench_with_input(BenchmarkId::new(label, name), g, |b, g| {
                // Fresh oracle per iteration so the verdict cache does not carry over.
                b.iter(|| Contractor::new(25).simple_points_with(black_box(g), exec).unwrap())
            });
        }
    }
    group.finish();

    let mut group = c.benchmark_group("simple_edges");
    let g = random(16, 0.5, 11);
    for (label, exec) in STRATEGIES {
        group.bench_function(label, |b| {
            b.iter(|| {
                let oracle = Contractor::new(25);
                let del = oracle.simple_edges_for_deletion(black_box(&g), exec).unwrap();
                let att = oracle.simple_edges_for_attachment(black_box(&g), exec).unwrap();
                (del, att, simple_pairs(&g, exec))
            })
        });
    }
    group.finish();
}

criterion_group!(benches, clique_counting, simple_classification);
criterion_main!(benches);
