use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use treecover::{
    duis, lambda_rho_of_complement, oracle_lambda, oracle_min_cover, sequence_set, tree_path_cover,
    OracleBudget,
};
use treecover_bench::{caterpillar, family_member, uniform_tree, SIZES};

fn path_cover(c: &mut Criterion) {
    let mut group = c.benchmark_group("tree_path_cover");
    for n in SIZES {
        let t = uniform_tree(n, 1);
        group.bench_with_input(BenchmarkId::new("uniform", n), &t, |b, t| {
            b.iter(|| tree_path_cover(black_box(t)).unwrap())
        });
        let t = caterpillar(n);
        group.bench_with_input(BenchmarkId::new("caterpillar", n), &t, |b, t| {
            b.iter(|| tree_path_cover(black_box(t)).unwrap())
        });
    }
    group.finish();
}

fn island_uniqueness(c: &mut Criterion) {
    let mut group = c.benchmark_group("duis");
    for n in SIZES {
        let t = uniform_tree(n, 2);
        group.bench_with_input(BenchmarkId::new("uniform", n), &t, |b, t| {
            b.iter(|| duis(black_box(t)).unwrap())
        });
        let t = family_member(n, 2);
        group.bench_with_input(BenchmarkId::new("family", n), &t, |b, t| {
            b.iter(|| duis(black_box(t)).unwrap())
        });
    }
    group.finish();
}

fn complement_labeling(c: &mut Criterion) {
    let t = uniform_tree(1000, 3);
    c.bench_function("lambda_rho_of_complement/1000", |b| {
        b.iter(|| lambda_rho_of_complement(black_box(&t)).unwrap())
    });
}

fn oracles(c: &mut Criterion) {
    let mut group = c.benchmark_group("oracle");
    group.sample_size(20);
    for n in [8, 12, 14] {
        let t = uniform_tree(n, 4);
        group.bench_with_input(BenchmarkId::new("min_cover", n), &t, |b, t| {
            b.iter(|| oracle_min_cover(black_box(t), &OracleBudget::path_default()).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("sequence_set", n), &t, |b, t| {
            b.iter(|| sequence_set(black_box(t), 16).unwrap())
        });
    }
    for n in [6, 8] {
        let g = uniform_tree(n, 5).complement();
        group.bench_with_input(BenchmarkId::new("lambda", n), &g, |b, g| {
            b.iter(|| oracle_lambda(black_box(g), &OracleBudget::lambda_default()).unwrap())
        });
    }
    group.finish();
}

criterion_group!(
    benches,
    path_cover,
    island_uniqueness,
    complement_labeling,
    oracles
);
criterion_main!(benches);
