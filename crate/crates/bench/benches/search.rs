use circorth::{autocorrelation, dfs_enumerate, eliminate_case, family_generator, Family, Pruning, SearchOptions};
use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

fn bench_autocorrelation(c: &mut Criterion) {
    let mut group = c.benchmark_group("autocorrelation");
    for n in [64, 256, 1024] {
        let g = family_generator(Family::G4a, n).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &g, |b, g| b.iter(|| autocorrelation(black_box(g))));
    }
    group.finish();
}

fn bench_dfs(c: &mut Criterion) {
    let mut group = c.benchmark_group("dfs");
    group.sample_size(10);
    for (n, d2, pruning) in [(16, 2, Pruning::Full), (16, 2, Pruning::Basic), (20, 18, Pruning::Full), (28, 6, Pruning::Full)] {
        let opts = SearchOptions { pruning, ..Default::default() };
        let id = format!("n{n}_d2_{d2}_{pruning:?}");
        group.bench_function(id, |b| b.iter(|| dfs_enumerate(n, d2, &opts).unwrap()));
    }
    group.finish();
}

fn bench_elimination(c: &mut Criterion) {
    let mut group = c.benchmark_group("eliminate");
    group.sample_size(10);
    group.bench_function("n120", |b| b.iter(|| eliminate_case(120, 10).unwrap()));
    group.bench_function("n924", |b| b.iter(|| eliminate_case(924, 58).unwrap()));
    group.finish();
}

criterion_group!(benches, bench_autocorrelation, bench_dfs, bench_elimination);
criterion_main!(benches);
