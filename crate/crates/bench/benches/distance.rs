use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use wgreedy::approx::distance;
use wgreedy::{NormKind, SolverOptions, Subspace};
use wgreedy_bench::random_ball;

fn distances(c: &mut Criterion) {
    let mut g = c.benchmark_group("distance");
    for dim in [4usize, 8, 16] {
        for kind in [NormKind::LInf, NormKind::L1, NormKind::Lp(3.0)] {
            let set = random_ball(2 * dim, dim + 1, kind);
            let (f, rest) = set.elements.split_first().unwrap();
            let v = Subspace::new(2 * dim, rest.to_vec()).unwrap();
            let opts = SolverOptions::default();
            g.bench_with_input(BenchmarkId::new(kind.to_string(), dim), &dim, |b, _| {
                b.iter(|| distance(f, &v, kind, &opts).unwrap())
            });
        }
    }
    g.finish();
}

criterion_group!(benches, distances);
criterion_main!(benches);
