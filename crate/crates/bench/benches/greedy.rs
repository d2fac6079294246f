use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use wgreedy::{realize, run_weak_greedy, CompactSetSpec, NormKind, WeakGreedyParams};
use wgreedy_bench::random_ball;

fn greedy(c: &mut Criterion) {
    let mut g = c.benchmark_group("greedy");
    for kind in [NormKind::Hilbert, NormKind::LInf, NormKind::L1, NormKind::Lp(3.0)] {
        let set = random_ball(10, 20, kind);
        let params = WeakGreedyParams::new(10);
        g.bench_with_input(BenchmarkId::new("random_ball_10x20", kind), &set, |b, s| {
            b.iter(|| run_weak_greedy(s, &params).unwrap())
        });
    }
    let diag = realize(&CompactSetSpec::diagonal_poly(64, 1.0, 1.0), NormKind::LInf).unwrap();
    g.bench_function("diagonal_64_linf", |b| {
        b.iter(|| run_weak_greedy(&diag, &WeakGreedyParams::new(64)).unwrap())
    });
    g.finish();
}

criterion_group!(benches, greedy);
criterion_main!(benches);
