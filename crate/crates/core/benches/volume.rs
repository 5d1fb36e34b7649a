use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use srball::contact::ContactStructure;
use srball::families::Family;
use srball::parallel::Execution;
use srball::volume::{ball_volume, QuadratureSpec};

fn volume(c: &mut Criterion) {
    let s = ContactStructure::derive(Family::Kappa4.frame().unwrap()).unwrap();
    let mut g = c.benchmark_group("ball_volume_8x16x16");
    g.sample_size(10);
    for (name, execution) in [("parallel", Execution::Parallel), ("sequential", Execution::Sequential)] {
        let quad = QuadratureSpec { n_rho: 8, n_theta: 16, n_w: 16, execution, ..QuadratureSpec::default() };
        g.bench_function(name, |b| b.iter(|| ball_volume(black_box(&s), black_box(0.1), &quad).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, volume);
criterion_main!(benches);
