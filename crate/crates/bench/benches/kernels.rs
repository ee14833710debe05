//! Microbenchmarks for the hot kernels: the transport rotation, the full
//! right-hand side at a few ensemble sizes, and the dissipation functional.

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;
use sphereflock::diagnostics::dissipation_rate;
use sphereflock::dynamics::rhs;
use sphereflock::geometry::rotation_matrix;
use sphereflock::scenarios::{self, random_admissible};
use sphereflock::{CommWeight, SimParams, Vec3};

fn pairs(count: usize) -> Vec<(Vec3, Vec3)> {
    let mut rng = ChaCha12Rng::seed_from_u64(42);
    (0..count)
        .map(|_| {
            loop {
                let a = scenarios::random_unit_vector(&mut rng);
                let b = scenarios::random_unit_vector(&mut rng);
                if (a + b).norm() > 1e-3 {
                    return (a, b);
                }
            }
        })
        .collect()
}

fn bench_rotation(c: &mut Criterion) {
    let sample = pairs(1024);
    c.bench_function("rotation_matrix/1024_pairs", |b| {
        b.iter(|| {
            for (x1, x2) in &sample {
                black_box(rotation_matrix(black_box(x1), black_box(x2)).unwrap());
            }
        })
    });
}

fn bench_rhs(c: &mut Criterion) {
    let mut group = c.benchmark_group("rhs");
    for n in [8usize, 32, 128] {
        let ens = random_admissible(n, 1.0, 42);
        let params = SimParams {
            n,
            sigma: 1.0,
            ..SimParams::default()
        };
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| black_box(rhs(black_box(&ens), black_box(&params)).unwrap()))
        });
    }
    group.finish();
}

fn bench_dissipation(c: &mut Criterion) {
    let ens = random_admissible(32, 1.0, 42);
    let weight = CommWeight::Quadratic;
    c.bench_function("dissipation_rate/n32", |b| {
        b.iter(|| black_box(dissipation_rate(black_box(&ens), black_box(&weight))))
    });
}

criterion_group!(benches, bench_rotation, bench_rhs, bench_dissipation);
criterion_main!(benches);
