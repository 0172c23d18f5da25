use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qdist_core::linalg::hermitian_eig;
use qdist_core::purification::{dn_via_purification, Objective};
use qdist_core::states::{from_bloch, random_bloch, random_density};
use qdist_core::sweep::{run_sweep, SweepConfig};
use qdist_core::{dn_mixed_closed, fidelity};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn eig(c: &mut Criterion) {
    let mut group = c.benchmark_group("hermitian_eig");
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for d in [2, 4, 8] {
        let m = random_density(d, &mut rng).into_matrix();
        group.bench_with_input(BenchmarkId::from_parameter(d), &m, |b, m| b.iter(|| hermitian_eig(black_box(m))));
    }
    group.finish();
}

fn distances(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut group = c.benchmark_group("fidelity");
    for d in [2, 4, 8] {
        let pair = (random_density(d, &mut rng), random_density(d, &mut rng));
        group.bench_with_input(BenchmarkId::from_parameter(d), &pair, |b, (x, y)| {
            b.iter(|| fidelity(black_box(x), black_box(y)))
        });
    }
    group.finish();

    let (x, y) = (from_bloch(&random_bloch(&mut rng)), from_bloch(&random_bloch(&mut rng)));
    c.bench_function("dn_mixed_closed/2", |b| b.iter(|| dn_mixed_closed(black_box(&x), black_box(&y))));
    c.bench_function("dn_via_purification/exact", |b| {
        b.iter(|| dn_via_purification(black_box(&x), black_box(&y), Objective::ExactOverlap))
    });
    c.bench_function("dn_via_purification/hs", |b| {
        b.iter(|| dn_via_purification(black_box(&x), black_box(&y), Objective::HsNorm))
    });
}

fn sweep(c: &mut Criterion) {
    let cfg = SweepConfig::default();
    let mut group = c.benchmark_group("sweep");
    group.sample_size(10);
    group.bench_function("default", |b| b.iter(|| run_sweep(black_box(&cfg))));
    group.finish();
}

criterion_group!(benches, eig, distances, sweep);
criterion_main!(benches);
