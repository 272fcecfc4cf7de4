use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use palindrome_lab::expsum::{k2_full, k2_q_average, k2_stationary_phase};
use palindrome_lab::oscillate::{fourier_transform, SmoothBump};
use palindrome_lab::ExpSumParams;

fn kloosterman(c: &mut Criterion) {
    let mut g = c.benchmark_group("k2");
    for modulus in [1u64 << 12, 1 << 16, 10_000, 1_000_000] {
        let p = ExpSumParams::new(3, 5, -7, 11, modulus).unwrap();
        g.bench_with_input(BenchmarkId::new("full", modulus), &p, |bench, p| bench.iter(|| k2_full(black_box(p))));
        g.bench_with_input(BenchmarkId::new("stationary_phase", modulus), &p, |bench, p| {
            bench.iter(|| k2_stationary_phase(black_box(p)).unwrap())
        });
    }
    g.finish();
    c.bench_function("k2_q_average_2^16_Q64", |bench| {
        bench.iter(|| k2_q_average(1, 3, 64, black_box(1 << 16)).unwrap())
    });
}

fn transforms(c: &mut Criterion) {
    let psi = SmoothBump::psi();
    let mut g = c.benchmark_group("fourier_transform_psi");
    for k in [0.5, 8.0, 64.0] {
        g.bench_with_input(BenchmarkId::from_parameter(k), &k, |bench, &k| {
            bench.iter(|| fourier_transform(&psi, black_box(k)).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, kloosterman, transforms);
criterion_main!(benches);
