use criterion::{criterion_group, criterion_main, Criterion};
use sgg_core::analytic::{gogrow_speed, ks_profile, logsens_speed, two_signal_speed, uniform_grid};
use std::hint::black_box;

fn speeds(c: &mut Criterion) {
    c.bench_function("two_signal_speed", |b| {
        b.iter(|| two_signal_speed(black_box(2.0), black_box(1.0), 1.0, 1.0).unwrap())
    });
    c.bench_function("gogrow_speed", |b| {
        b.iter(|| gogrow_speed(black_box(2.0), 1.0, 1.0).unwrap())
    });
    c.bench_function("logsens_speed", |b| {
        b.iter(|| logsens_speed(black_box(2.0), 1.0, 1.0, 8.0, 2.0).unwrap())
    });
    let z = uniform_grid(-25.0, 25.0, 1e-3);
    c.bench_function("ks_profile_50k", |b| {
        b.iter(|| ks_profile(1.0, 2.0, 1.0, 1.0, 1.0, black_box(&z)).unwrap())
    });
}

criterion_group!(benches, speeds);
criterion_main!(benches);
