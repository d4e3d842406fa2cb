use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use sgg_core::preset;
use sgg_core::solver::{solve_tridiagonal, Stepper};
use std::hint::black_box;

fn thomas(c: &mut Criterion) {
    let mut group = c.benchmark_group("tridiagonal");
    for n in [1_000usize, 10_000] {
        let lower = vec![-1.0; n];
        let upper = vec![-1.0; n];
        let diag = vec![3.0; n];
        let rhs: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
        let mut scratch = vec![0.0; n];
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| {
                let mut x = rhs.clone();
                solve_tridiagonal(&lower, &diag, &upper, &mut x, &mut scratch);
                black_box(x)
            })
        });
    }
    group.finish();
}

fn steps(c: &mut Criterion) {
    let mut group = c.benchmark_group("step");
    for name in ["ks-rescued", "two-signal", "gogrow", "logsens"] {
        let p = preset(name).unwrap();
        let init = p.initial_state().unwrap();
        let mut stepper = Stepper::new(&p.spec, &p.grid, &p.bc, &p.config).unwrap();
        group.bench_function(name, |b| {
            b.iter_batched_ref(
                || init.clone(),
                |state| stepper.step(state, f64::INFINITY).unwrap(),
                criterion::BatchSize::SmallInput,
            )
        });
    }
    group.finish();
}

criterion_group!(benches, thomas, steps);
criterion_main!(benches);
