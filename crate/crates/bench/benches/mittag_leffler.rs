use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use frakpoisson_bench::ml;
use frakpoisson_core::{count_weights, ml_deriv, ml_eval, ml_oracle};
use num_complex::Complex64;
use std::hint::black_box;

fn eval(c: &mut Criterion) {
    let mut g = c.benchmark_group("ml_eval");
    for (label, z) in [
        ("taylor", Complex64::new(-0.5, 0.3)),
        ("contour", Complex64::new(-12.0, 0.0)),
        ("residue", Complex64::new(3.0, 2.0)),
    ] {
        for alpha in [0.3, 0.8] {
            let p = ml(alpha);
            g.bench_with_input(BenchmarkId::new(label, alpha), &z, |b, z| b.iter(|| ml_eval(&p, black_box(*z))));
        }
    }
    g.finish();
}

fn deriv(c: &mut Criterion) {
    let p = ml(0.6);
    c.bench_function("ml_deriv/n=5 x=-3", |b| b.iter(|| ml_deriv(&p, 5, black_box(-3.0))));
    c.bench_function("count_weights/mass=4 n<=40", |b| b.iter(|| count_weights(&p, black_box(4.0), 40)));
}

fn oracle(c: &mut Criterion) {
    c.bench_function("ml_oracle/20 digits", |b| b.iter(|| ml_oracle(0.5, black_box(Complex64::new(-4.0, 1.0)), 20)));
}

criterion_group!(benches, eval, deriv, oracle);
criterion_main!(benches);
