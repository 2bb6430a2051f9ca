use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use frakpoisson_bench::ml;
use frakpoisson_core::fpp::{sample_counts, sample_many, ConfigurationSampler, CountMethod, CountSampler, IntensityMeasure, Window};
use frakpoisson_core::{sample_nu, RngStream, StableParams};

const N: usize = 10_000;

fn nu(c: &mut Criterion) {
    let p = StableParams::new(0.5).unwrap();
    let mut rng = RngStream::new(1, 0);
    c.bench_function("sample_nu", |b| b.iter(|| sample_nu(&p, &mut rng)));
}

fn counts(c: &mut Criterion) {
    let mut g = c.benchmark_group("counts");
    g.throughput(Throughput::Elements(N as u64));
    for method in [CountMethod::Direct, CountMethod::Mixture] {
        let s = CountSampler::new(&ml(0.6), 3.0, method).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(method), &s, |b, s| {
            b.iter(|| sample_counts(s, N, &RngStream::new(2, 0)))
        });
    }
    g.bench_function("direct table setup", |b| b.iter(|| CountSampler::new(&ml(0.6), 3.0, CountMethod::Direct)));
    g.finish();
}

fn configurations(c: &mut Criterion) {
    let w = Window::unit(2);
    let mu = IntensityMeasure::constant(5.0).unwrap();
    let s = ConfigurationSampler::new(&ml(0.6), &w, &mu, CountMethod::Mixture).unwrap();
    let mut g = c.benchmark_group("configurations");
    g.throughput(Throughput::Elements(N as u64));
    g.bench_function("unit square, density 5", |b| b.iter(|| sample_many(&s, N, &RngStream::new(3, 0))));
    g.finish();
}

criterion_group!(benches, nu, counts, configurations);
criterion_main!(benches);
