use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use qbivar::comoment::{population_lcomoments, sample_lcomoments};
use qbivar::fit::fit;
use qbivar::lmom::sample_lmoments;
use qbivar::sample::draw;
use qbivar::{NumericConfig, SampleMethod, SamplerSpec};
use qbivar_bench::{general_model, sample};

fn marginal(c: &mut Criterion) {
    let cfg = NumericConfig::default();
    let m = general_model().m1;
    c.bench_function("quantile", |b| b.iter(|| m.quantile(black_box(0.37), &cfg).unwrap()));
    let x = m.quantile(0.37, &cfg).unwrap();
    c.bench_function("cdf", |b| b.iter(|| m.cdf(black_box(x), &cfg).unwrap()));
}

fn moments(c: &mut Criterion) {
    let cfg = NumericConfig::default();
    let bp = general_model();
    let s = sample(1000, SampleMethod::Transform);
    c.bench_function("sample_lmoments_1000", |b| b.iter(|| sample_lmoments(black_box(&s.x1), 4).unwrap()));
    c.bench_function("sample_lcomoments_1000", |b| b.iter(|| sample_lcomoments(black_box(&s)).unwrap()));
    let mut g = c.benchmark_group("slow");
    g.sample_size(10);
    g.bench_function("population_lcomoments", |b| b.iter(|| population_lcomoments(black_box(&bp), &cfg).unwrap()));
    g.bench_function("fit_1000", |b| b.iter(|| fit(black_box(&s), &cfg).unwrap()));
    g.finish();
}

fn sampling(c: &mut Criterion) {
    let cfg = NumericConfig::default();
    let bp = general_model();
    let mut g = c.benchmark_group("draw");
    g.sample_size(10);
    for method in [SampleMethod::Transform, SampleMethod::Exact] {
        g.bench_with_input(BenchmarkId::new(method.name(), 10_000), &method, |b, &m| {
            b.iter(|| draw(&bp, &SamplerSpec { seed: 2, n: 10_000, method: m }, &cfg).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, marginal, moments, sampling);
criterion_main!(benches);
