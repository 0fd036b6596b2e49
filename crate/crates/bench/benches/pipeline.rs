use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ek_core::cache::{self, FunctionTag};
use ek_core::ek::{self, Caches, Method};
use ek_core::fft::{self, Sign};
use ek_core::multgroup::build_context;
use ek_core::specfun::{self, EvalConfig};
use num_complex::Complex64;

fn special_functions(c: &mut Criterion) {
    let cfg = EvalConfig::default();
    let mut g = c.benchmark_group("specfun");
    g.bench_function("s_pair_integral/0.3", |b| {
        b.iter(|| specfun::s_pair_integral(black_box(0.3), &cfg).unwrap())
    });
    g.bench_function("s_pair_series/0.3", |b| {
        b.iter(|| specfun::s_pair_series(black_box(0.3), &cfg).unwrap())
    });
    g.bench_function("s_pair_series/0.001", |b| {
        b.iter(|| specfun::s_pair_series(black_box(0.001), &cfg).unwrap())
    });
    g.bench_function("t_function/0.3", |b| b.iter(|| specfun::t_function(black_box(0.3), &cfg).unwrap()));
    g.bench_function("log_gamma/0.3", |b| b.iter(|| specfun::log_gamma(black_box(0.3)).unwrap()));
    g.bench_function("digamma/0.3", |b| b.iter(|| specfun::digamma(black_box(0.3)).unwrap()));
    g.finish();
}

fn transforms(c: &mut Criterion) {
    let mut g = c.benchmark_group("dft");
    // q−1 for q = 1009, 2003, 10007 and 30011; 10007 is prime, so its
    // length exercises the chirp path.
    for len in [1008usize, 2002, 10006, 10007, 30010] {
        let x: Vec<Complex64> = (0..len).map(|k| Complex64::new((k as f64).sin(), 0.0)).collect();
        g.bench_with_input(BenchmarkId::new("fast", len), &x, |b, x| b.iter(|| fft::dft(x, Sign::Minus)));
    }
    let x: Vec<Complex64> = (0..1008).map(|k| Complex64::new((k as f64).sin(), 0.0)).collect();
    g.bench_with_input(BenchmarkId::new("naive", 1008), &x, |b, x| {
        b.iter(|| fft::naive_dft(x, Sign::Minus).unwrap())
    });
    g.finish();
}

fn pipeline(c: &mut Criterion) {
    let cfg = EvalConfig::default();
    let mut g = c.benchmark_group("pipeline");
    g.sample_size(10);
    for q in [1009u64, 10007] {
        let ctx = build_context(q).unwrap();
        for tag in FunctionTag::ALL {
            g.bench_function(BenchmarkId::new(format!("precompute/{tag}"), q), |b| {
                b.iter(|| cache::precompute_full(&ctx, tag, &cfg).unwrap())
            });
        }
        let caches = Caches::compute(&ctx, Method::Both, &cfg).unwrap();
        for method in [Method::S, Method::T] {
            g.bench_function(BenchmarkId::new(format!("fft_stage/{method}"), q), |b| {
                b.iter(|| ek::compute_ek(&ctx, &caches, method).unwrap())
            });
        }
    }
    g.finish();
}

criterion_group!(benches, special_functions, transforms, pipeline);
criterion_main!(benches);
