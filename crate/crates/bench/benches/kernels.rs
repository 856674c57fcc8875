use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use paircorr_core::arithmetic::MangoldtTable;
use paircorr_core::ordinate_sums::build_sum_multiset;
use paircorr_core::pair_correlation::f_montgomery;
use paircorr_core::special::{hardy_z, zeta};
use paircorr_core::weights::kernel_product_integral;
use paircorr_core::zeros::synthetic_catalog;
use paircorr_core::{ComplexPoint, SyntheticKind, WeightParams};

fn special(c: &mut Criterion) {
    let mut g = c.benchmark_group("special");
    for t in [10.0, 1e3, 1e5] {
        g.bench_with_input(BenchmarkId::new("hardy_z", t), &t, |b, &t| b.iter(|| hardy_z(black_box(t)).unwrap()));
    }
    g.bench_function("zeta_2_plus_10i", |b| {
        b.iter(|| zeta(black_box(ComplexPoint::new(2.0, 10.0)), 1e-12).unwrap())
    });
    g.finish();
}

fn pair_sweep(c: &mut Criterion) {
    let cat = synthetic_catalog(SyntheticKind::UnfoldedModel, 7, 5000.0).unwrap();
    let mut g = c.benchmark_group("pair_correlation");
    for alpha in [0.3, 0.9] {
        g.bench_with_input(BenchmarkId::new("f_montgomery", alpha), &alpha, |b, &a| {
            b.iter(|| f_montgomery(&cat, black_box(a), 5000.0).unwrap())
        });
    }
    g.finish();
}

fn ordinate_sums(c: &mut Criterion) {
    let cat = synthetic_catalog(SyntheticKind::Poisson, 3, 400.0).unwrap();
    let mut g = c.benchmark_group("ordinate_sums");
    g.sample_size(10);
    for mu in [2u32, 3] {
        g.bench_with_input(BenchmarkId::new("build", mu), &mu, |b, &mu| {
            b.iter(|| build_sum_multiset(&cat, mu, 400.0, 1e-9).unwrap())
        });
    }
    g.finish();
}

fn arithmetic(c: &mut Criterion) {
    c.bench_function("mangoldt_sieve_1e6", |b| b.iter(|| MangoldtTable::new(black_box(1_000_000)).unwrap()));
}

fn weights(c: &mut Criterion) {
    let p = WeightParams::new(1.0, 1).unwrap();
    c.bench_function("kernel_product_integral", |b| {
        b.iter(|| kernel_product_integral(p, black_box(0.7)).unwrap())
    });
}

criterion_group!(benches, special, pair_sweep, ordinate_sums, arithmetic, weights);
criterion_main!(benches);
