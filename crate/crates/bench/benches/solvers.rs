use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use vortex_core::{
    bessel_i0_scaled, diffuse_direct, diffuse_spectral, eval_flat_analytic, make_lg_field,
    FlatHoleSpec, GridSpec, LGModeSpec, MediumParams,
};

const W0: f64 = 670e-6;

fn diffusion(c: &mut Criterion) {
    let medium = MediumParams::diffusion_only(1.1e-3).unwrap();
    let spec = LGModeSpec::new(1, W0, 1.0).unwrap();
    let mut group = c.benchmark_group("diffusion");
    for n in [64usize, 128, 256] {
        let grid = GridSpec::square(n, 12.8 * W0 / n as f64).unwrap();
        let field = make_lg_field(&spec, &grid).unwrap();
        group.bench_with_input(BenchmarkId::new("spectral", n), &field, |b, f| {
            b.iter(|| diffuse_spectral(black_box(f), &medium, 110e-6).unwrap())
        });
        if n <= 128 {
            group.bench_with_input(BenchmarkId::new("direct", n), &field, |b, f| {
                b.iter(|| diffuse_direct(black_box(f), &medium, 110e-6).unwrap())
            });
        }
    }
    group.finish();
}

fn closed_form(c: &mut Criterion) {
    let medium = MediumParams::diffusion_only(1.1e-3).unwrap();
    let spec = FlatHoleSpec::new(W0, W0 / 2.0, 1.0).unwrap();
    c.bench_function("flat closed form, 64 radii", |b| {
        b.iter(|| {
            (0..64)
                .map(|k| eval_flat_analytic(&spec, &medium, 61.2e-6, k as f64 * 40e-6).unwrap())
                .sum::<f64>()
        })
    });
    c.bench_function("bessel i0 scaled", |b| {
        b.iter(|| {
            (0..1000)
                .map(|k| bessel_i0_scaled(black_box(k as f64 * 0.7)))
                .sum::<f64>()
        })
    });
}

criterion_group!(benches, diffusion, closed_form);
criterion_main!(benches);
