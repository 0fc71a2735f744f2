use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use htube_core::algebra::HTypeAlgebra;
use htube_core::geodesic::{geodesic_numeric, phi3, TangentVector3};
use htube_core::kernel::{eval_scalar, ScalarFn};
use htube_core::ptilde::{det_dptilde3, dptilde_matrix, ptilde, ptilde3};
use num_complex::Complex64;

fn scalar(c: &mut Criterion) {
    c.bench_function("f0 series branch", |b| {
        b.iter(|| eval_scalar(ScalarFn::F0, black_box(0.3)))
    });
    c.bench_function("f0 closed form", |b| {
        b.iter(|| eval_scalar(ScalarFn::F0, black_box(2.5)))
    });
}

fn slice_maps(c: &mut Criterion) {
    let v = TangentVector3::new(0.7, -0.4, 1.3);
    c.bench_function("ptilde3", |b| b.iter(|| ptilde3(black_box(v))));
    c.bench_function("det_dptilde3", |b| b.iter(|| det_dptilde3(black_box(v))));
    c.bench_function("phi3 complex", |b| {
        b.iter(|| phi3(black_box(Complex64::new(0.4, 1.0)), black_box(v)))
    });
}

fn general_maps(c: &mut Criterion) {
    let q = HTypeAlgebra::quaternionic();
    let p = htube_core::algebra::AlgebraElement::from_flat(&[0.3, -0.2, 0.5, 0.1, 0.9, -0.4, 0.2], 4);
    c.bench_function("ptilde quaternionic", |b| b.iter(|| ptilde(&q, black_box(&p)).unwrap()));
    c.bench_function("dptilde matrix quaternionic", |b| {
        b.iter(|| dptilde_matrix(&q, black_box(&p)).unwrap())
    });
    c.bench_function("geodesic 1000 steps quaternionic", |b| {
        b.iter(|| geodesic_numeric(&q, black_box(&p), 5.0, 1000).unwrap())
    });
}

criterion_group!(benches, scalar, slice_maps, general_maps);
criterion_main!(benches);
