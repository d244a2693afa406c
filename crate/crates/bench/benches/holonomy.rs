use criterion::{black_box, criterion_group, criterion_main, Criterion};

use qberry_bench::{hermitian_fixture, reference_params};
use qberry_core::analytic::LevelId;
use qberry_core::geomphase::{berry_loop_phase, mixed_phase_numeric, two_mode_loop_phase};
use qberry_core::linalg::eigh;
use qberry_core::LoopSpec;

fn eigensolver(c: &mut Criterion) {
    let m = hermitian_fixture(32);
    c.bench_function("eigh_32", |b| b.iter(|| eigh(black_box(&m)).unwrap()));
}

fn loops(c: &mut Criterion) {
    let p = reference_params();
    let spec = LoopSpec::default();
    c.bench_function("wilson_single_mode_2000", |b| {
        b.iter(|| berry_loop_phase(black_box(&p), 1, LevelId::L1, &spec, 8).unwrap())
    });
    c.bench_function("mixed_single_mode_2000", |b| {
        b.iter(|| mixed_phase_numeric(black_box(&p), 1, LevelId::L1, &spec, 8).unwrap())
    });
    let two = LoopSpec::two_mode(1.0);
    c.bench_function("wilson_two_mode_4000", |b| {
        b.iter(|| two_mode_loop_phase(black_box(&p), 1, 0, 1.0, LevelId::L1, &two, 8).unwrap())
    });
}

criterion_group!(benches, eigensolver, loops);
criterion_main!(benches);
