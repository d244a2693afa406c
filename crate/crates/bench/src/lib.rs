//! Fixed workloads shared by the benchmarks.

use qberry_core::{ComplexMatrix, ModelParams};

/// Resonant parameters with a moderate spin-spin coupling.
pub fn reference_params() -> ModelParams {
    ModelParams::resonant(0.5)
}

/// A dense Hermitian matrix with deterministic, irregular entries.
pub fn hermitian_fixture(dim: usize) -> ComplexMatrix {
    let entry = |i: usize, j: usize| ((i * 31 + j * 17) % 23) as f64 / 23.0 - 0.5;
    let m = ComplexMatrix::from_fn(dim, dim, |i, j| num_complex::Complex64::new(entry(i, j), entry(j, i + 3)));
    m.hermitian_part()
}
