//! Cyclic Jacobi eigensolver for dense complex Hermitian matrices.
//!
//! Each rotation annihilates one off-diagonal pair `(p, q)`. A complex entry
//! `a_pq = |a_pq| e^{iφ}` is handled by folding the phase into the rotation
//! `V = [[c, s e^{iφ}], [-s e^{-iφ}, c]]`, so `V^H A V` stays Hermitian and the
//! diagonal stays real. Sweeps repeat until the off-diagonal Frobenius mass
//! falls below `1e-14 ‖A‖_F`.

use num_complex::Complex64 as C64;

use super::matrix::{ComplexMatrix, Ket};
use crate::error::{Error, Result};

/// Input matrices must satisfy `max |M - M^H| < HERMITIAN_TOL`.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Eigenvalues closer than this are treated as one degenerate cluster.
pub const CLUSTER_TOL: f64 = 1e-9;

const OFF_DIAGONAL_RTOL: f64 = 1e-14;
const MAX_SWEEPS: usize = 100;

/// Ascending eigenvalues with matching orthonormal eigenvectors.
#[derive(Clone, Debug)]
pub struct Eigensystem {
    pub values: Vec<f64>,
    pub vectors: Vec<Ket>,
}

impl Eigensystem {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Matrix whose columns are the eigenvectors.
    pub fn vector_matrix(&self) -> ComplexMatrix {
        let n = self.len();
        ComplexMatrix::from_fn(n, n, |i, j| self.vectors[j][i])
    }

    /// `V diag(f(values)) V^H`.
    pub fn spectral_map(&self, f: impl Fn(f64) -> C64) -> ComplexMatrix {
        let n = self.len();
        let weights: Vec<C64> = self.values.iter().map(|&x| f(x)).collect();
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, v) in self.vectors.iter().enumerate() {
            let w = weights[k];
            for i in 0..n {
                let vi = v[i] * w;
                if vi.re == 0.0 && vi.im == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += vi * v[j].conj();
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.spectral_map(|x| C64::new(x, 0.0))
    }

    /// Index ranges of eigenvalue clusters whose neighbouring gaps are below `tol`.
    pub fn clusters(&self, tol: f64) -> Vec<std::ops::Range<usize>> {
        let mut out = Vec::new();
        let mut start = 0;
        for i in 1..=self.len() {
            if i == self.len() || self.values[i] - self.values[i - 1] >= tol {
                out.push(start..i);
                start = i;
            }
        }
        out
    }
}

/// Hermitian eigendecomposition.
///
/// Eigenvalues come back ascending. Each eigenvector is rephased so its
/// largest-modulus component is real and positive (ties within `1e-12` go to
/// the lowest index); vectors inside a degenerate cluster are orthonormal but
/// otherwise arbitrary.
pub fn eigh(m: &ComplexMatrix) -> Result<Eigensystem> {
    let n = m.ensure_square()?;
    let deviation = m.hermiticity_deviation();
    if deviation >= HERMITIAN_TOL {
        return Err(Error::NonHermitianInput { deviation });
    }
    if n == 0 {
        return Ok(Eigensystem { values: vec![], vectors: vec![] });
    }

    let mut a = m.hermitian_part();
    for i in 0..n {
        a[(i, i)] = C64::new(a[(i, i)].re, 0.0);
    }
    let mut v = ComplexMatrix::identity(n);
    let scale = a.norm_fro();
    let threshold = OFF_DIAGONAL_RTOL * scale;

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) <= threshold {
            converged = true;
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged && off_diagonal_norm(&a) > threshold {
        return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re).then(i.cmp(&j)));
    let values: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors: Vec<Ket> = order.iter().map(|&j| v.column(j)).collect();

    let mut es = Eigensystem { values, vectors: Vec::new() };
    for cluster in es.clusters(CLUSTER_TOL) {
        if cluster.len() > 1 {
            gram_schmidt(&mut vectors[cluster]);
        }
    }
    for vec in &mut vectors {
        fix_phase(vec);
    }
    es.vectors = vectors;
    Ok(es)
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let b = apq.norm();
    if b == 0.0 {
        return;
    }
    let phase = apq / b;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let tau = (aqq - app) / (2.0 * b);
    let t = if tau >= 0.0 { 1.0 / (tau + tau.hypot(1.0)) } else { -1.0 / (-tau + tau.hypot(1.0)) };
    let c = 1.0 / t.hypot(1.0);
    let s = t * c;
    let se = phase * s; // s e^{iφ}
    let sec = se.conj(); // s e^{-iφ}
    let n = a.rows();

    // A <- A V
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * c - sec * akq;
        a[(k, q)] = se * akp + akq * c;
    }
    // A <- V^H A
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * c - se * aqk;
        a[(q, k)] = sec * apk + aqk * c;
    }
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c - sec * vkq;
        v[(k, q)] = se * vkp + vkq * c;
    }
}

fn gram_schmidt(vectors: &mut [Ket]) {
    for i in 0..vectors.len() {
        let (done, rest) = vectors.split_at_mut(i);
        let current = &mut rest[0];
        for prev in done.iter() {
            let proj = prev.inner(current);
            current.axpy(-proj, prev);
        }
        if let Some(unit) = current.normalized() {
            *current = unit;
        }
    }
}

fn fix_phase(v: &mut Ket) {
    let mut best = 0;
    let mut best_abs = 0.0f64;
    for (i, z) in v.amplitudes().iter().enumerate() {
        let a = z.norm();
        if a > best_abs + 1e-12 {
            best = i;
            best_abs = a;
        }
    }
    if best_abs == 0.0 {
        return;
    }
    let rot = v[best].conj() / best_abs;
    for z in v.amplitudes_mut() {
        *z *= rot;
    }
    v[best] = C64::new(v[best].re, 0.0);
}
