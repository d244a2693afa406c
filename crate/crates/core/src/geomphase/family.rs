use num_complex::Complex64 as C64;

use crate::analytic::LevelId;
use crate::error::{Error, Result};
use crate::linalg::{eigh, ComplexMatrix, Ket, UnitaryFlow, HERMITIAN_TOL};
use crate::model::{build_hamiltonian, SectorLabel};

/// A loop of Hermitian matrices `φ -> H(φ)`, `φ ∈ [0, 2π]`.
pub trait HamiltonianFamily {
    fn dim(&self) -> usize;

    fn at(&self, phi: f64) -> Result<ComplexMatrix>;

    /// Principal block of `H(φ)` on `indices`.
    fn block(&self, phi: f64, indices: &[usize]) -> Result<ComplexMatrix> {
        Ok(self.at(phi)?.submatrix(indices))
    }

    /// Largest modulus of `H(φ)[i][j]` with `i` in `indices` and `j` outside.
    fn leakage(&self, phi: f64, indices: &[usize]) -> Result<f64> {
        Ok(leakage_of(&self.at(phi)?, indices))
    }

    /// `U(φ)|ket⟩` when the family is generated as `H(φ) = U(φ) H(0) U†(φ)`.
    fn transport(&self, _phi: f64, _ket: &Ket) -> Option<Ket> {
        None
    }
}

pub(crate) fn leakage_of(h: &ComplexMatrix, indices: &[usize]) -> f64 {
    let mut inside = vec![false; h.rows()];
    for &i in indices {
        inside[i] = true;
    }
    let mut worst = 0.0f64;
    for &i in indices {
        for (j, z) in h.row(i).iter().enumerate() {
            if !inside[j] {
                worst = worst.max(z.norm());
            }
        }
    }
    worst
}

/// Any closure `φ -> H(φ)`. Has no transport, so it supports only
/// overlap-matched continuation.
pub struct FnFamily<F> {
    dim: usize,
    f: F,
}

impl<F: Fn(f64) -> ComplexMatrix> FnFamily<F> {
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, f }
    }
}

impl<F: Fn(f64) -> ComplexMatrix> HamiltonianFamily for FnFamily<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn at(&self, phi: f64) -> Result<ComplexMatrix> {
        let h = (self.f)(phi);
        if h.rows() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: h.rows() });
        }
        Ok(h)
    }
}

enum Generator {
    Diagonal(Vec<f64>),
    Dense(ComplexMatrix, UnitaryFlow),
}

/// `H(φ) = e^{-iφG} H₀ e^{iφG}` for Hermitian `H₀` and generator `G`.
///
/// Diagonal generators (photon-number and `J_z` rotations) take a fast path
/// that rephases matrix entries instead of multiplying matrices.
pub struct ConjugatedFamily {
    base: ComplexMatrix,
    generator: Generator,
}

impl ConjugatedFamily {
    pub fn new(base: ComplexMatrix, generator: &ComplexMatrix) -> Result<Self> {
        let dim = base.ensure_square()?;
        if generator.rows() != dim || generator.cols() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: generator.rows() });
        }
        let deviation = base.hermiticity_deviation();
        if deviation >= HERMITIAN_TOL {
            return Err(Error::NonHermitianInput { deviation });
        }
        let off_diagonal_zero = (0..dim).all(|i| (0..dim).all(|j| i == j || generator[(i, j)].norm() == 0.0));
        let generator = if off_diagonal_zero && (0..dim).all(|i| generator[(i, i)].im == 0.0) {
            Generator::Diagonal((0..dim).map(|i| generator[(i, i)].re).collect())
        } else {
            Generator::Dense(generator.clone(), UnitaryFlow::new(generator)?)
        };
        Ok(Self { base, generator })
    }

    pub fn base(&self) -> &ComplexMatrix {
        &self.base
    }

    /// The same loop traversed backwards (`G -> -G`).
    pub fn reversed(&self) -> Result<Self> {
        let g = match &self.generator {
            Generator::Diagonal(d) => ComplexMatrix::real_diagonal(&d.iter().map(|x| -x).collect::<Vec<_>>()),
            Generator::Dense(g, _) => g.scale(C64::new(-1.0, 0.0)),
        };
        Self::new(self.base.clone(), &g)
    }

    fn phases(d: &[f64], phi: f64) -> impl Fn(usize, usize) -> C64 + '_ {
        move |i, j| C64::from_polar(1.0, -phi * (d[i] - d[j]))
    }
}

impl HamiltonianFamily for ConjugatedFamily {
    fn dim(&self) -> usize {
        self.base.rows()
    }

    fn at(&self, phi: f64) -> Result<ComplexMatrix> {
        match &self.generator {
            Generator::Diagonal(d) => {
                let ph = Self::phases(d, phi);
                let n = self.base.rows();
                Ok(ComplexMatrix::from_fn(n, n, |i, j| self.base[(i, j)] * ph(i, j)))
            }
            Generator::Dense(_, flow) => {
                let u = flow.at(phi);
                Ok((&(&u * &self.base) * &u.adjoint()).hermitian_part())
            }
        }
    }

    fn block(&self, phi: f64, indices: &[usize]) -> Result<ComplexMatrix> {
        match &self.generator {
            Generator::Diagonal(d) => {
                let ph = Self::phases(d, phi);
                let k = indices.len();
                Ok(ComplexMatrix::from_fn(k, k, |a, b| {
                    let (i, j) = (indices[a], indices[b]);
                    self.base[(i, j)] * ph(i, j)
                }))
            }
            Generator::Dense(..) => Ok(self.at(phi)?.submatrix(indices)),
        }
    }

    fn leakage(&self, phi: f64, indices: &[usize]) -> Result<f64> {
        match &self.generator {
            // rephasing leaves entry moduli unchanged
            Generator::Diagonal(_) => Ok(leakage_of(&self.base, indices)),
            Generator::Dense(..) => Ok(leakage_of(&self.at(phi)?, indices)),
        }
    }

    fn transport(&self, phi: f64, ket: &Ket) -> Option<Ket> {
        match &self.generator {
            Generator::Diagonal(d) => Some(Ket::from_amplitudes(
                ket.amplitudes().iter().zip(d).map(|(&a, &g)| a * C64::from_polar(1.0, -phi * g)).collect(),
            )),
            Generator::Dense(_, flow) => flow.at(phi).apply(ket).ok(),
        }
    }
}

/// Which eigenvector to follow: an invariant subspace of the family (given as
/// basis positions) and a reference state used to pick the level at `φ = 0`.
#[derive(Clone, Debug)]
pub struct LevelSelector {
    pub subspace: Vec<usize>,
    pub reference: Ket,
}

impl LevelSelector {
    pub fn new(subspace: Vec<usize>, reference: Ket) -> Self {
        Self { subspace, reference }
    }

    /// Level `level` of photon sector `n` in the single-mode model, taken from
    /// a numerical diagonalization of the sector block (upper eigenvalue for
    /// levels 1 and 3, lower for 2 and 4).
    pub fn sector_level(params: &crate::model::ModelParams, n: usize, level: LevelId, cutoff: usize) -> Result<Self> {
        let label = SectorLabel::new(level.sector(), n);
        let idx = label.indices(cutoff)?;
        let h = build_hamiltonian(params, cutoff)?;
        let es = eigh(&h.submatrix(&idx))?;
        if es.values[1] - es.values[0] < DEGENERACY_TOL {
            return Err(Error::DegenerateSector { sector: level.sector().name(), n });
        }
        let v = &es.vectors[if level.is_upper() { 1 } else { 0 }];
        Ok(Self { subspace: idx.to_vec(), reference: v.embed(&idx, 4 * cutoff) })
    }
}

/// Sector eigenvalues closer than this are reported as a degenerate sector.
pub const DEGENERACY_TOL: f64 = 1e-12;
