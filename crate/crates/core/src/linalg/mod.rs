//! Dense complex linear algebra: Hermitian eigensolver, unitary exponentials
//! of Hermitian generators, and partial traces.

mod eigh;
mod matrix;

pub use eigh::{eigh, Eigensystem, CLUSTER_TOL, HERMITIAN_TOL};
pub use matrix::{ComplexMatrix, Ket};

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// `exp(-i t h)` for Hermitian `h`, via the eigendecomposition of `h`.
pub fn expm_unitary(h: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    Ok(UnitaryFlow::new(h)?.at(t))
}

/// The one-parameter group `t -> exp(-i t h)` with `h` diagonalized once.
#[derive(Clone, Debug)]
pub struct UnitaryFlow {
    eig: Eigensystem,
}

impl UnitaryFlow {
    pub fn new(generator: &ComplexMatrix) -> Result<Self> {
        Ok(Self { eig: eigh(generator)? })
    }

    pub fn dim(&self) -> usize {
        self.eig.len()
    }

    pub fn at(&self, t: f64) -> ComplexMatrix {
        self.eig.spectral_map(|x| C64::from_polar(1.0, -t * x))
    }
}

/// Tolerance on `|Tr ρ - 1|` for density-matrix inputs.
pub const TRACE_TOL: f64 = 1e-10;
/// Lowest eigenvalue accepted for a positive semidefinite input.
pub const PSD_FLOOR: f64 = -1e-10;

/// Traces out every tensor factor not listed in `keep`.
///
/// `dims` lists the factor dimensions, slowest-varying first. `keep` need not
/// be sorted; the kept factors appear in ascending order in the result.
/// Keeping nothing yields the 1x1 matrix `[Tr ρ]`.
pub fn partial_trace(rho: &ComplexMatrix, dims: &[usize], keep: &[usize]) -> Result<ComplexMatrix> {
    let layout = Layout::new(dims, keep)?;
    let n = rho.ensure_square()?;
    if n != layout.total {
        return Err(Error::DimensionMismatch { expected: layout.total, found: n });
    }
    let deviation = rho.hermiticity_deviation();
    if deviation >= HERMITIAN_TOL {
        return Err(Error::InvalidDensityMatrix(format!("not Hermitian (deviation {deviation:e})")));
    }
    let tr = rho.trace();
    if (tr - 1.0).norm() > TRACE_TOL {
        return Err(Error::InvalidDensityMatrix(format!("trace {tr} differs from 1")));
    }
    let spectrum = eigh(rho)?;
    if let Some(&lowest) = spectrum.values.first() {
        if lowest < PSD_FLOOR {
            return Err(Error::InvalidDensityMatrix(format!("negative eigenvalue {lowest:e}")));
        }
    }

    let mut out = ComplexMatrix::zeros(layout.kept, layout.kept);
    for a in 0..layout.kept {
        for b in 0..layout.kept {
            let mut acc = C64::new(0.0, 0.0);
            for t in 0..layout.traced {
                acc += rho[(layout.join(a, t), layout.join(b, t))];
            }
            out[(a, b)] = acc;
        }
    }
    Ok(out)
}

/// Reduced density matrix of the pure state `|ψ><ψ|`, without forming the
/// full projector.
pub fn reduced_density(psi: &Ket, dims: &[usize], keep: &[usize]) -> Result<ComplexMatrix> {
    let layout = Layout::new(dims, keep)?;
    if psi.dim() != layout.total {
        return Err(Error::DimensionMismatch { expected: layout.total, found: psi.dim() });
    }
    if !psi.is_normalized(TRACE_TOL) {
        return Err(Error::InvalidDensityMatrix(format!("state norm {} differs from 1", psi.norm())));
    }
    let mut out = ComplexMatrix::zeros(layout.kept, layout.kept);
    for t in 0..layout.traced {
        for a in 0..layout.kept {
            let pa = psi[layout.join(a, t)];
            if pa.re == 0.0 && pa.im == 0.0 {
                continue;
            }
            for b in 0..layout.kept {
                out[(a, b)] += pa * psi[layout.join(b, t)].conj();
            }
        }
    }
    Ok(out)
}

/// Index bookkeeping for splitting a tensor-product basis into kept and
/// traced factors.
struct Layout {
    dims: Vec<usize>,
    keep_mask: Vec<bool>,
    total: usize,
    kept: usize,
    traced: usize,
}

impl Layout {
    fn new(dims: &[usize], keep: &[usize]) -> Result<Self> {
        let mut keep_mask = vec![false; dims.len()];
        for &k in keep {
            if k >= dims.len() {
                return Err(Error::DimensionMismatch { expected: dims.len(), found: k + 1 });
            }
            keep_mask[k] = true;
        }
        let total = dims.iter().product();
        let kept = dims.iter().zip(&keep_mask).filter(|(_, &m)| m).map(|(d, _)| d).product();
        let traced = dims.iter().zip(&keep_mask).filter(|(_, &m)| !m).map(|(d, _)| d).product();
        Ok(Self { dims: dims.to_vec(), keep_mask, total, kept, traced })
    }

    /// Full index from a kept-factor index and a traced-factor index.
    fn join(&self, mut kept: usize, mut traced: usize) -> usize {
        let mut index = 0;
        let mut stride = 1;
        for (d, &m) in self.dims.iter().zip(&self.keep_mask).rev() {
            let digit = if m {
                let x = kept % d;
                kept /= d;
                x
            } else {
                let x = traced % d;
                traced /= d;
                x
            };
            index += digit * stride;
            stride *= d;
        }
        index
    }
}
