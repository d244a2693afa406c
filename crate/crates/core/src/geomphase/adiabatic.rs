use num_complex::Complex64 as C64;

use super::family::{HamiltonianFamily, DEGENERACY_TOL};
use super::holonomy::single_mode_family;
use crate::analytic::LevelId;
use crate::error::{Error, Result};
use crate::linalg::{eigh, Ket};
use crate::model::{ModelParams, SectorLabel};

/// Default central-difference step in the loop angle.
pub const DEFAULT_FD_STEP: f64 = 1e-4;

/// `r[p][q] = |ω_p ⟨ψ_p|∂_φψ_q⟩ / (E_p - E_q)|` for the four dressed levels
/// of photon sector `n` at `φ = 0`, indexed by level number minus one. The
/// derivative is a central difference of numerically diagonalized
/// eigenvectors. Diagonal entries are zero.
pub fn adiabatic_pair_ratios(
    params: &ModelParams,
    n: usize,
    omega_prec: f64,
    fd_step: f64,
    cutoff: usize,
) -> Result<[[f64; 4]; 4]> {
    params.validate()?;
    if !omega_prec.is_finite() {
        return Err(Error::InvalidParameter(format!("precession rate must be finite, got {omega_prec}")));
    }
    if !(fd_step > 0.0 && fd_step <= 1e-2) {
        return Err(Error::InvalidParameter(format!("fd_step must lie in (0, 1e-2], got {fd_step}")));
    }
    let family = single_mode_family(params, cutoff)?;
    let dim = family.dim();

    let mut states = Vec::with_capacity(4);
    let mut derivs = Vec::with_capacity(4);
    let mut energies = Vec::with_capacity(4);
    for level in LevelId::ALL {
        let idx = SectorLabel::new(level.sector(), n).indices(cutoff)?;
        let pick = |phi: f64| -> Result<(f64, Ket)> {
            let es = eigh(&family.block(phi, &idx)?)?;
            if es.values[1] - es.values[0] < DEGENERACY_TOL {
                return Err(Error::DegenerateSector { sector: level.sector().name(), n });
            }
            let r = usize::from(level.is_upper());
            Ok((es.values[r], es.vectors[r].clone()))
        };
        let (e0, v0) = pick(0.0)?;
        let align = |v: Ket| {
            let ov = v.inner(&v0);
            v.scale(ov / ov.norm())
        };
        let plus = align(pick(fd_step)?.1);
        let minus = align(pick(-fd_step)?.1);
        let d = plus.sub(&minus).scale(C64::new(0.5 / fd_step, 0.0));
        states.push(v0.embed(&idx, dim));
        derivs.push(d.embed(&idx, dim));
        energies.push(e0);
    }

    let mut out = [[0.0; 4]; 4];
    for p in 0..4 {
        for q in 0..4 {
            if p == q {
                continue;
            }
            let element = states[p].inner(&derivs[q]).norm() * omega_prec.abs();
            if element == 0.0 {
                continue;
            }
            let gap = (energies[p] - energies[q]).abs();
            if gap < DEGENERACY_TOL {
                let level = LevelId::ALL[p];
                return Err(Error::DegenerateSector { sector: level.sector().name(), n });
            }
            out[p][q] = element / gap;
        }
    }
    Ok(out)
}

/// Largest entry of [`adiabatic_pair_ratios`].
pub fn adiabatic_ratio_numeric(
    params: &ModelParams,
    n: usize,
    omega_prec: f64,
    fd_step: f64,
    cutoff: usize,
) -> Result<f64> {
    let r = adiabatic_pair_ratios(params, n, omega_prec, fd_step, cutoff)?;
    Ok(r.iter().flatten().copied().fold(0.0, f64::max))
}
