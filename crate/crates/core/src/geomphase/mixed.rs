use std::f64::consts::TAU;

use num_complex::Complex64 as C64;

use super::holonomy::{single_mode_family, track_level, GAP_TOL, MATCH_THRESHOLD};
use super::{wrap_phase, HoloResult, LevelSelector, LoopSpec};
use crate::analytic::LevelId;
use crate::error::{Error, Result};
use crate::linalg::{eigh, reduced_density, ComplexMatrix, Ket, HERMITIAN_TOL, TRACE_TOL};
use crate::model::ModelParams;

/// Eigenvalues of a density matrix at or below this weight are dropped.
pub const WEIGHT_FLOOR: f64 = 1e-9;

/// Interferometric phase of a closed loop of density matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct MixedPhase {
    /// `-arg Σ_b w_b ∏ₖ⟨v_b,k|v_b,k+1⟩`, the sign convention of the
    /// pure-state Wilson loop, in `[0, 2π)`.
    pub berry_phase: f64,
    /// `+arg` of the same sum, in `[0, 2π)`.
    pub interferometric_phase: f64,
    /// Modulus of the weighted sum.
    pub visibility: f64,
    /// Eigenvalues of the branches that were followed.
    pub weights: Vec<f64>,
}

/// Weighted average of the holonomies of each eigenvector branch of `ρ(φ)`.
///
/// `rhos[k]` is the state at `φ_k = 2πk/len`; the loop closes back on
/// `rhos[0]`. Every eigenvalue above [`WEIGHT_FLOOR`] is a branch; branches
/// are continued by overlap and must stay non-degenerate.
pub fn interferometric_phase(rhos: &[ComplexMatrix]) -> Result<MixedPhase> {
    if rhos.len() < 2 {
        return Err(Error::InvalidLoop(format!("need at least 2 density matrices, got {}", rhos.len())));
    }
    let phi_at = |k: usize| TAU * k as f64 / rhos.len() as f64;
    let branches_at = |k: usize| -> Result<(Vec<f64>, Vec<Ket>)> {
        let es = eigh(&rhos[k])?;
        let keep: Vec<usize> = (0..es.len()).filter(|&i| es.values[i] > WEIGHT_FLOOR).collect();
        if keep.windows(2).any(|w| es.values[w[1]] - es.values[w[0]] < GAP_TOL) {
            return Err(Error::RankChange { phi: phi_at(k) });
        }
        Ok((keep.iter().map(|&i| es.values[i]).collect(), keep.iter().map(|&i| es.vectors[i].clone()).collect()))
    };

    let (weights, first) = branches_at(0)?;
    if weights.is_empty() {
        return Err(Error::InvalidDensityMatrix("no eigenvalue above the weight floor".into()));
    }
    let mut prev = first.clone();
    let mut products = vec![C64::new(1.0, 0.0); weights.len()];
    for k in 1..=rhos.len() {
        let next = if k == rhos.len() { first.clone() } else { branches_at(k)?.1 };
        if next.len() != prev.len() {
            return Err(Error::RankChange { phi: phi_at(k) });
        }
        let mut taken = vec![false; next.len()];
        let mut matched = Vec::with_capacity(next.len());
        for (b, p) in prev.iter().enumerate() {
            let (j, ov) = next
                .iter()
                .enumerate()
                .map(|(j, v)| (j, p.inner(v)))
                .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
                .expect("at least one branch");
            if ov.norm() < MATCH_THRESHOLD || taken[j] {
                return Err(Error::RankChange { phi: phi_at(k) });
            }
            taken[j] = true;
            products[b] *= ov;
            matched.push(next[j].clone());
        }
        prev = matched;
    }

    let sum: C64 = weights.iter().zip(&products).map(|(&w, &z)| z * w).sum();
    let visibility = sum.norm();
    if visibility < 1e-12 {
        return Err(Error::InvalidLoop("interferometric visibility vanishes; the phase is undefined".into()));
    }
    Ok(MixedPhase {
        berry_phase: wrap_phase(-sum.arg()),
        interferometric_phase: wrap_phase(sum.arg()),
        visibility,
        weights,
    })
}

/// Mixed-state phase of subsystem 1 (spin 1 and the field) for a dressed level.
#[derive(Clone, Debug, PartialEq)]
pub struct MixedPhaseResult {
    /// Phase in the pure-state Wilson-loop convention.
    pub holonomy: HoloResult,
    /// The same phase with the opposite sign convention, in `[0, 2π)`.
    pub interferometric_phase: f64,
    pub visibility: f64,
    pub weights: Vec<f64>,
}

/// Traces spin 2 out of the tracked eigenstate at every loop point and takes
/// the interferometric phase of the resulting reduced states.
pub fn mixed_phase_numeric(
    params: &ModelParams,
    n: usize,
    level: LevelId,
    spec: &LoopSpec,
    cutoff: usize,
) -> Result<MixedPhaseResult> {
    params.validate()?;
    let family = single_mode_family(params, cutoff)?;
    let selector = LevelSelector::sector_level(params, n, level, cutoff)?;
    let tracked = track_level(&family, &selector, spec)?;
    let rhos = tracked
        .kets
        .iter()
        .map(|psi| {
            let rho = reduced_density(psi, &[2, 2, cutoff], &[0, 2])?;
            let tr = rho.trace();
            if (tr - 1.0).norm() > TRACE_TOL {
                return Err(Error::InvalidDensityMatrix(format!("reduced trace {tr} differs from 1")));
            }
            let deviation = rho.hermiticity_deviation();
            if deviation >= HERMITIAN_TOL {
                return Err(Error::InvalidDensityMatrix(format!("reduced state not Hermitian ({deviation:e})")));
            }
            Ok(rho)
        })
        .collect::<Result<Vec<_>>>()?;
    let mixed = interferometric_phase(&rhos)?;
    Ok(MixedPhaseResult {
        holonomy: HoloResult::from_parts(mixed.berry_phase, mixed.berry_phase, tracked.min_gap, 0.0, 1.0)?,
        interferometric_phase: mixed.interferometric_phase,
        visibility: mixed.visibility,
        weights: mixed.weights,
    })
}
