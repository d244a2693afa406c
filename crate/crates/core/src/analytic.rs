//! Closed-form mixing angles, sector energies, dressed eigenstates and the
//! geometric phases of the composite system and of subsystem 1.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::Ket;
use crate::model::{ModelParams, Sector, SectorLabel};

/// One of the four dressed levels of a photon-number sector. Levels 1 and 2
/// live in the α-sector (spin 2 excited), 3 and 4 in the β-sector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LevelId {
    L1,
    L2,
    L3,
    L4,
}

impl LevelId {
    pub const ALL: [LevelId; 4] = [LevelId::L1, LevelId::L2, LevelId::L3, LevelId::L4];

    pub fn from_number(k: u8) -> Option<Self> {
        match k {
            1 => Some(LevelId::L1),
            2 => Some(LevelId::L2),
            3 => Some(LevelId::L3),
            4 => Some(LevelId::L4),
            _ => None,
        }
    }

    pub fn number(self) -> u8 {
        match self {
            LevelId::L1 => 1,
            LevelId::L2 => 2,
            LevelId::L3 => 3,
            LevelId::L4 => 4,
        }
    }

    pub fn sector(self) -> Sector {
        match self {
            LevelId::L1 | LevelId::L2 => Sector::Alpha,
            LevelId::L3 | LevelId::L4 => Sector::Beta,
        }
    }

    /// Levels 1 and 3 are the upper branch `E₊` of their block.
    pub fn is_upper(self) -> bool {
        matches!(self, LevelId::L1 | LevelId::L3)
    }
}

/// `ω + 2J - ν` for the α-sector, `ω - 2J - ν` for the β-sector.
pub fn detuning(params: &ModelParams, sector: Sector) -> f64 {
    match sector {
        Sector::Alpha => params.omega + 2.0 * params.j_c - params.nu,
        Sector::Beta => params.omega - 2.0 * params.j_c - params.nu,
    }
}

/// `√(4λ²(n+1) + δ²)`, the level splitting of a sector.
pub fn splitting(params: &ModelParams, sector: Sector, n: usize) -> f64 {
    let coupling = 2.0 * params.lambda_c * ((n + 1) as f64).sqrt();
    coupling.hypot(detuning(params, sector))
}

/// Cosine of the mixing angle of one sector. With `λ = 0` this is the sign
/// of the detuning; zero coupling and zero detuning leave it undefined.
pub fn sector_cos(params: &ModelParams, sector: Sector, n: usize) -> Result<f64> {
    params.validate()?;
    let split = splitting(params, sector, n);
    if split == 0.0 {
        return Err(Error::DegenerateSector { sector: sector.name(), n });
    }
    Ok((detuning(params, sector) / split).clamp(-1.0, 1.0))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MixingAngles {
    pub cos_alpha: f64,
    pub cos_beta: f64,
    pub alpha: f64,
    pub beta: f64,
}

pub fn mixing_angles(params: &ModelParams, n: usize) -> Result<MixingAngles> {
    let cos_alpha = sector_cos(params, Sector::Alpha, n)?;
    let cos_beta = sector_cos(params, Sector::Beta, n)?;
    Ok(MixingAngles { cos_alpha, cos_beta, alpha: cos_alpha.acos(), beta: cos_beta.acos() })
}

/// Energies and mixing angle of one sector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SectorEnergies {
    pub e_plus: f64,
    pub e_minus: f64,
    pub cos_angle: f64,
    pub angle: f64,
}

/// `E± = mean ± ½√(4λ²(n+1) + δ²)` with mean `(ω + (2n+1)ν)/2` for α and
/// `((2n+1)ν - ω)/2` for β.
pub fn sector_eigensystem(params: &ModelParams, n: usize, sector: Sector) -> Result<SectorEnergies> {
    let cos_angle = sector_cos(params, sector, n)?;
    let photons = (2 * n + 1) as f64 * params.nu;
    let mean = match sector {
        Sector::Alpha => 0.5 * (params.omega + photons),
        Sector::Beta => 0.5 * (photons - params.omega),
    };
    let half = 0.5 * splitting(params, sector, n);
    Ok(SectorEnergies { e_plus: mean + half, e_minus: mean - half, cos_angle, angle: cos_angle.acos() })
}

pub fn level_energy(params: &ModelParams, n: usize, level: LevelId) -> Result<f64> {
    let e = sector_eigensystem(params, n, level.sector())?;
    Ok(if level.is_upper() { e.e_plus } else { e.e_minus })
}

/// Dressed eigenstate of the phase-shifted Hamiltonian `U(φ) H U†(φ)`,
/// embedded in the single-mode basis of the given cutoff:
///
/// ```text
/// |ψ₁⟩ =  cos(α/2) e^{-inφ} |e₁e₂n⟩ + sin(α/2) e^{-i(n+1)φ} |g₁e₂,n+1⟩
/// |ψ₂⟩ = -sin(α/2) e^{-inφ} |e₁e₂n⟩ + cos(α/2) e^{-i(n+1)φ} |g₁e₂,n+1⟩
/// ```
///
/// and likewise with β on the spin-2 ground block.
pub fn eigenstate(params: &ModelParams, n: usize, level: LevelId, phi: f64, cutoff: usize) -> Result<Ket> {
    let sector = level.sector();
    let idx = SectorLabel::new(sector, n).indices(cutoff)?;
    let half = 0.5 * sector_cos(params, sector, n)?.acos();
    let (c, s) = (half.cos(), half.sin());
    let (upper, lower) = if level.is_upper() { (c, s) } else { (-s, c) };
    let mut ket = Ket::zeros(4 * cutoff);
    ket[idx[0]] = C64::from_polar(upper, -(n as f64) * phi);
    ket[idx[1]] = C64::from_polar(lower, -((n + 1) as f64) * phi);
    Ok(ket)
}

/// A phase split into its value in `[0, 2π)` and an integer winding.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseResult {
    pub total: f64,
    pub reduced: f64,
    pub winding: i64,
}

impl PhaseResult {
    pub fn from_total(total: f64) -> Self {
        let mut winding = (total / TAU).floor() as i64;
        let mut reduced = total - TAU * winding as f64;
        if reduced >= TAU {
            reduced -= TAU;
            winding += 1;
        } else if reduced < 0.0 {
            reduced += TAU;
            winding -= 1;
        }
        Self { total, reduced, winding }
    }
}

/// Composite-system Berry phase of one dressed level:
///
/// ```text
/// γ₁ = 2nπ + π(1 - cos α)      γ₂ = 2(n+1)π - π(1 - cos α)
/// γ₃ = 2nπ + π(1 - cos β)      γ₄ = 2(n+1)π - π(1 - cos β)
/// ```
pub fn berry_phase(params: &ModelParams, n: usize, level: LevelId) -> Result<PhaseResult> {
    let cos = sector_cos(params, level.sector(), n)?;
    let nf = n as f64;
    let total =
        if level.is_upper() { 2.0 * nf * PI + PI * (1.0 - cos) } else { 2.0 * (nf + 1.0) * PI - PI * (1.0 - cos) };
    Ok(PhaseResult::from_total(total))
}

/// Phase acquired by `U(θ,φ)|ψᵢ⟩⊗|n'⟩` as φ runs once around the loop:
/// `π cos θ (n - n' + ½) ∓ (π/2) cos θ cos ξ`, minus sign for levels 1 and 3.
pub fn two_mode_berry_phase(params: &ModelParams, n: usize, nprime: usize, theta: f64, level: LevelId) -> Result<f64> {
    let cos = sector_cos(params, level.sector(), n)?;
    let ct = theta.cos();
    let base = PI * ct * (n as f64 - nprime as f64 + 0.5);
    let shift = 0.5 * PI * ct * cos;
    Ok(if level.is_upper() { base - shift } else { base + shift })
}

/// Geometric phase of subsystem 1 (spin 1 plus field) for a dressed level,
/// in the sign convention `γ₁¹ = π(1 + cos α)`, `γ₂¹ = π(1 - cos α)` and the
/// β analogues.
pub fn mixed_state_phase(params: &ModelParams, n: usize, level: LevelId) -> Result<PhaseResult> {
    let cos = sector_cos(params, level.sector(), n)?;
    let total = if level.is_upper() { PI * (1.0 + cos) } else { PI * (1.0 - cos) };
    Ok(PhaseResult::from_total(total))
}

/// Adiabaticity ratio of one sector, `ω_p sin ξ / (2 ΔE)` with `φ = ω_p t`.
pub fn sector_adiabatic_ratio(params: &ModelParams, n: usize, sector: Sector, omega_prec: f64) -> Result<f64> {
    let split = splitting(params, sector, n);
    if split == 0.0 {
        return Err(Error::DegenerateSector { sector: sector.name(), n });
    }
    let sin = 2.0 * params.lambda_c * ((n + 1) as f64).sqrt() / split;
    Ok(omega_prec.abs() * sin / (2.0 * split))
}

/// Largest `|⟨ψ_p|∂_t ψ_q⟩ / (E_p - E_q)|` over the levels of photon sector
/// `n`. Pairs from different sectors have vanishing matrix elements, so only
/// the two in-sector pairs contribute.
pub fn adiabatic_ratio_bound(params: &ModelParams, n: usize, omega_prec: f64) -> Result<f64> {
    params.validate()?;
    let a = sector_adiabatic_ratio(params, n, Sector::Alpha, omega_prec)?;
    let b = sector_adiabatic_ratio(params, n, Sector::Beta, omega_prec)?;
    Ok(a.max(b))
}

/// Resonant, uncoupled (`ω = ν`, `J = 0`) value `ω_p / (4λ√(n+1))`; an upper
/// bound on the ratio for every `J` and detuning.
pub fn resonant_adiabatic_ratio(lambda_c: f64, n: usize, omega_prec: f64) -> f64 {
    omega_prec.abs() / (4.0 * lambda_c * ((n + 1) as f64).sqrt())
}
