//! Numerical geometric phases, computed without the closed forms: discrete
//! Wilson loops over tracked eigenvectors, Berry-connection integrals with
//! winding recovery, mixed-state phases from reduced density matrices, and
//! finite-difference adiabaticity ratios.

mod adiabatic;
mod family;
mod holonomy;
mod mixed;

pub use adiabatic::{adiabatic_pair_ratios, adiabatic_ratio_numeric, DEFAULT_FD_STEP};
pub use family::{ConjugatedFamily, FnFamily, HamiltonianFamily, LevelSelector, DEGENERACY_TOL};
pub use holonomy::{
    berry_loop_phase, connection_integral, connection_integral_family, discrete_holonomy, midpoint_connection,
    open_path_phase, single_mode_family, track_level, two_mode_family, two_mode_loop_phase, wilson_loop_phase,
    TrackedLoop, GAP_TOL, MATCH_THRESHOLD,
};
pub use mixed::{interferometric_phase, mixed_phase_numeric, MixedPhase, MixedPhaseResult, WEIGHT_FLOOR};

use std::f64::consts::TAU;

use crate::error::{Error, Result};

/// How eigenvectors are continued from one loop point to the next.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Continuation {
    /// `u(φ) = U(φ) u(0)`; per-step phases are summed without wrapping, so the
    /// total keeps its `2π` winding.
    NaturalGauge,
    /// Eigenvectors from independent diagonalizations, matched by overlap.
    /// Only the phase modulo `2π` is meaningful.
    OverlapMatched,
}

/// Discretization of a closed loop `φ ∈ [0, 2π]`; point `steps` is
/// identified with point 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LoopSpec {
    pub steps: usize,
    /// Polar angle of the two-mode rotation, for two-mode loops.
    pub theta: Option<f64>,
    pub continuation: Continuation,
}

impl LoopSpec {
    pub const MIN_STEPS: usize = 16;
    pub const DEFAULT_STEPS: usize = 2000;
    pub const DEFAULT_TWO_MODE_STEPS: usize = 4000;

    pub fn new(steps: usize) -> Result<Self> {
        let spec = Self { steps, theta: None, continuation: Continuation::NaturalGauge };
        spec.validate()?;
        Ok(spec)
    }

    pub fn two_mode(theta: f64) -> Self {
        Self { steps: Self::DEFAULT_TWO_MODE_STEPS, theta: Some(theta), continuation: Continuation::NaturalGauge }
    }

    pub fn with_continuation(mut self, continuation: Continuation) -> Self {
        self.continuation = continuation;
        self
    }

    pub fn with_steps(mut self, steps: usize) -> Self {
        self.steps = steps;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps < Self::MIN_STEPS {
            return Err(Error::InvalidParameter(format!(
                "loop needs at least {} steps, got {}",
                Self::MIN_STEPS,
                self.steps
            )));
        }
        if let Some(t) = self.theta {
            if !t.is_finite() {
                return Err(Error::InvalidParameter(format!("theta must be finite, got {t}")));
            }
        }
        Ok(())
    }

    pub(crate) fn angle(&self, k: usize) -> f64 {
        TAU * k as f64 / self.steps as f64
    }
}

impl Default for LoopSpec {
    fn default() -> Self {
        Self { steps: Self::DEFAULT_STEPS, theta: None, continuation: Continuation::NaturalGauge }
    }
}

/// Outcome of a numerical loop.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HoloResult {
    /// Phase in `[0, 2π)`.
    pub reduced_phase: f64,
    /// Unwrapped phase; equals `reduced_phase` for overlap-matched runs.
    pub total_phase: f64,
    pub winding: i64,
    /// Smallest distance from the tracked eigenvalue to the rest of its block.
    pub min_gap: f64,
    /// `arg⟨u₀|U(2π)u₀⟩`. Zero unless the transport operator is only
    /// periodic up to a phase on the tracked subspace.
    pub monodromy_phase: f64,
    /// `|⟨u₀|U(2π)u₀⟩|`: 1 for a closed loop, smaller for an open path.
    pub endpoint_overlap: f64,
}

/// Tolerance on `total - reduced - 2π·winding`.
pub const WINDING_TOL: f64 = 1e-8;

/// `x` mapped into `[0, 2π)`.
pub fn wrap_phase(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Distance between two angles on the circle, in `[0, π]`.
pub fn circular_distance(a: f64, b: f64) -> f64 {
    let d = wrap_phase(a - b);
    d.min(TAU - d)
}

impl HoloResult {
    pub(crate) fn from_parts(reduced: f64, total: f64, min_gap: f64, monodromy: f64, endpoint: f64) -> Result<Self> {
        let reduced = wrap_phase(reduced);
        let winding = ((total - reduced) / TAU).round();
        let residual = total - reduced - TAU * winding;
        if residual.abs() > WINDING_TOL {
            return Err(Error::InvalidLoop(format!(
                "unwrapped phase {total} and holonomy {reduced} differ by a non-integer number of turns (residual {residual:e})"
            )));
        }
        Ok(Self {
            reduced_phase: reduced,
            total_phase: total,
            winding: winding as i64,
            min_gap,
            monodromy_phase: monodromy,
            endpoint_overlap: endpoint,
        })
    }
}
