use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64 as C64;

use super::family::{ConjugatedFamily, HamiltonianFamily, LevelSelector};
use super::{wrap_phase, Continuation, HoloResult, LoopSpec};
use crate::analytic::LevelId;
use crate::error::{Error, Result};
use crate::linalg::{eigh, ComplexMatrix, Ket};
use crate::model::{
    build_hamiltonian, build_two_mode_hamiltonian, number_operator, schwinger_jz, two_mode_rotation, BasisIndex,
    FieldSpace, ModelParams, Spin,
};

/// Overlap with the previous step below which the tracked level counts as lost.
pub const MATCH_THRESHOLD: f64 = 0.5;
/// Smallest admissible distance between the tracked eigenvalue and the rest
/// of its block.
pub const GAP_TOL: f64 = 1e-8;

const LEAKAGE_TOL: f64 = 1e-10;
const CLOSURE_TOL: f64 = 1e-9;
const EIGENVECTOR_TOL: f64 = 1e-8;

/// Eigenvectors of one level at the loop points `φ_k = 2πk/steps`,
/// `k = 0..steps`, each in whatever gauge the eigensolver returned.
#[derive(Clone, Debug)]
pub struct TrackedLoop {
    pub angles: Vec<f64>,
    pub kets: Vec<Ket>,
    pub energies: Vec<f64>,
    pub min_gap: f64,
}

/// Follows one eigenvector of the selector's subspace block around the loop,
/// matching each step to the previous one by overlap.
pub fn track_level<F: HamiltonianFamily + ?Sized>(
    family: &F,
    selector: &LevelSelector,
    spec: &LoopSpec,
) -> Result<TrackedLoop> {
    track(family, selector, spec, true)
}

fn track<F: HamiltonianFamily + ?Sized>(
    family: &F,
    selector: &LevelSelector,
    spec: &LoopSpec,
    closed: bool,
) -> Result<TrackedLoop> {
    spec.validate()?;
    let dim = family.dim();
    if selector.reference.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: selector.reference.dim() });
    }
    let sub = &selector.subspace;
    if sub.is_empty() || sub.iter().any(|&i| i >= dim) {
        return Err(Error::InvalidLoop(format!("subspace indices must be non-empty and below {dim}")));
    }

    let h_start = family.block(0.0, sub)?;
    let scale = h_start.max_abs().max(1.0);
    let deviation = (&family.block(TAU, sub)? - &h_start).max_abs();
    if closed && deviation > CLOSURE_TOL * scale {
        return Err(Error::NonClosedLoop { deviation });
    }

    let restricted = selector.reference.restrict(sub);
    let weight = restricted.norm();
    if weight < MATCH_THRESHOLD {
        return Err(Error::InvalidLoop(format!(
            "reference state has only weight {weight:.3e} inside the tracked subspace"
        )));
    }
    let mut prev = restricted.scale(C64::new(1.0 / weight, 0.0));

    let mut out = TrackedLoop {
        angles: Vec::with_capacity(spec.steps),
        kets: Vec::with_capacity(spec.steps),
        energies: Vec::with_capacity(spec.steps),
        min_gap: f64::INFINITY,
    };
    for k in 0..spec.steps {
        let phi = spec.angle(k);
        let leak = family.leakage(phi, sub)?;
        if leak > LEAKAGE_TOL * scale {
            return Err(Error::InvalidLoop(format!(
                "subspace is not invariant at phi={phi:.6}: coupling {leak:e} to its complement"
            )));
        }
        let es = eigh(&family.block(phi, sub)?)?;
        let clusters = es.clusters(GAP_TOL);
        let (cluster, weight) = clusters
            .iter()
            .map(|c| (c.clone(), c.clone().map(|i| es.vectors[i].inner(&prev).norm_sqr()).sum::<f64>()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .expect("non-empty block has a cluster");
        let overlap = weight.sqrt();
        let value = es.values[cluster.start];
        let gap = es
            .values
            .iter()
            .enumerate()
            .filter(|(i, _)| !cluster.contains(i))
            .map(|(_, v)| (v - value).abs())
            .fold(f64::INFINITY, f64::min);
        if overlap < MATCH_THRESHOLD {
            return Err(Error::GapCollapse { phi, overlap, gap });
        }
        if cluster.len() > 1 {
            return Err(Error::GapCollapse { phi, overlap, gap: 0.0 });
        }
        if gap < GAP_TOL {
            return Err(Error::GapCollapse { phi, overlap, gap });
        }
        prev = es.vectors[cluster.start].clone();
        out.angles.push(phi);
        out.kets.push(prev.embed(sub, dim));
        out.energies.push(value);
        out.min_gap = out.min_gap.min(gap);
    }
    Ok(out)
}

/// `-arg ∏ₖ ⟨uₖ|uₖ₊₁⟩` over a closed chain of states (the last state links
/// back to the first), in `[0, 2π)`. Independent of the phase of each state.
pub fn discrete_holonomy(kets: &[Ket]) -> Result<f64> {
    if kets.len() < 2 {
        return Err(Error::InvalidLoop(format!("need at least 2 states, got {}", kets.len())));
    }
    let mut acc = C64::new(1.0, 0.0);
    for (k, a) in kets.iter().enumerate() {
        let ov = a.inner(&kets[(k + 1) % kets.len()]);
        let r = ov.norm();
        if r == 0.0 || !r.is_finite() {
            return Err(Error::InvalidLoop(format!("states {k} and {} are orthogonal", (k + 1) % kets.len())));
        }
        acc *= ov / r;
        acc /= acc.norm();
    }
    Ok(wrap_phase(-acc.arg()))
}

struct Natural {
    total: f64,
    /// `⟨u₀|U(2π)u₀⟩`
    endpoint: C64,
}

impl Natural {
    fn closed(&self) -> Result<f64> {
        let deviation = 1.0 - self.endpoint.norm();
        if deviation > EIGENVECTOR_TOL {
            return Err(Error::NonClosedLoop { deviation });
        }
        Ok(self.endpoint.arg())
    }
}

/// Sums per-step phases of `U(φ_k) u₀` without wrapping and records the
/// overlap of the end point with the start.
fn natural_transport<F: HamiltonianFamily + ?Sized>(
    family: &F,
    tracked: &TrackedLoop,
    spec: &LoopSpec,
) -> Result<Natural> {
    let u0 = &tracked.kets[0];
    let transport = |phi: f64| {
        family
            .transport(phi, u0)
            .ok_or_else(|| Error::InvalidLoop("natural gauge needs a family with a transport operator".into()))
    };
    let first = transport(0.0)?;
    let mut prev = first.clone();
    let mut total = 0.0;
    for k in 1..=spec.steps {
        let phi = spec.angle(k);
        let next = transport(phi)?;
        if k < spec.steps {
            let fidelity = next.inner(&tracked.kets[k]).norm();
            if 1.0 - fidelity > EIGENVECTOR_TOL {
                return Err(Error::InvalidLoop(format!(
                    "transported state is not an eigenvector at phi={phi:.6} (overlap {fidelity})"
                )));
            }
        }
        let step = prev.inner(&next).arg();
        if step.abs() > FRAC_PI_2 {
            return Err(Error::StepTooCoarse { phi, phase: step });
        }
        total -= step;
        prev = next;
    }
    Ok(Natural { total, endpoint: first.inner(&prev) })
}

/// Discrete Wilson loop of the selected level.
///
/// The reduced phase is the gauge-invariant holonomy, corrected by the
/// monodromy phase when the transport operator returns to the identity only up
/// to a phase. With natural-gauge continuation the total phase is the
/// unwrapped sum of per-step phases of `U(φ)u₀`.
pub fn wilson_loop_phase<F: HamiltonianFamily + ?Sized>(
    family: &F,
    selector: &LevelSelector,
    spec: &LoopSpec,
) -> Result<HoloResult> {
    let tracked = track_level(family, selector, spec)?;
    let holonomy = discrete_holonomy(&tracked.kets)?;
    match spec.continuation {
        Continuation::OverlapMatched => HoloResult::from_parts(holonomy, holonomy, tracked.min_gap, 0.0, 1.0),
        Continuation::NaturalGauge => {
            let nat = natural_transport(family, &tracked, spec)?;
            let monodromy = nat.closed()?;
            HoloResult::from_parts(holonomy - monodromy, nat.total, tracked.min_gap, monodromy, nat.endpoint.norm())
        }
    }
}

/// Midpoint-rule value of `-∮ Im⟨u|du⟩` for `u(φ) = U(φ)u₀` with `steps`
/// panels. Its error falls as `steps⁻²`.
pub fn midpoint_connection<F: HamiltonianFamily + ?Sized>(family: &F, u0: &Ket, steps: usize) -> Result<f64> {
    if steps < LoopSpec::MIN_STEPS {
        return Err(Error::InvalidParameter(format!("need at least {} panels, got {steps}", LoopSpec::MIN_STEPS)));
    }
    let dphi = TAU / steps as f64;
    let transport = |phi: f64| {
        family
            .transport(phi, u0)
            .ok_or_else(|| Error::InvalidLoop("connection integral needs a family with a transport operator".into()))
    };
    let mut left = transport(0.0)?;
    let mut total = 0.0;
    for k in 0..steps {
        let right = transport((k + 1) as f64 * dphi)?;
        let mid = transport((k as f64 + 0.5) * dphi)?;
        total -= mid.inner(&right.sub(&left)).im;
        left = right;
    }
    Ok(total)
}

/// Berry-connection integral of the selected level in the natural gauge.
///
/// The midpoint sums at `steps` and `2·steps` panels are combined by one
/// Richardson step, which cancels their common `steps⁻²` error.
pub fn connection_integral_family<F: HamiltonianFamily + ?Sized>(
    family: &F,
    selector: &LevelSelector,
    spec: &LoopSpec,
) -> Result<HoloResult> {
    let tracked = track_level(family, selector, spec)?;
    let nat = natural_transport(family, &tracked, spec)?;
    let monodromy = nat.closed()?;
    let u0 = &tracked.kets[0];
    let coarse = midpoint_connection(family, u0, spec.steps)?;
    let fine = midpoint_connection(family, u0, 2 * spec.steps)?;
    let total = (4.0 * fine - coarse) / 3.0;
    HoloResult::from_parts(total, total, tracked.min_gap, monodromy, nat.endpoint.norm())
}

/// Phase accumulated by `U(φ)u₀` along `φ ∈ [0, 2π]` when `H(2π)` need not
/// equal `H(0)`: the unwrapped sum of per-step phases, i.e. the discretized
/// `i∫⟨u|∂_φ u⟩dφ` in the natural gauge. Each transported state is checked
/// against the tracked eigenvector; the end point is not required to return
/// to the start.
pub fn open_path_phase<F: HamiltonianFamily + ?Sized>(
    family: &F,
    selector: &LevelSelector,
    spec: &LoopSpec,
) -> Result<HoloResult> {
    if spec.continuation != Continuation::NaturalGauge {
        return Err(Error::InvalidParameter("an open path needs natural-gauge continuation".into()));
    }
    let tracked = track(family, selector, spec, false)?;
    let nat = natural_transport(family, &tracked, spec)?;
    HoloResult::from_parts(nat.total, nat.total, tracked.min_gap, 0.0, nat.endpoint.norm())
}

/// `H(φ) = U(φ) H U†(φ)` with `U(φ) = exp(-iφ a†a)` on the single-mode space.
pub fn single_mode_family(params: &ModelParams, cutoff: usize) -> Result<ConjugatedFamily> {
    ConjugatedFamily::new(build_hamiltonian(params, cutoff)?, &number_operator(cutoff, FieldSpace::SingleMode))
}

/// `H(φ) = U(θ,φ) H₀ U†(θ,φ)` on the two-mode space, written as the fixed
/// matrix `U(θ,0) H₀ U†(θ,0)` conjugated by `exp(-iφ J_z)`.
pub fn two_mode_family(params: &ModelParams, theta: f64, cutoff: usize) -> Result<ConjugatedFamily> {
    let r = two_mode_rotation(theta, 0.0, cutoff)?;
    let h0 = build_two_mode_hamiltonian(params, cutoff)?;
    let rh = r.matmul(&h0)?;
    let base = r.matmul(&rh.adjoint())?.adjoint().hermitian_part();
    let jz = ComplexMatrix::identity(4).kron(&schwinger_jz(cutoff));
    ConjugatedFamily::new(base, &jz)
}

/// Wilson loop of a dressed level of the single-mode model as the field phase
/// runs once around.
pub fn berry_loop_phase(
    params: &ModelParams,
    n: usize,
    level: LevelId,
    spec: &LoopSpec,
    cutoff: usize,
) -> Result<HoloResult> {
    params.validate()?;
    let family = single_mode_family(params, cutoff)?;
    let selector = LevelSelector::sector_level(params, n, level, cutoff)?;
    wilson_loop_phase(&family, &selector, spec)
}

/// Connection integral of a dressed level of the single-mode model.
/// `spec.continuation` is ignored: the integral is always taken in the
/// natural gauge.
pub fn connection_integral(
    params: &ModelParams,
    n: usize,
    level: LevelId,
    spec: &LoopSpec,
    cutoff: usize,
) -> Result<HoloResult> {
    params.validate()?;
    let family = single_mode_family(params, cutoff)?;
    let selector = LevelSelector::sector_level(params, n, level, cutoff)?;
    connection_integral_family(&family, &selector, spec)
}

/// Phase of `U(θ,φ)|ψ⟩⊗|n'⟩` for a dressed level `|ψ⟩` of photon sector
/// `n` as φ runs from 0 to 2π at fixed θ.
///
/// `U(θ,2π)` is the photon-parity operator, which flips the sign of the
/// spin-field coupling, so the two-mode family only closes after 4π. The
/// result is therefore the open-path natural-gauge phase
/// ([`open_path_phase`]); `endpoint_overlap` reports how far the state is
/// from returning to itself.
///
/// The level is followed inside the invariant subspace with fixed spin 2 and
/// `a†a + b†b + |e₁⟩⟨e₁| = n + n' + 1`, which the truncated rotation
/// represents exactly once `cutoff > n + n' + 1`.
pub fn two_mode_loop_phase(
    params: &ModelParams,
    n: usize,
    nprime: usize,
    theta: f64,
    level: LevelId,
    spec: &LoopSpec,
    cutoff: usize,
) -> Result<HoloResult> {
    params.validate()?;
    if !theta.is_finite() {
        return Err(Error::InvalidParameter(format!("theta must be finite, got {theta}")));
    }
    if let Some(t) = spec.theta {
        if t != theta {
            return Err(Error::InvalidParameter(format!("loop theta {t} differs from requested theta {theta}")));
        }
    }
    let excitations = n + nprime + 1;
    if cutoff <= excitations {
        return Err(Error::CutoffTooSmall { cutoff, required: excitations + 1 });
    }

    let single = LevelSelector::sector_level(params, n, level, cutoff)?;
    let amps = single.reference.restrict(&single.subspace);
    let spin2 = level.sector().spin2();
    let dim = 4 * cutoff * cutoff;
    let pos = |b: BasisIndex| b.position(cutoff).expect("photon counts below cutoff");
    let mut product = Ket::zeros(dim);
    product[pos(BasisIndex::two_mode(Spin::E, spin2, n, nprime))] = amps[0];
    product[pos(BasisIndex::two_mode(Spin::G, spin2, n + 1, nprime))] = amps[1];
    let reference = two_mode_rotation(theta, 0.0, cutoff)?.apply(&product)?;

    let subspace: Vec<usize> = (0..dim)
        .filter(|&p| {
            let b = BasisIndex::from_two_mode_position(p, cutoff);
            let exc = b.n + b.nprime.unwrap_or(0) + usize::from(b.spin1 == Spin::E);
            b.spin2 == spin2 && exc == excitations
        })
        .collect();

    let family = two_mode_family(params, theta, cutoff)?;
    open_path_phase(&family, &LevelSelector::new(subspace, reference), spec)
}
