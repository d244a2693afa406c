//! Numerical holonomies checked against the closed forms and against
//! independent discretizations.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_3, PI, TAU};

use num_complex::Complex64 as C64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qberry_core::analytic::{
    adiabatic_ratio_bound, berry_phase, mixed_state_phase, resonant_adiabatic_ratio, sector_cos, two_mode_berry_phase,
    LevelId,
};
use qberry_core::geomphase::{
    adiabatic_pair_ratios, adiabatic_ratio_numeric, berry_loop_phase, circular_distance, connection_integral,
    connection_integral_family, discrete_holonomy, midpoint_connection, mixed_phase_numeric, single_mode_family,
    track_level, two_mode_family, two_mode_loop_phase, wilson_loop_phase, ConjugatedFamily, FnFamily,
    HamiltonianFamily, LevelSelector, DEFAULT_FD_STEP,
};
use qberry_core::linalg::reduced_density;
use qberry_core::{ComplexMatrix, Continuation, Ket, LoopSpec, ModelParams, Sector};

const CUTOFF: usize = 8;

fn params(detuning: f64, j: f64) -> ModelParams {
    ModelParams::new(1.0 + detuning, 1.0, 1.0, j).unwrap()
}

/// J/λ ∈ {0, 0.25, 1, 4}, n ∈ {0, 1, 2}, ω - ν ∈ {0, ±0.5}.
fn grid() -> Vec<(ModelParams, usize)> {
    let mut out = Vec::new();
    for &j in &[0.0, 0.25, 1.0, 4.0] {
        for &d in &[0.0, 0.5, -0.5] {
            for n in 0..3 {
                out.push((params(d, j), n));
            }
        }
    }
    out
}

#[test]
fn resonant_ground_sector_gives_pi() {
    let r = berry_loop_phase(&params(0.0, 0.0), 0, LevelId::L1, &LoopSpec::default(), CUTOFF).unwrap();
    assert!((r.reduced_phase - PI).abs() < 1e-6, "{r:?}");
    assert!(r.min_gap > 0.0);
}

#[test]
fn natural_gauge_recovers_winding() {
    let r = berry_loop_phase(&params(0.0, 0.0), 2, LevelId::L1, &LoopSpec::default(), CUTOFF).unwrap();
    assert!((r.total_phase - 5.0 * PI).abs() < 1e-5, "{r:?}");
    assert_eq!(r.winding, 2);
    let analytic = berry_phase(&params(0.0, 0.0), 2, LevelId::L1).unwrap();
    assert!((r.total_phase - analytic.total).abs() < 1e-5);
    assert_eq!(r.winding, analytic.winding);
}

#[test]
fn wilson_loop_matches_closed_form_on_grid() {
    let spec = LoopSpec::default();
    for (p, n) in grid() {
        for level in LevelId::ALL {
            let num = berry_loop_phase(&p, n, level, &spec, CUTOFF).unwrap();
            let exact = berry_phase(&p, n, level).unwrap();
            assert!(
                circular_distance(num.reduced_phase, exact.reduced) < 1e-6,
                "{p:?} n={n} {level:?}: {num:?} vs {exact:?}"
            );
            assert!((num.total_phase - exact.total).abs() < 1e-6, "{p:?} n={n} {level:?}");
            assert_eq!(num.winding, exact.winding);
            assert!((num.total_phase - num.reduced_phase - TAU * num.winding as f64).abs() < 1e-9);
        }
    }
}

#[test]
fn connection_integral_matches_closed_form_and_wilson() {
    let spec = LoopSpec::default();
    for (p, n) in grid() {
        for level in LevelId::ALL {
            let conn = connection_integral(&p, n, level, &spec, CUTOFF).unwrap();
            let exact = berry_phase(&p, n, level).unwrap();
            let wilson = berry_loop_phase(&p, n, level, &spec, CUTOFF).unwrap();
            assert!((conn.total_phase - exact.total).abs() < 1e-6, "{p:?} n={n} {level:?}: {conn:?}");
            assert!((conn.total_phase - wilson.total_phase).abs() < 1e-6);
            assert!((conn.total_phase - conn.reduced_phase - TAU * conn.winding as f64).abs() < 1e-9);
        }
    }
}

#[test]
fn midpoint_rule_converges_at_second_order() {
    let p = params(0.5, 0.25);
    let family = single_mode_family(&p, CUTOFF).unwrap();
    for (n, level) in [(0, LevelId::L1), (1, LevelId::L2), (2, LevelId::L3)] {
        let sel = LevelSelector::sector_level(&p, n, level, CUTOFF).unwrap();
        let exact = berry_phase(&p, n, level).unwrap().total;
        let err = |steps| (midpoint_connection(&family, &sel.reference, steps).unwrap() - exact).abs();
        let (e250, e500, e1000) = (err(250), err(500), err(1000));
        for ratio in [e250 / e500, e500 / e1000] {
            assert!((ratio - 4.0).abs() < 0.05, "n={n} {level:?}: ratio {ratio}");
        }
    }
}

#[test]
fn stationary_state_has_no_connection() {
    // A diagonal family leaves its eigenvectors fixed.
    let base = ComplexMatrix::real_diagonal(&[2.0, -1.0, 0.5]);
    let gen = ComplexMatrix::real_diagonal(&[0.0, 1.0, 3.0]);
    let family = ConjugatedFamily::new(base, &gen).unwrap();
    let sel = LevelSelector::new(vec![0, 1, 2], Ket::basis(3, 0));
    let r = connection_integral_family(&family, &sel, &LoopSpec::default()).unwrap();
    assert_eq!(r.total_phase, 0.0);
    assert_eq!(r.winding, 0);
    let w = wilson_loop_phase(&family, &sel, &LoopSpec::default()).unwrap();
    assert!(circular_distance(w.reduced_phase, 0.0) < 1e-12);
}

#[test]
fn uncoupled_level_is_stationary() {
    // λ = 0: |e, e, n⟩ is an eigenstate picking up only the trivial 2πn.
    let p = ModelParams::new(1.3, 1.0, 0.0, 0.2).unwrap();
    let r = berry_loop_phase(&p, 1, LevelId::L1, &LoopSpec::default(), CUTOFF).unwrap();
    assert!(circular_distance(r.reduced_phase, 0.0) < 1e-12, "{r:?}");
    assert!((r.total_phase - TAU).abs() < 1e-9);
}

#[test]
fn degenerate_sector_is_reported() {
    let p = ModelParams::new(1.0, 1.0, 0.0, 0.0).unwrap();
    let r = berry_loop_phase(&p, 0, LevelId::L1, &LoopSpec::default(), CUTOFF);
    assert!(matches!(r, Err(qberry_core::Error::DegenerateSector { .. })), "{r:?}");
}

#[test]
fn two_mode_equator_has_no_phase() {
    let p = params(0.0, 0.3);
    for level in LevelId::ALL {
        let r = two_mode_loop_phase(&p, 1, 0, FRAC_PI_2, level, &LoopSpec::two_mode(FRAC_PI_2), CUTOFF).unwrap();
        assert!(circular_distance(r.reduced_phase, 0.0) < 1e-6, "{level:?}: {r:?}");
    }
}

#[test]
fn two_mode_pole_gives_half_pi() {
    let p = params(0.0, 0.0);
    let r = two_mode_loop_phase(&p, 0, 0, 0.0, LevelId::L1, &LoopSpec::two_mode(0.0), CUTOFF).unwrap();
    assert!(circular_distance(r.reduced_phase, FRAC_PI_2) < 1e-5, "{r:?}");
    assert!((r.total_phase - FRAC_PI_2).abs() < 1e-5);
}

#[test]
fn two_mode_family_closes_only_after_four_pi() {
    // U(θ, 2π) is the photon parity, which flips the sign of the spin-field
    // coupling: the path is open and the phase is the natural-gauge integral.
    let p = params(0.0, 0.0);
    let family = two_mode_family(&p, 0.0, CUTOFF).unwrap();
    let h0 = family.at(0.0).unwrap();
    assert!((&family.at(TAU).unwrap() - &h0).max_abs() > 1.0);
    assert!((&family.at(2.0 * TAU).unwrap() - &h0).max_abs() < 1e-12);
    let r = two_mode_loop_phase(&p, 0, 0, 0.0, LevelId::L1, &LoopSpec::two_mode(0.0), CUTOFF).unwrap();
    // at resonance the transported state ends orthogonal to where it started
    assert!(r.endpoint_overlap < 1e-9, "{r:?}");
    let overlap = LoopSpec::two_mode(0.0).with_continuation(Continuation::OverlapMatched);
    assert!(two_mode_loop_phase(&p, 0, 0, 0.0, LevelId::L1, &overlap, CUTOFF).is_err());
}

#[test]
fn two_mode_matches_closed_form() {
    let cases = [
        (params(0.0, 0.5), 1, 0, FRAC_PI_3),
        (params(0.5, 0.25), 0, 1, 1.0),
        (params(-0.5, 1.0), 2, 1, 2.4),
        (params(0.0, 4.0), 1, 2, 0.3),
    ];
    for (p, n, np, theta) in cases {
        for level in LevelId::ALL {
            let spec = LoopSpec::two_mode(theta);
            let num = two_mode_loop_phase(&p, n, np, theta, level, &spec, CUTOFF).unwrap();
            let exact = two_mode_berry_phase(&p, n, np, theta, level).unwrap();
            assert!(circular_distance(num.reduced_phase, exact) < 1e-5, "{p:?} {n} {np} {level:?}: {num:?} vs {exact}");
            assert!((num.total_phase - exact).abs() < 1e-5);
        }
    }
}

#[test]
fn two_mode_phase_is_linear_in_cos_theta() {
    let p = params(0.5, 0.7);
    let values: Vec<(f64, f64)> = [0.2, 0.9, 1.7, 2.8]
        .iter()
        .map(|&t| {
            let r = two_mode_loop_phase(&p, 1, 1, t, LevelId::L3, &LoopSpec::two_mode(t), CUTOFF).unwrap();
            (f64::cos(t), r.total_phase)
        })
        .collect();
    let slope = (values[1].1 - values[0].1) / (values[1].0 - values[0].0);
    for &(c, g) in &values {
        assert!((g - slope * c).abs() < 1e-5, "intercept should vanish: {values:?}");
    }
    let cos_beta = sector_cos(&p, Sector::Beta, 1).unwrap();
    assert!((slope - PI * (0.5 - 0.5 * cos_beta)).abs() < 1e-5);
}

#[test]
fn mixed_phase_at_resonance_is_pi() {
    let r = mixed_phase_numeric(&params(0.0, 0.0), 0, LevelId::L1, &LoopSpec::default(), CUTOFF).unwrap();
    assert!(circular_distance(r.holonomy.reduced_phase, PI) < 1e-5, "{r:?}");
    assert!(circular_distance(r.interferometric_phase, PI) < 1e-5);
    assert_eq!(r.weights.len(), 1);
}

#[test]
fn mixed_phase_of_product_level_vanishes() {
    let p = ModelParams::new(1.4, 1.0, 0.0, 0.3).unwrap();
    let r = mixed_phase_numeric(&p, 1, LevelId::L1, &LoopSpec::default(), CUTOFF).unwrap();
    assert!(circular_distance(r.holonomy.reduced_phase, 0.0) < 1e-9, "{r:?}");
}

#[test]
fn mixed_phase_sign_conventions() {
    // ω = ν = λ = J = 1, n = 0: cos α = 1/√2.
    let p = params(0.0, 1.0);
    let r = mixed_phase_numeric(&p, 0, LevelId::L1, &LoopSpec::default(), CUTOFF).unwrap();
    let gauge = PI * (1.0 - FRAC_1_SQRT_2);
    assert!((r.holonomy.reduced_phase - gauge).abs() < 1e-5, "{r:?}");
    let quoted = mixed_state_phase(&p, 0, LevelId::L1).unwrap().reduced;
    assert!((quoted - PI * (1.0 + FRAC_1_SQRT_2)).abs() < 1e-12);
    assert!(circular_distance(r.interferometric_phase, quoted) < 1e-5);
    assert!(circular_distance(-r.holonomy.reduced_phase, quoted) < 1e-5);
}

#[test]
fn mixed_phase_matches_closed_form_on_grid() {
    let spec = LoopSpec::default();
    for (p, n) in grid() {
        for level in LevelId::ALL {
            let num = mixed_phase_numeric(&p, n, level, &spec, CUTOFF).unwrap();
            let exact = mixed_state_phase(&p, n, level).unwrap().reduced;
            assert!(circular_distance(num.interferometric_phase, exact) < 1e-5, "{p:?} {n} {level:?}");
            assert!((num.visibility - 1.0).abs() < 1e-2);
        }
    }
}

#[test]
fn reduced_states_stay_normalized_along_loop() {
    let p = params(0.5, 0.25);
    let family = single_mode_family(&p, CUTOFF).unwrap();
    let sel = LevelSelector::sector_level(&p, 1, LevelId::L4, CUTOFF).unwrap();
    let tracked = track_level(&family, &sel, &LoopSpec::new(200).unwrap()).unwrap();
    for psi in &tracked.kets {
        let rho = reduced_density(psi, &[2, 2, CUTOFF], &[0, 2]).unwrap();
        assert!((rho.trace() - 1.0).norm() < 1e-12);
        assert!(rho.hermiticity_deviation() < 1e-14);
    }
}

#[test]
fn adiabatic_ratio_resonant_value() {
    let r = adiabatic_ratio_numeric(&params(0.0, 0.0), 0, 0.01, DEFAULT_FD_STEP, CUTOFF).unwrap();
    assert!((r - 0.0025).abs() < 1e-6, "{r}");
}

#[test]
fn adiabatic_ratio_scales_inversely_with_coupling() {
    let at = |lambda: f64| {
        let p = ModelParams::new(1.0, 1.0, lambda, 0.0).unwrap();
        adiabatic_ratio_numeric(&p, 1, 0.01, DEFAULT_FD_STEP, CUTOFF).unwrap()
    };
    let (a, b) = (at(1.0), at(10.0));
    assert!((a / b - 10.0).abs() < 1e-4, "{a} {b}");
    assert!((b - resonant_adiabatic_ratio(10.0, 1, 0.01)).abs() < 1e-8);
}

#[test]
fn adiabatic_ratio_matches_closed_form_on_grid() {
    for (p, n) in grid() {
        let num = adiabatic_ratio_numeric(&p, n, 0.01, DEFAULT_FD_STEP, CUTOFF).unwrap();
        let exact = adiabatic_ratio_bound(&p, n, 0.01).unwrap();
        assert!((num - exact).abs() < 1e-6, "{p:?} {n}: {num} vs {exact}");
        assert!(num <= resonant_adiabatic_ratio(1.0, n, 0.01) + 1e-9);
        let pairs = adiabatic_pair_ratios(&p, n, 0.01, DEFAULT_FD_STEP, CUTOFF).unwrap();
        for (a, b) in (0..2).flat_map(|a| (2..4).map(move |b| (a, b))) {
            assert!(pairs[a][b] < 1e-12 && pairs[b][a] < 1e-12);
        }
    }
}

#[test]
fn wilson_loop_on_generic_family() {
    // Spin-1 in a tilted field rotating about z: eigenvalue m = 1 encloses
    // -m·Ω, the solid angle Ω = 2π(1 - cos θ).
    let theta: f64 = 0.8;
    let s = FRAC_1_SQRT_2;
    let jx = ComplexMatrix::from_real(3, 3, &[0.0, s, 0.0, s, 0.0, s, 0.0, s, 0.0]).unwrap();
    let jz = ComplexMatrix::real_diagonal(&[1.0, 0.0, -1.0]);
    let h = &jz.scale(C64::new(theta.cos(), 0.0)) + &jx.scale(C64::new(theta.sin(), 0.0));
    let family = FnFamily::new(3, move |phi: f64| {
        let u = ComplexMatrix::diagonal(&[C64::from_polar(1.0, -phi), C64::new(1.0, 0.0), C64::from_polar(1.0, phi)]);
        &(&u * &h) * &u.adjoint()
    });
    let es = qberry_core::linalg::eigh(&family.at(0.0).unwrap()).unwrap();
    let sel = LevelSelector::new(vec![0, 1, 2], es.vectors[2].clone());
    let r =
        wilson_loop_phase(&family, &sel, &LoopSpec::default().with_continuation(Continuation::OverlapMatched)).unwrap();
    let solid = TAU * (1.0 - theta.cos());
    assert!(circular_distance(r.reduced_phase, -solid) < 1e-5, "{r:?}");
}

#[test]
fn gauge_invariance_under_random_rephasing() {
    let p = params(-0.5, 1.0);
    let family = single_mode_family(&p, CUTOFF).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (n, level) in [(0, LevelId::L1), (1, LevelId::L2), (2, LevelId::L4)] {
        let sel = LevelSelector::sector_level(&p, n, level, CUTOFF).unwrap();
        let tracked = track_level(&family, &sel, &LoopSpec::default()).unwrap();
        let base = discrete_holonomy(&tracked.kets).unwrap();
        let rephased: Vec<Ket> =
            tracked.kets.iter().map(|k| k.scale(C64::from_polar(1.0, rng.gen_range(0.0..TAU)))).collect();
        let again = discrete_holonomy(&rephased).unwrap();
        assert!(circular_distance(base, again) < 1e-9, "{base} {again}");
    }
}

fn level_strategy() -> impl Strategy<Value = LevelId> {
    prop_oneof![Just(LevelId::L1), Just(LevelId::L2), Just(LevelId::L3), Just(LevelId::L4)]
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, .. ProptestConfig::default() })]

    #[test]
    fn rephasing_never_changes_holonomy(
        omega in 0.2f64..2.0, j in -2.0f64..2.0, n in 0usize..3, level in level_strategy(), seed in any::<u64>()
    ) {
        let p = ModelParams::new(omega, 1.0, 1.0, j).unwrap();
        let family = single_mode_family(&p, CUTOFF).unwrap();
        let sel = LevelSelector::sector_level(&p, n, level, CUTOFF).unwrap();
        let tracked = track_level(&family, &sel, &LoopSpec::new(300).unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rephased: Vec<Ket> =
            tracked.kets.iter().map(|k| k.scale(C64::from_polar(1.0, rng.gen_range(0.0..TAU)))).collect();
        let a = discrete_holonomy(&tracked.kets).unwrap();
        let b = discrete_holonomy(&rephased).unwrap();
        prop_assert!(circular_distance(a, b) < 1e-9);
    }

    #[test]
    fn reversal_negates_total(
        omega in 0.2f64..2.0, j in -2.0f64..2.0, n in 0usize..3, level in level_strategy()
    ) {
        let p = ModelParams::new(omega, 1.0, 1.0, j).unwrap();
        let spec = LoopSpec::new(400).unwrap();
        let forward = single_mode_family(&p, CUTOFF).unwrap();
        let backward = forward.reversed().unwrap();
        let sel = LevelSelector::sector_level(&p, n, level, CUTOFF).unwrap();
        let a = wilson_loop_phase(&forward, &sel, &spec).unwrap();
        let b = wilson_loop_phase(&backward, &sel, &spec).unwrap();
        prop_assert!((a.total_phase + b.total_phase).abs() < 1e-9, "{:?} {:?}", a, b);
    }

    #[test]
    fn winding_is_consistent(
        omega in 0.2f64..2.0, j in -2.0f64..2.0, n in 0usize..4, level in level_strategy(), steps in 64usize..600
    ) {
        let p = ModelParams::new(omega, 1.0, 1.0, j).unwrap();
        let r = berry_loop_phase(&p, n, level, &LoopSpec::new(steps).unwrap(), CUTOFF).unwrap();
        prop_assert!((0.0..TAU).contains(&r.reduced_phase));
        prop_assert!((r.total_phase - r.reduced_phase - TAU * r.winding as f64).abs() < 1e-9);
        let c = connection_integral(&p, n, level, &LoopSpec::new(steps).unwrap(), CUTOFF).unwrap();
        prop_assert!((c.total_phase - c.reduced_phase - TAU * c.winding as f64).abs() < 1e-9);
    }

    #[test]
    fn reduced_state_pipeline_preserves_trace(
        omega in 0.2f64..2.0, j in -2.0f64..2.0, n in 0usize..3, level in level_strategy()
    ) {
        let p = ModelParams::new(omega, 1.0, 1.0, j).unwrap();
        let family = single_mode_family(&p, CUTOFF).unwrap();
        let sel = LevelSelector::sector_level(&p, n, level, CUTOFF).unwrap();
        let tracked = track_level(&family, &sel, &LoopSpec::new(32).unwrap()).unwrap();
        for psi in &tracked.kets {
            let rho = reduced_density(psi, &[2, 2, CUTOFF], &[0, 2]).unwrap();
            prop_assert!((rho.trace() - 1.0).norm() < 1e-12);
            prop_assert!(rho.hermiticity_deviation() < 1e-14);
        }
    }
}
