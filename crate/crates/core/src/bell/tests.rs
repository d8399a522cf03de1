// Copyright 2026 The qconfound Developers
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not use this file except
// in compliance with the License. You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the License
// is distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express
// or implied. See the License for the specific language governing permissions and limitations under
// the License.

use super::*;
use approx::assert_relative_eq;
use core::f64::consts::{FRAC_PI_4, FRAC_PI_8, PI, SQRT_2};

const ACCEPTANCE_SEED: u64 = 42;

#[test]
fn exact_correlator_on_bell_state_is_cosine_of_angle_difference() {
    // Born-rule oracle for |Φ⁺⟩: E(α, β) = cos 2(α − β).
    let bell = bell_pair_circuit();
    for (alpha, beta) in [(0.0, FRAC_PI_8), (0.3, -0.2), (FRAC_PI_4, FRAC_PI_8)] {
        let e = exact_correlator(&bell, alpha, beta).unwrap();
        assert_relative_eq!(e, (2.0 * (alpha - beta)).cos(), epsilon = 1e-10);
    }
}

#[test]
fn sampled_correlator_at_equal_settings_is_exactly_one() {
    // Identical settings on |Φ⁺⟩ correlate perfectly: no sampling noise.
    let bell = bell_pair_circuit();
    for alpha in [0.0, 0.4, FRAC_PI_8] {
        let e = measure_correlator(&bell, alpha, alpha, 2_000, 9).unwrap();
        assert_eq!(e, 1.0);
    }
}

#[test]
fn sampled_correlator_matches_exact_within_binomial_noise() {
    let bell = bell_pair_circuit();
    let shots = 10_000u64;
    let e = measure_correlator(&bell, 0.0, FRAC_PI_8, shots, ACCEPTANCE_SEED).unwrap();
    let exact = (2.0f64 * FRAC_PI_8).cos();
    let sigma = ((1.0 - exact * exact) / shots as f64).sqrt();
    assert!((e - exact).abs() < 5.0 * sigma, "e = {e}, exact = {exact}");
}

#[test]
fn partially_entangled_correlator_law() {
    // E(α, β) = cos2α cos2β + sin2θ sin2α sin2β, from the Born-rule oracle.
    for k in 0..5 {
        let theta = PI / 2.0 * k as f64 / 4.0;
        let prep = partially_entangled_circuit(theta);
        for (alpha, beta) in [(FRAC_PI_4, FRAC_PI_8), (0.1, 0.7), (0.0, -FRAC_PI_8)] {
            let e = exact_correlator(&prep, alpha, beta).unwrap();
            let expected = (2.0 * alpha).cos() * (2.0 * beta).cos()
                + (2.0 * theta).sin() * (2.0 * alpha).sin() * (2.0 * beta).sin();
            assert_relative_eq!(e, expected, epsilon = 1e-9);
        }
    }
}

#[test]
fn exact_chsh_on_bell_state_reaches_tsirelson() {
    let s = exact_chsh_s(&bell_pair_circuit(), &ChshSettings::default()).unwrap();
    assert_relative_eq!(s, 2.0 * SQRT_2, epsilon = 1e-10);
}

#[test]
fn exact_chsh_on_product_state_is_sqrt_two() {
    let product = Circuit::new(2, 0);
    let s = exact_chsh_s(&product, &ChshSettings::default()).unwrap();
    assert_relative_eq!(s, SQRT_2, epsilon = 1e-10);
}

#[test]
fn sampled_chsh_on_bell_state_near_tsirelson() {
    let s = chsh_s(
        &bell_pair_circuit(),
        &ChshSettings::default(),
        10_000,
        ACCEPTANCE_SEED,
    )
    .unwrap();
    assert!((s - 2.0 * SQRT_2).abs() < 0.03, "S = {s}");
}

#[test]
fn confounding_strength_reference_points() {
    assert_relative_eq!(confounding_strength(2.0 * SQRT_2), SQRT_2, epsilon = 1e-12);
    assert_relative_eq!(confounding_strength(2.0), 1.0, epsilon = 1e-12);
    assert_eq!(confounding_strength(0.0), 0.0);
    assert_relative_eq!(confounding_strength(-2.0), 1.0, epsilon = 1e-12);
}

#[test]
fn deterministic_strategies_respect_classical_bound() {
    let mut max = f64::NEG_INFINITY;
    for responses in all_deterministic_responses() {
        let s = LhvStrategy::new(responses, 0.0).deterministic_s();
        assert!(s.abs() <= 2.0 + 1e-12);
        max = max.max(s.abs());
    }
    assert_eq!(max, 2.0);
}

#[test]
fn optimal_strategy_is_lexicographic_first_maximum() {
    let best = optimal_lhv_strategy();
    assert_eq!(best.deterministic_s(), 2.0);
    assert_eq!(best.responses, [-1, -1, -1, -1]);
}

#[test]
fn flip_noise_shrinks_correlators() {
    // Each correlator shrinks by (1 − 2p)² under independent outcome flips.
    let p = 0.1;
    let shots = 20_000u64;
    let strategy = LhvStrategy::new([1, 1, 1, 1], p);
    let s = strategy.sampled_s(shots, 11);
    let e_expected = (1.0 - 2.0 * p) * (1.0 - 2.0 * p);
    let expected = 2.0 * e_expected;
    let sigma_e = ((1.0 - e_expected * e_expected) / shots as f64).sqrt();
    let sigma_s = 2.0 * sigma_e;
    assert!((s - expected).abs() < 5.0 * sigma_s, "S = {s}, expected {expected}");
}

#[test]
fn noiseless_lhv_sampling_is_exact() {
    let strategy = optimal_lhv_strategy();
    assert_eq!(strategy.sampled_s(10_000, 3), 2.0);
}

#[test]
fn cs_estimate_invariant_holds_for_mixed_sign_trials() {
    let est = CsEstimate::from_trial_s(&[1.0, -2.0, 0.5]).unwrap();
    assert_relative_eq!(est.cs, est.s_value.abs() / 2.0, epsilon = 1e-15);
    assert_relative_eq!(est.cs, (0.5 + 1.0 + 0.25) / 3.0, epsilon = 1e-15);
    assert!(est.s_value < 0.0);
    assert_eq!(est.n_trials, 3);
}

#[test]
fn hierarchy_small_run_is_ordered() {
    let result = run_hierarchy(2_000, 10, 0.0, ACCEPTANCE_SEED).unwrap();
    assert!(
        (1.35..=1.45).contains(&result.quantum.cs),
        "quantum cs = {}",
        result.quantum.cs
    );
    assert_eq!(result.classical.cs, 1.0);
    assert!(result.classical.trial_values.iter().all(|&v| v == 1.0));
    assert!(result.no_confounding.cs < result.classical.cs);
    assert!(result.classical.cs < result.quantum.cs);
}

#[test]
fn hierarchy_trials_are_schedule_independent() {
    let settings = ChshSettings::default();
    let direct: Vec<f64> = (0..4)
        .map(|t| hierarchy_trial(Scenario::Quantum, &settings, 500, 0.0, 5, t).unwrap())
        .collect();
    let reversed: Vec<f64> = (0..4)
        .rev()
        .map(|t| hierarchy_trial(Scenario::Quantum, &settings, 500, 0.0, 5, t).unwrap())
        .collect();
    let mut reversed = reversed;
    reversed.reverse();
    assert_eq!(direct, reversed);
}

#[test]
fn sweep_theory_matches_exact_oracle() {
    for k in 0..25 {
        let theta = sweep_theta(k, 25);
        let cs = exact_sweep_cs(theta).unwrap();
        assert!(
            (cs - cs_theory(theta)).abs() < 1e-9,
            "θ = {theta}: {cs} vs {}",
            cs_theory(theta)
        );
    }
}

#[test]
fn sweep_baseline_and_peak() {
    assert_relative_eq!(exact_sweep_cs(0.0).unwrap(), 1.0 / SQRT_2, epsilon = 1e-10);
    assert_relative_eq!(exact_sweep_cs(FRAC_PI_4).unwrap(), SQRT_2, epsilon = 1e-10);
}

#[test]
fn exact_sweep_is_affine_in_concurrence() {
    // CS = C/√2 + 1/√2 exactly on the sweep family.
    let points: Vec<SweepPoint> = (0..25)
        .map(|k| {
            let theta = sweep_theta(k, 25);
            SweepPoint {
                theta,
                concurrence: (2.0 * theta).sin().abs(),
                cs_measured: exact_sweep_cs(theta).unwrap(),
                cs_theory: cs_theory(theta),
            }
        })
        .collect();
    let fit = fit_sweep(&points).unwrap();
    assert!((fit.slope - 1.0 / SQRT_2).abs() < 1e-9);
    assert!((fit.intercept - 1.0 / SQRT_2).abs() < 1e-9);
}

#[test]
fn sampled_sweep_tracks_theory() {
    let (points, fit) = run_sweep(9, 2_000, ACCEPTANCE_SEED).unwrap();
    assert_eq!(points.len(), 9);
    assert!(fit.r_squared_vs_theory > 0.98, "R² = {}", fit.r_squared_vs_theory);
    assert!(
        fit.pearson_r_vs_concurrence > 0.99,
        "r = {}",
        fit.pearson_r_vs_concurrence
    );
}

#[test]
fn mermin_oracle_and_sampled_agree() {
    let m = exact_mermin_m().unwrap();
    assert_relative_eq!(m, 4.0, epsilon = 1e-9);
    // All four GHZ correlators are stabilizer-deterministic, so even the
    // sampled value is exact.
    let cs = mermin_cs(10_000, ACCEPTANCE_SEED).unwrap();
    assert_eq!(cs, 2.0);
}

#[test]
fn mermin_lhv_bound_is_two() {
    assert_eq!(lhv_mermin_max(), 2.0);
}

#[test]
fn ch_deterministic_maximum_is_zero() {
    assert_eq!(lhv_ch_max(), 0.0);
    for responses in all_deterministic_responses() {
        assert!(lhv_ch(responses) <= 0.0);
    }
}

#[test]
fn ch_quantum_value_on_bell_state() {
    // CH = (S − 2)/4 for |Φ⁺⟩ with unbiased marginals: (2√2 − 2)/4.
    let ch = exact_ch(&bell_pair_circuit(), &ChshSettings::default()).unwrap();
    assert_relative_eq!(ch, (2.0 * SQRT_2 - 2.0) / 4.0, epsilon = 1e-9);

    let sampled = ch_value(
        &bell_pair_circuit(),
        &ChshSettings::default(),
        10_000,
        ACCEPTANCE_SEED,
    )
    .unwrap();
    assert!((sampled - ch).abs() < 0.03, "sampled CH = {sampled}");
}

#[test]
fn hardy_embedded_configuration_hits_the_optimum() {
    let exact = exact_hardy_excess(&hardy_state_circuit(), &HARDY_SETTINGS).unwrap();
    assert!(
        (exact - HARDY_P_IMP_OPTIMUM).abs() < 1e-9,
        "exact excess = {exact}"
    );
}

#[test]
fn hardy_sampled_value_in_acceptance_band() {
    let p = hardy_p_imp(10_000, ACCEPTANCE_SEED).unwrap();
    assert!((0.080..=0.095).contains(&p), "P_imp = {p}");
}

#[test]
fn hardy_excess_vanishes_for_product_state() {
    let product = Circuit::new(2, 0);
    let exact = exact_hardy_excess(&product, &HARDY_SETTINGS).unwrap();
    assert_eq!(exact, 0.0);
    let sampled = hardy_excess(&product, &HARDY_SETTINGS, 4_000, 17).unwrap();
    assert_eq!(sampled, 0.0);
}

#[test]
fn correlator_rejects_bad_preparations() {
    let three_qubits = Circuit::new(3, 0);
    assert!(measure_correlator(&three_qubits, 0.0, 0.0, 10, 0).is_err());

    let mut with_measurement = Circuit::new(2, 1);
    with_measurement.measure_z(0, 0);
    assert!(measure_correlator(&with_measurement, 0.0, 0.0, 10, 0).is_err());
}
