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
use crate::qsim::DensityMatrix;

const ACCEPTANCE_SEED: u64 = 42;

#[test]
fn observational_conditionals_are_perfectly_correlated() {
    let obs = observe(10_000, 4, ACCEPTANCE_SEED).unwrap();
    // |Φ⁺⟩ never produces cross terms in Z, so these are exact.
    assert_eq!(obs.arms[0].estimate, Some(1.0));
    assert_eq!(obs.arms[1].estimate, Some(0.0));
    assert_eq!(obs.arms[0].wilson_hi, Some(1.0));
    assert_eq!(obs.arms[1].wilson_lo, Some(0.0));
    let n = (obs.shots * obs.trials) as f64;
    let sigma = (0.25 / n).sqrt();
    assert!((obs.marginal_a0 - 0.5).abs() < 3.0 * sigma);
}

#[test]
fn intervention_forces_target_and_randomizes_b() {
    for a0 in [0u8, 1] {
        let result = intervene(a0, 4_000, 4, ACCEPTANCE_SEED).unwrap();
        assert!(result.a_register_forced);
        let p = result.arm.estimate.unwrap();
        assert!((0.47..=0.53).contains(&p), "P(B=0|DO(A={a0})) = {p}");
        assert_eq!(result.per_trial_b0.len(), 4);
    }
}

#[test]
fn exact_interventional_marginal_is_half() {
    for a0 in [0u8, 1] {
        let p = exact_interventional_b0(a0).unwrap();
        assert!((p - 0.5).abs() < 1e-12, "P = {p}");
    }
}

#[test]
fn exact_observational_conditionals() {
    assert_eq!(exact_observational_b0(0).unwrap(), Some(1.0));
    assert_eq!(exact_observational_b0(1).unwrap(), Some(0.0));
}

#[test]
fn undefined_conditionals_are_distinct_from_zero() {
    let arm = ArmEstimate::from_counts("A=1".into(), 0, 0).unwrap();
    assert_eq!(arm.estimate, None);
    assert_eq!(arm.wilson_lo, None);
}

#[test]
fn no_signaling_on_identical_inputs() {
    let xs = [0.5, 0.501, 0.499, 0.5];
    let (delta, test) = no_signaling_test(&xs, &xs).unwrap();
    assert_eq!(delta, 0.0);
    assert_eq!(test.p_value, 1.0);
}

#[test]
fn no_signaling_detects_separated_arms() {
    // Means 0.50 vs 0.60, sd ≈ 0.005, n = 10 per arm.
    let arm0: Vec<f64> = (0..10)
        .map(|i| 0.50 + if i % 2 == 0 { 0.005 } else { -0.005 })
        .collect();
    let arm1: Vec<f64> = (0..10)
        .map(|i| 0.60 + if i % 2 == 0 { 0.005 } else { -0.005 })
        .collect();
    let (delta, test) = no_signaling_test(&arm0, &arm1).unwrap();
    assert!((delta - 0.1).abs() < 1e-12);
    assert!(test.p_value < 1e-3, "p = {}", test.p_value);
}

#[test]
fn no_signaling_requires_two_trials() {
    assert!(no_signaling_test(&[0.5], &[0.5, 0.5]).is_err());
}

#[test]
fn full_experiment_report_shows_collapse() {
    let report = run_intervention_experiment(4_000, 4, ACCEPTANCE_SEED).unwrap();
    // Spurious-correlation collapse: observational 1.0 vs interventional 0.5.
    assert!(report.causal_effect[0].unwrap() >= 0.45);
    assert!(report.causal_effect[1].unwrap() >= 0.45);
    assert!(report.no_signaling_welch.p_value > 0.05);
    assert!(report.no_signaling_pooled_p > 0.05);
    assert!(report.no_signaling_delta < 0.05);
}

#[test]
fn b_marginal_is_preserved_by_the_projection_stage() {
    // Exact channel: B's distribution before and after dephasing A.
    let mut plain = Circuit::new(2, 1);
    for op in crate::bell::bell_pair_circuit().ops() {
        plain.push(op.clone());
    }
    plain.measure_z(1, 0);

    let mut dephased = Circuit::new(2, 1);
    for op in crate::bell::bell_pair_circuit().ops() {
        dephased.push(op.clone());
    }
    dephased.nonselective_z(0).measure_z(1, 0);

    let p_plain = exact_probabilities(&plain).unwrap();
    let p_dephased = exact_probabilities(&dephased).unwrap();
    for key in ["0", "1"] {
        assert!((p_plain[key] - p_dephased[key]).abs() < 1e-12);
    }
}

#[test]
fn project_prepare_channel_is_cptp_on_reference_states() {
    // Push a few exact density matrices through the surgery and check the
    // output is still a valid state.
    let bell = crate::bell::bell_pair_circuit().prepared_state().unwrap();
    let psi = crate::bell::partially_entangled_circuit(0.61)
        .prepared_state()
        .unwrap();
    for state in [bell, psi] {
        for a0 in [0u8, 1] {
            let mut rho = DensityMatrix::from_state(&state);
            rho.dephase(0);
            rho.reset(0);
            if a0 == 1 {
                rho.apply_unitary(&crate::qsim::GateOp::X(0)).unwrap();
            }
            rho.validate().unwrap();
        }
    }
}

#[test]
fn confounder_validation_report() {
    let report = validate_confounder(4_000, 10, ACCEPTANCE_SEED).unwrap();
    assert!((report.purity_a - 0.5).abs() < 1e-9);
    assert!((report.purity_b - 0.5).abs() < 1e-9);
    assert!((report.entropy_a - 1.0).abs() < 1e-9);
    assert!((report.entropy_b - 1.0).abs() < 1e-9);
    // Stabilizer correlators of |Φ⁺⟩ are deterministic even when sampled.
    assert_eq!(report.e_zz, 1.0);
    assert_eq!(report.e_xx, 1.0);
    // |0⟩⊗|+⟩ control: both correlators vanish, 3σ at 4,000 shots ≈ 0.047.
    assert!(report.e_zz_product.abs() <= 0.05);
    assert!(report.e_xx_product.abs() <= 0.05);
    assert!(report.no_signaling.p_value > 0.05, "p = {}", report.no_signaling.p_value);
}

#[test]
fn intervene_rejects_bad_target() {
    assert!(intervene(2, 10, 2, 0).is_err());
}
