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

//! Circuit-level DO-operator and the confounder validation suite.
//!
//! The intervention `DO(A = a₀)` on one half of a Bell pair is the
//! project–prepare surgery: a non-selective Z measurement of A (dephasing,
//! outcome discarded) severs the entanglement, a reset returns A to `|0⟩`,
//! and an optional X prepares `|1⟩`. The channel is trace preserving and
//! leaves B's marginal untouched, so comparing `P(B|A)` with
//! `P(B|DO(A))` isolates the spurious correlation induced by the shared
//! entangled state.

use alloc::string::String;
use alloc::{format, vec::Vec};

use crate::bell::{bell_pair_circuit, product_control_circuit};
use crate::qsim::{exact_probabilities, run_circuit, Circuit};
use crate::rng::{derive, labels};
use crate::stats::{self, TestResult};
use crate::{Error, Result};

/// A conditional estimate `P(B = 0 | condition)` with its Wilson interval.
/// `estimate` is `None` when the conditioning event never occurred
/// (undefined, as opposed to zero).
#[derive(Clone, Debug, PartialEq)]
pub struct ArmEstimate {
    pub label: String,
    pub n: u64,
    pub successes: u64,
    pub estimate: Option<f64>,
    pub wilson_lo: Option<f64>,
    pub wilson_hi: Option<f64>,
}

impl ArmEstimate {
    fn from_counts(label: String, successes: u64, n: u64) -> Result<ArmEstimate> {
        if n == 0 {
            return Ok(ArmEstimate {
                label,
                n,
                successes,
                estimate: None,
                wilson_lo: None,
                wilson_hi: None,
            });
        }
        let (lo, hi) = stats::wilson_interval(successes, n, 0.95)?;
        Ok(ArmEstimate {
            label,
            n,
            successes,
            estimate: Some(successes as f64 / n as f64),
            wilson_lo: Some(lo),
            wilson_hi: Some(hi),
        })
    }
}

/// Observational conditionals `P(B=0 | A=a)` on the Bell pair.
#[derive(Clone, Debug, PartialEq)]
pub struct ObserveResult {
    pub arms: [ArmEstimate; 2],
    pub marginal_a0: f64,
    pub shots: u64,
    pub trials: u64,
}

/// One interventional arm `P(B=0 | DO(A=a₀))`.
#[derive(Clone, Debug, PartialEq)]
pub struct InterveneResult {
    pub arm: ArmEstimate,
    pub per_trial_b0: Vec<f64>,
    /// True when the A register read `a₀` in every shot, as the preparation
    /// stage guarantees.
    pub a_register_forced: bool,
    pub shots: u64,
    pub trials: u64,
}

/// Bell pair measured in Z on both qubits (slot 0 = A, slot 1 = B).
#[must_use]
pub fn observational_circuit() -> Circuit {
    let mut c = Circuit::new(2, 2);
    for op in bell_pair_circuit().ops() {
        c.push(op.clone());
    }
    c.measure_z(0, 0).measure_z(1, 1);
    c
}

/// Bell pair with the project–prepare surgery applied to A before both
/// qubits are measured.
#[must_use]
pub fn intervened_circuit(a0: u8) -> Circuit {
    let mut c = Circuit::new(2, 2);
    for op in bell_pair_circuit().ops() {
        c.push(op.clone());
    }
    c.nonselective_z(0).reset(0);
    if a0 == 1 {
        c.x(0);
    }
    c.measure_z(0, 0).measure_z(1, 1);
    c
}

/// Observational run: `trials` independent runs of `shots` shots each,
/// aggregated into conditional estimates with Wilson intervals.
pub fn observe(shots: u64, trials: u64, seed: u64) -> Result<ObserveResult> {
    if trials == 0 {
        return Err(Error::Argument("trials must be at least 1".into()));
    }
    let circuit = observational_circuit();
    let mut n_a = [0u64; 2];
    let mut b0_given_a = [0u64; 2];
    for trial in 0..trials {
        let counts = run_circuit(&circuit, shots, derive(seed, &[labels::OBSERVE, trial]))?;
        for (key, &count) in counts.table() {
            let bits = key.as_bytes();
            let a = (bits[0] - b'0') as usize;
            let b = bits[1] - b'0';
            n_a[a] += count;
            if b == 0 {
                b0_given_a[a] += count;
            }
        }
    }
    let total = n_a[0] + n_a[1];
    Ok(ObserveResult {
        arms: [
            ArmEstimate::from_counts("A=0".into(), b0_given_a[0], n_a[0])?,
            ArmEstimate::from_counts("A=1".into(), b0_given_a[1], n_a[1])?,
        ],
        marginal_a0: n_a[0] as f64 / total as f64,
        shots,
        trials,
    })
}

/// Interventional run for one target value `a₀ ∈ {0, 1}`.
pub fn intervene(a0: u8, shots: u64, trials: u64, seed: u64) -> Result<InterveneResult> {
    if a0 > 1 {
        return Err(Error::Argument(format!("target value {a0} must be 0 or 1")));
    }
    if trials == 0 {
        return Err(Error::Argument("trials must be at least 1".into()));
    }
    let circuit = intervened_circuit(a0);
    let mut successes = 0u64;
    let mut forced = true;
    let mut per_trial_b0 = Vec::with_capacity(trials as usize);
    for trial in 0..trials {
        let counts = run_circuit(
            &circuit,
            shots,
            derive(seed, &[labels::INTERVENE, u64::from(a0), trial]),
        )?;
        let mut trial_b0 = 0u64;
        for (key, &count) in counts.table() {
            let bits = key.as_bytes();
            if bits[0] - b'0' != a0 {
                forced = false;
            }
            if bits[1] == b'0' {
                trial_b0 += count;
            }
        }
        successes += trial_b0;
        per_trial_b0.push(trial_b0 as f64 / shots as f64);
    }
    Ok(InterveneResult {
        arm: ArmEstimate::from_counts(format!("DO(A={a0})"), successes, shots * trials)?,
        per_trial_b0,
        a_register_forced: forced,
        shots,
        trials,
    })
}

/// Exact `P(B=0 | DO(A=a₀))` via channel propagation (equals 1/2).
pub fn exact_interventional_b0(a0: u8) -> Result<f64> {
    let probs = exact_probabilities(&intervened_circuit(a0))?;
    Ok(probs
        .iter()
        .filter(|(key, _)| key.as_bytes()[1] == b'0')
        .map(|(_, p)| p)
        .sum())
}

/// Exact observational `P(B=0 | A=a)`; `None` if `P(A=a) = 0`.
pub fn exact_observational_b0(a: u8) -> Result<Option<f64>> {
    let probs = exact_probabilities(&observational_circuit())?;
    let mut p_a = 0.0;
    let mut p_ab0 = 0.0;
    for (key, p) in probs {
        let bits = key.as_bytes();
        if bits[0] - b'0' == a {
            p_a += p;
            if bits[1] == b'0' {
                p_ab0 += p;
            }
        }
    }
    if p_a <= 0.0 {
        return Ok(None);
    }
    Ok(Some(p_ab0 / p_a))
}

/// Welch no-signaling comparison of per-trial B frequencies under the two
/// interventions. Returns `(Δ = |mean₁ − mean₂|, test)`.
pub fn no_signaling_test(arm0: &[f64], arm1: &[f64]) -> Result<(f64, TestResult)> {
    if arm0.len() < 2 || arm1.len() < 2 {
        return Err(Error::Argument(
            "no-signaling test requires at least 2 trials per arm".into(),
        ));
    }
    let delta = (stats::mean(arm0) - stats::mean(arm1)).abs();
    Ok((delta, stats::welch_t_test(arm0, arm1)?))
}

/// Full Experiment-4 report: observational vs interventional conditionals,
/// causal effects, and no-signaling checks (Welch over per-trial
/// frequencies, plus the pooled two-proportion cross-check).
#[derive(Clone, Debug)]
pub struct InterventionReport {
    pub observational: ObserveResult,
    pub interventional: [InterveneResult; 2],
    /// `|P(B=0|A=a) − P(B=0|DO(A=a))|` for a = 0, 1; `None` when the
    /// observational conditional is undefined.
    pub causal_effect: [Option<f64>; 2],
    pub no_signaling_delta: f64,
    pub no_signaling_welch: TestResult,
    pub no_signaling_pooled_p: f64,
    pub shots: u64,
    pub trials: u64,
}

pub fn run_intervention_experiment(shots: u64, trials: u64, seed: u64) -> Result<InterventionReport> {
    let observational = observe(shots, trials, seed)?;
    let do0 = intervene(0, shots, trials, seed)?;
    let do1 = intervene(1, shots, trials, seed)?;
    let effect = |obs: &ArmEstimate, int: &ArmEstimate| -> Option<f64> {
        match (obs.estimate, int.estimate) {
            (Some(o), Some(i)) => Some((o - i).abs()),
            _ => None,
        }
    };
    let causal_effect = [
        effect(&observational.arms[0], &do0.arm),
        effect(&observational.arms[1], &do1.arm),
    ];
    let (delta, welch) = no_signaling_test(&do0.per_trial_b0, &do1.per_trial_b0)?;
    let (_, pooled_p) = stats::two_proportion_z_test(
        do0.arm.successes,
        do0.arm.n,
        do1.arm.successes,
        do1.arm.n,
    )?;
    Ok(InterventionReport {
        observational,
        interventional: [do0, do1],
        causal_effect,
        no_signaling_delta: delta,
        no_signaling_welch: welch,
        no_signaling_pooled_p: pooled_p,
        shots,
        trials,
    })
}

/// Experiment-1 validation of the three confounder conditions.
#[derive(Clone, Debug)]
pub struct ConfounderValidationReport {
    /// Condition (i): maximal mixedness of each reduced state (exact).
    pub purity_a: f64,
    pub purity_b: f64,
    pub entropy_a: f64,
    pub entropy_b: f64,
    /// Condition (iii): sampled correlators with and without the confounder.
    pub e_zz: f64,
    pub e_xx: f64,
    pub e_zz_product: f64,
    pub e_xx_product: f64,
    /// Condition (ii): Welch comparison of A's marginal with vs without B
    /// being measured.
    pub no_signaling_delta: f64,
    pub no_signaling: TestResult,
    pub shots: u64,
    pub trials: u64,
}

fn zz_correlator_circuit(prep: &Circuit, x_basis: bool) -> Circuit {
    let mut c = Circuit::new(2, 2);
    for op in prep.ops() {
        c.push(op.clone());
    }
    if x_basis {
        c.h(0).h(1);
    }
    c.measure_z(0, 0).measure_z(1, 1);
    c
}

fn sampled_parity(circuit: &Circuit, shots: u64, seed: u64) -> Result<f64> {
    let counts = run_circuit(circuit, shots, seed)?;
    Ok(counts.mean_over_shots(|bits| if bits[0] ^ bits[1] == 0 { 1.0 } else { -1.0 }))
}

pub fn validate_confounder(shots: u64, trials: u64, seed: u64) -> Result<ConfounderValidationReport> {
    if trials < 2 {
        return Err(Error::Argument(
            "confounder validation requires at least 2 trials".into(),
        ));
    }
    // (i) Reduced-state mixedness, from the exact statevector.
    let bell_state = bell_pair_circuit().prepared_state()?;
    let rho_a = bell_state.reduced_density_matrix(&[0])?;
    let rho_b = bell_state.reduced_density_matrix(&[1])?;

    // (ii) A's marginal with and without B's measurement, per trial.
    let mut with_b = Circuit::new(2, 2);
    for op in bell_pair_circuit().ops() {
        with_b.push(op.clone());
    }
    with_b.measure_z(0, 0).measure_z(1, 1);
    let mut without_b = Circuit::new(2, 1);
    for op in bell_pair_circuit().ops() {
        without_b.push(op.clone());
    }
    without_b.measure_z(0, 0);

    let mut paired = Vec::with_capacity(trials as usize);
    let mut alone = Vec::with_capacity(trials as usize);
    for trial in 0..trials {
        let counts = run_circuit(&with_b, shots, derive(seed, &[labels::VALIDATE_PAIRED, trial]))?;
        let a0: u64 = counts
            .table()
            .iter()
            .filter(|(key, _)| key.as_bytes()[0] == b'0')
            .map(|(_, &c)| c)
            .sum();
        paired.push(a0 as f64 / shots as f64);

        let counts = run_circuit(&without_b, shots, derive(seed, &[labels::VALIDATE_ALONE, trial]))?;
        alone.push(counts.frequency("0"));
    }
    let delta = (stats::mean(&paired) - stats::mean(&alone)).abs();
    let welch = stats::welch_t_test(&paired, &alone)?;

    // (iii) Correlators with the confounder present vs removed.
    let bell = bell_pair_circuit();
    let product = product_control_circuit();
    let corr = |prep: &Circuit, x_basis: bool, k: u64| -> Result<f64> {
        sampled_parity(
            &zz_correlator_circuit(prep, x_basis),
            shots,
            derive(seed, &[labels::VALIDATE_CORR, k]),
        )
    };

    Ok(ConfounderValidationReport {
        purity_a: rho_a.purity()?,
        purity_b: rho_b.purity()?,
        entropy_a: rho_a.von_neumann_entropy()?,
        entropy_b: rho_b.von_neumann_entropy()?,
        e_zz: corr(&bell, false, 0)?,
        e_xx: corr(&bell, true, 1)?,
        e_zz_product: corr(&product, false, 2)?,
        e_xx_product: corr(&product, true, 3)?,
        no_signaling_delta: delta,
        no_signaling: welch,
        shots,
        trials,
    })
}

#[cfg(test)]
mod tests;
