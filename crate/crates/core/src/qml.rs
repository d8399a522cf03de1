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

//! Causal feature selection on a three-qubit generator.
//!
//! The generator realises the causal structure `C ↔ A → B` on qubits
//! `(A, C, B) = (0, 1, 2)`: with probability `lambda` a sample's `(A, C)`
//! pair comes from a Bell pair (maximal confounding), otherwise from two
//! dephased, independent uniform bits; the label qubit B is driven from A by
//! a CNOT, with optional classical flip noise on the measured label. Since
//! the Bell parameter is linear in the state, the exact Confounding Strength
//! of the `(A, C)` mixture is `lambda·√2`, spanning zero to maximal
//! confounding as `lambda` runs from 0 to 1.
//!
//! The DO-operator from [`crate::intervention`] is applied inside the
//! three-qubit circuit to classify each feature as causal or spurious, and
//! from-scratch logistic classifiers trained on the selected features are
//! compared across domains of varying `lambda`.

use alloc::vec::Vec;
use alloc::{format, vec};

use rand::Rng;

use crate::qsim::{run_circuit, Circuit};
use crate::rng::{derive, labels, stream};
use crate::stats::{self, TestResult};
use crate::{bell, fmath, Error, Result};

/// Interventional effect above which a feature counts as causal.
pub const CAUSAL_EFFECT_THRESHOLD: f64 = 0.2;

/// The lambda grid of the five robustness test domains.
pub const DEFAULT_LAMBDAS: [f64; 5] = [1.0, 0.75, 0.5, 0.25, 0.0];

/// The two candidate features.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Feature {
    A,
    C,
}

impl Feature {
    #[must_use]
    pub fn qubit(&self) -> usize {
        match self {
            Feature::A => 0,
            Feature::C => 1,
        }
    }

    #[must_use]
    pub fn label(&self) -> &'static str {
        match self {
            Feature::A => "A",
            Feature::C => "C",
        }
    }

    fn value(&self, row: &Row) -> f64 {
        match self {
            Feature::A => f64::from(row.a),
            Feature::C => f64::from(row.c),
        }
    }
}

/// Sampling configuration for one data domain.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DomainSpec {
    /// Probability that a sample's (A, C) pair comes from the Bell pair.
    pub lambda: f64,
    /// Classical flip probability on the measured label bit.
    pub flip_probability: f64,
    pub n_samples: usize,
}

impl DomainSpec {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.lambda) {
            return Err(Error::Argument(format!(
                "lambda {} outside [0, 1]",
                self.lambda
            )));
        }
        if !(0.0..=0.5).contains(&self.flip_probability) {
            return Err(Error::Argument(format!(
                "flip probability {} outside [0, 0.5]",
                self.flip_probability
            )));
        }
        if self.n_samples == 0 {
            return Err(Error::Argument("n_samples must be at least 1".into()));
        }
        Ok(())
    }
}

/// One observation: feature bits and the label bit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Row {
    pub a: u8,
    pub c: u8,
    pub b: u8,
}

/// A generated dataset together with its domain.
#[derive(Clone, Debug)]
pub struct Dataset {
    pub rows: Vec<Row>,
    pub domain: DomainSpec,
}

fn push_prep(c: &mut Circuit, entangled: bool) {
    if entangled {
        c.h(0).cnot(0, 1);
    } else {
        // Dephased |+⟩⊗|+⟩: two independent uniform classical bits.
        c.h(0).h(1).nonselective_z(0).nonselective_z(1);
    }
}

fn generator_circuit(entangled: bool) -> Circuit {
    let mut c = Circuit::new(3, 3);
    push_prep(&mut c, entangled);
    c.cnot(0, 2);
    c.measure_z(0, 0).measure_z(1, 1).measure_z(2, 2);
    c
}

/// The three-qubit generator with the project–prepare surgery applied to
/// one feature qubit before the label is generated.
fn do_generator_circuit(feature: Feature, value: u8) -> Circuit {
    let mut c = Circuit::new(3, 3);
    push_prep(&mut c, true);
    let q = feature.qubit();
    c.nonselective_z(q).reset(q);
    if value == 1 {
        c.x(q);
    }
    c.cnot(0, 2);
    c.measure_z(0, 0).measure_z(1, 1).measure_z(2, 2);
    c
}

/// Draws one sample. Pure in `(domain, seed, index)`: the mixture arm and
/// flip noise come from one substream, the circuit shot from another.
pub fn sample_row(domain: &DomainSpec, seed: u64, index: u64) -> Result<Row> {
    domain.validate()?;
    let mut classical = stream(seed, &[labels::QML_ROW_CLASSICAL, index]);
    let entangled = classical.gen::<f64>() < domain.lambda;
    let counts = run_circuit(
        &generator_circuit(entangled),
        1,
        derive(seed, &[labels::QML_ROW_CIRCUIT, index]),
    )?;
    let key = counts.table().keys().next().expect("one shot, one key");
    let bits = key.as_bytes();
    let mut row = Row {
        a: bits[0] - b'0',
        c: bits[1] - b'0',
        b: bits[2] - b'0',
    };
    if domain.flip_probability > 0.0 && classical.gen::<f64>() < domain.flip_probability {
        row.b ^= 1;
    }
    Ok(row)
}

/// Generates a full dataset with per-sample substreams.
pub fn generate_dataset(domain: DomainSpec, seed: u64) -> Result<Dataset> {
    domain.validate()?;
    let rows = (0..domain.n_samples as u64)
        .map(|i| sample_row(&domain, seed, i))
        .collect::<Result<Vec<Row>>>()?;
    Ok(Dataset { rows, domain })
}

/// Exact Confounding Strength of the (A, C) mixture at a given lambda.
/// S is linear in the density matrix, so this equals `lambda·√2`.
pub fn exact_mixture_cs(lambda: f64) -> Result<f64> {
    let settings = bell::ChshSettings::default();
    let bell_prep = bell::bell_pair_circuit();
    let mut product_prep = Circuit::new(2, 0);
    product_prep
        .h(0)
        .h(1)
        .nonselective_z(0)
        .nonselective_z(1);
    let mut s = 0.0;
    for (alpha, beta, sign) in settings.pairs() {
        let e_bell = bell::exact_correlator(&bell_prep, alpha, beta)?;
        let e_product = bell::exact_correlator(&product_prep, alpha, beta)?;
        s += sign * (lambda * e_bell + (1.0 - lambda) * e_product);
    }
    Ok(bell::confounding_strength(s))
}

/// Result of probing one feature with the DO-operator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FeatureCheck {
    pub feature: Feature,
    /// Observational `P(B=1 | feature = 1)` at lambda = 1 (None if the
    /// conditioning event never occurred).
    pub p_obs_b1_given_1: Option<f64>,
    /// `P(B=1 | DO(feature = v))` for v = 0, 1.
    pub p_do_b1: [f64; 2],
    /// `|P(B=1|DO(1)) − P(B=1|DO(0))|`.
    pub effect: f64,
    /// True when `effect` exceeds [`CAUSAL_EFFECT_THRESHOLD`].
    pub causal: bool,
}

/// Interventional validation of one feature on the maximally confounded
/// generator.
pub fn interventional_feature_check(feature: Feature, shots: u64, seed: u64) -> Result<FeatureCheck> {
    let fid = feature.qubit() as u64;
    // Observational contrast on the entangled generator.
    let counts = run_circuit(
        &generator_circuit(true),
        shots,
        derive(seed, &[labels::QML_FEATURE, fid, 0]),
    )?;
    let mut n_cond = 0u64;
    let mut n_b1 = 0u64;
    let feature_slot = feature.qubit();
    for (key, &count) in counts.table() {
        let bits = key.as_bytes();
        if bits[feature_slot] == b'1' {
            n_cond += count;
            if bits[2] == b'1' {
                n_b1 += count;
            }
        }
    }
    let p_obs = (n_cond > 0).then(|| n_b1 as f64 / n_cond as f64);

    let mut p_do = [0.0f64; 2];
    for value in 0..2u8 {
        let counts = run_circuit(
            &do_generator_circuit(feature, value),
            shots,
            derive(seed, &[labels::QML_FEATURE, fid, 1 + u64::from(value)]),
        )?;
        let b1: u64 = counts
            .table()
            .iter()
            .filter(|(key, _)| key.as_bytes()[2] == b'1')
            .map(|(_, &c)| c)
            .sum();
        p_do[value as usize] = b1 as f64 / counts.total_shots() as f64;
    }
    let effect = fmath::abs(p_do[1] - p_do[0]);
    Ok(FeatureCheck {
        feature,
        p_obs_b1_given_1: p_obs,
        p_do_b1: p_do,
        effect,
        causal: effect > CAUSAL_EFFECT_THRESHOLD,
    })
}

// ---------------------------------------------------------------------------
// Logistic regression
// ---------------------------------------------------------------------------

/// Training hyperparameters for the from-scratch logistic classifier.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Hyper {
    pub learning_rate: f64,
    pub iterations: u32,
    pub l2: f64,
}

impl Default for Hyper {
    fn default() -> Self {
        Hyper {
            learning_rate: 0.1,
            iterations: 1000,
            l2: 1e-4,
        }
    }
}

/// A trained logistic model over a fixed feature subset.
#[derive(Clone, Debug)]
pub struct LogisticModel {
    pub features: Vec<Feature>,
    pub weights: Vec<f64>,
    pub bias: f64,
    pub hyper: Hyper,
}

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + fmath::exp(-z))
}

/// Full-batch gradient descent on L2-regularized cross-entropy, starting
/// from zero weights. Deterministic in its inputs; the iteration count is
/// fixed (no convergence requirement). The L2 penalty applies to weights
/// only, not the bias.
pub fn train_logistic(data: &Dataset, features: &[Feature], hyper: Hyper) -> Result<LogisticModel> {
    if data.rows.is_empty() {
        return Err(Error::Argument("training set must be nonempty".into()));
    }
    if features.is_empty() {
        return Err(Error::Argument("feature set must be nonempty".into()));
    }
    let n = data.rows.len() as f64;
    let mut weights = vec![0.0f64; features.len()];
    let mut bias = 0.0f64;
    let mut grad = vec![0.0f64; features.len()];
    for _ in 0..hyper.iterations {
        grad.iter_mut().for_each(|g| *g = 0.0);
        let mut grad_bias = 0.0;
        for row in &data.rows {
            let mut z = bias;
            for (w, f) in weights.iter().zip(features) {
                z += w * f.value(row);
            }
            let residual = sigmoid(z) - f64::from(row.b);
            for (g, f) in grad.iter_mut().zip(features) {
                *g += residual * f.value(row);
            }
            grad_bias += residual;
        }
        for (w, g) in weights.iter_mut().zip(&grad) {
            *w -= hyper.learning_rate * (g / n + hyper.l2 * *w);
        }
        bias -= hyper.learning_rate * grad_bias / n;
    }
    if weights.iter().any(|w| !w.is_finite()) || !bias.is_finite() {
        return Err(Error::Numerical("training diverged".into()));
    }
    Ok(LogisticModel {
        features: features.to_vec(),
        weights,
        bias,
        hyper,
    })
}

impl LogisticModel {
    /// Class 1 iff `sigmoid(score) ≥ 0.5`, i.e. score ≥ 0.
    #[must_use]
    pub fn predict(&self, row: &Row) -> u8 {
        let mut z = self.bias;
        for (w, f) in self.weights.iter().zip(&self.features) {
            z += w * f.value(row);
        }
        u8::from(z >= 0.0)
    }

    #[must_use]
    pub fn accuracy(&self, data: &Dataset) -> f64 {
        let correct = data
            .rows
            .iter()
            .filter(|row| self.predict(row) == row.b)
            .count();
        correct as f64 / data.rows.len() as f64
    }
}

// ---------------------------------------------------------------------------
// Robustness study
// ---------------------------------------------------------------------------

/// Configuration of the cross-domain robustness experiment.
#[derive(Clone, Debug)]
pub struct RobustnessConfig {
    pub seeds: u64,
    pub train_samples: usize,
    pub train_fraction: f64,
    pub test_samples: usize,
    pub lambdas: Vec<f64>,
    pub flip_probability: f64,
    pub hyper: Hyper,
}

impl Default for RobustnessConfig {
    fn default() -> Self {
        RobustnessConfig {
            seeds: 20,
            train_samples: 2000,
            train_fraction: 0.7,
            test_samples: 500,
            lambdas: DEFAULT_LAMBDAS.to_vec(),
            flip_probability: 0.0,
            hyper: Hyper::default(),
        }
    }
}

/// Accuracy of the three classifiers on one test domain for one seed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RunRecord {
    pub seed_index: u64,
    pub lambda: f64,
    pub naive: f64,
    pub causal: f64,
    pub confounded: f64,
}

/// Per-domain aggregates over seeds.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DomainSummary {
    pub lambda: f64,
    pub naive_mean: f64,
    pub naive_std: f64,
    pub causal_mean: f64,
    pub causal_std: f64,
    pub confounded_mean: f64,
    pub confounded_std: f64,
}

/// Full robustness report. The headline gap compares the causal model
/// (feature A only) against the naive model (A and C); the confounded
/// control (C only) is recorded but excluded from the gap.
#[derive(Clone, Debug)]
pub struct RobustnessReport {
    pub records: Vec<RunRecord>,
    pub domains: Vec<DomainSummary>,
    /// Mean over seeds of (causal − naive) domain-average accuracy.
    pub mean_gap: f64,
    /// Paired t-test over the per-seed domain-average differences.
    pub paired: TestResult,
    pub config: RobustnessConfig,
}

/// One seed's pipeline: generate at lambda = 1, split, train the three
/// models, evaluate on every test domain. Pure in `(config, seed, k)`.
pub fn robustness_run(config: &RobustnessConfig, seed: u64, k: u64) -> Result<Vec<RunRecord>> {
    let train_domain = DomainSpec {
        lambda: 1.0,
        flip_probability: config.flip_probability,
        n_samples: config.train_samples,
    };
    let full = generate_dataset(train_domain, derive(seed, &[labels::QML_TRAIN, k]))?;
    let split = (config.train_fraction * full.rows.len() as f64) as usize;
    if split == 0 {
        return Err(Error::Argument("training split is empty".into()));
    }
    let train = Dataset {
        rows: full.rows[..split].to_vec(),
        domain: full.domain,
    };
    let naive = train_logistic(&train, &[Feature::A, Feature::C], config.hyper)?;
    let causal = train_logistic(&train, &[Feature::A], config.hyper)?;
    let confounded = train_logistic(&train, &[Feature::C], config.hyper)?;

    let mut records = Vec::with_capacity(config.lambdas.len());
    for (d, &lambda) in config.lambdas.iter().enumerate() {
        let domain = DomainSpec {
            lambda,
            flip_probability: config.flip_probability,
            n_samples: config.test_samples,
        };
        let test = generate_dataset(domain, derive(seed, &[labels::QML_DOMAIN, k, d as u64]))?;
        records.push(RunRecord {
            seed_index: k,
            lambda,
            naive: naive.accuracy(&test),
            causal: causal.accuracy(&test),
            confounded: confounded.accuracy(&test),
        });
    }
    Ok(records)
}

/// Aggregates per-seed records into the robustness report.
pub fn summarize_robustness(
    config: RobustnessConfig,
    records: Vec<RunRecord>,
) -> Result<RobustnessReport> {
    if config.seeds < 2 {
        return Err(Error::Argument("robustness requires at least 2 seeds".into()));
    }
    let mut domains = Vec::with_capacity(config.lambdas.len());
    for &lambda in &config.lambdas {
        let of = |get: fn(&RunRecord) -> f64| -> Vec<f64> {
            records
                .iter()
                .filter(|r| r.lambda == lambda)
                .map(get)
                .collect()
        };
        let naive = of(|r| r.naive);
        let causal = of(|r| r.causal);
        let confounded = of(|r| r.confounded);
        domains.push(DomainSummary {
            lambda,
            naive_mean: stats::mean(&naive),
            naive_std: stats::sample_std(&naive),
            causal_mean: stats::mean(&causal),
            causal_std: stats::sample_std(&causal),
            confounded_mean: stats::mean(&confounded),
            confounded_std: stats::sample_std(&confounded),
        });
    }
    // Per-seed domain-average difference, paired across seeds.
    let mut diffs = Vec::with_capacity(config.seeds as usize);
    for k in 0..config.seeds {
        let per_seed: Vec<&RunRecord> = records.iter().filter(|r| r.seed_index == k).collect();
        let causal_mean =
            per_seed.iter().map(|r| r.causal).sum::<f64>() / per_seed.len() as f64;
        let naive_mean = per_seed.iter().map(|r| r.naive).sum::<f64>() / per_seed.len() as f64;
        diffs.push(causal_mean - naive_mean);
    }
    let paired = stats::paired_t_test(&diffs)?;
    Ok(RobustnessReport {
        records,
        domains,
        mean_gap: stats::mean(&diffs),
        paired,
        config,
    })
}

/// Runs the full robustness experiment sequentially over seeds.
pub fn run_robustness(config: RobustnessConfig, seed: u64) -> Result<RobustnessReport> {
    if config.seeds < 2 {
        return Err(Error::Argument("robustness requires at least 2 seeds".into()));
    }
    let mut records = Vec::new();
    for k in 0..config.seeds {
        records.extend(robustness_run(&config, seed, k)?);
    }
    summarize_robustness(config, records)
}

#[cfg(test)]
mod tests;
