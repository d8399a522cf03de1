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

//! CHSH correlators, Confounding Strength, and the Bell-type test suite.
//!
//! A measurement setting is stored as a half-angle `φ`: the measured
//! observable is `O(φ) = cos(2φ)·Z + sin(2φ)·X`, realised by appending
//! `Ry(−2φ)` and measuring in Z. Under this convention the default settings
//! `{a = 0, a' = π/4, b = π/8, b' = −π/8}` give `S = 2√2` on the Bell state
//! and the sweep law `CS(θ) = (1 + sin 2θ)/√2` for
//! `|ψ(θ)⟩ = cos θ|00⟩ + sin θ|11⟩`.
//!
//! Confounding Strength normalizes the Bell parameter: `CS = |S|/2`, so the
//! deterministic local-hidden-variable ceiling sits at 1 and the quantum
//! (Tsirelson) ceiling at √2.

use alloc::format;
use alloc::vec::Vec;

use rand::Rng;

use crate::qsim::{exact_probabilities, run_circuit, Circuit, Pauli, StateVector};
use crate::rng::{derive, labels, stream};
use crate::{fmath, stats, Error, Result};

/// Quantum ceiling for CHSH Confounding Strength, `√2`.
pub const TSIRELSON_CS: f64 = core::f64::consts::SQRT_2;

/// Classical (LHV) ceiling for CHSH Confounding Strength.
pub const CLASSICAL_CS: f64 = 1.0;

/// Measurement half-angles for the four CHSH settings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChshSettings {
    pub a: f64,
    pub a_prime: f64,
    pub b: f64,
    pub b_prime: f64,
}

impl Default for ChshSettings {
    /// The fixed protocol angles `{a = 0, a' = π/4, b = π/8, b' = −π/8}`.
    fn default() -> Self {
        ChshSettings {
            a: 0.0,
            a_prime: core::f64::consts::FRAC_PI_4,
            b: core::f64::consts::FRAC_PI_8,
            b_prime: -core::f64::consts::FRAC_PI_8,
        }
    }
}

impl ChshSettings {
    pub fn validate(&self) -> Result<()> {
        for v in [self.a, self.a_prime, self.b, self.b_prime] {
            if !v.is_finite() {
                return Err(Error::Argument("settings must be finite".into()));
            }
        }
        Ok(())
    }

    /// The four setting pairs in CHSH order with their signs:
    /// `S = E(a,b) + E(a,b') + E(a',b) − E(a',b')`.
    #[must_use]
    pub fn pairs(&self) -> [(f64, f64, f64); 4] {
        [
            (self.a, self.b, 1.0),
            (self.a, self.b_prime, 1.0),
            (self.a_prime, self.b, 1.0),
            (self.a_prime, self.b_prime, -1.0),
        ]
    }
}

// ---------------------------------------------------------------------------
// State preparations
// ---------------------------------------------------------------------------

/// `|Φ⁺⟩ = (|00⟩ + |11⟩)/√2`.
#[must_use]
pub fn bell_pair_circuit() -> Circuit {
    let mut c = Circuit::new(2, 0);
    c.h(0).cnot(0, 1);
    c
}

/// `|ψ(θ)⟩ = cos θ|00⟩ + sin θ|11⟩` via `Ry(2θ)` on qubit 0 then CNOT.
#[must_use]
pub fn partially_entangled_circuit(theta: f64) -> Circuit {
    let mut c = Circuit::new(2, 0);
    c.ry(0, 2.0 * theta).cnot(0, 1);
    c
}

/// `(|000⟩ + |111⟩)/√2` on three qubits.
#[must_use]
pub fn ghz_circuit() -> Circuit {
    let mut c = Circuit::new(3, 0);
    c.h(0).cnot(0, 1).cnot(0, 2);
    c
}

/// The separable control `|0⟩ ⊗ |+⟩`, whose ZZ and XX correlators vanish.
#[must_use]
pub fn product_control_circuit() -> Circuit {
    let mut c = Circuit::new(2, 0);
    c.h(1);
    c
}

// ---------------------------------------------------------------------------
// Correlators and S
// ---------------------------------------------------------------------------

fn correlator_circuit(prep: &Circuit, alpha: f64, beta: f64) -> Result<Circuit> {
    if prep.num_qubits() != 2 {
        return Err(Error::Argument(format!(
            "correlator requires a 2-qubit preparation, got {} qubits",
            prep.num_qubits()
        )));
    }
    if prep.has_recorded_measurement() {
        return Err(Error::Argument(
            "preparation circuit must not contain recorded measurements".into(),
        ));
    }
    let mut c = Circuit::new(2, 2);
    for op in prep.ops() {
        c.push(op.clone());
    }
    c.ry(0, -2.0 * alpha)
        .ry(1, -2.0 * beta)
        .measure_z(0, 0)
        .measure_z(1, 1);
    Ok(c)
}

fn parity_expectation(bits: &[u8]) -> f64 {
    if bits[0] ^ bits[1] == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Shot-sampled `E(α, β) = ⟨O(α) ⊗ O(β)⟩`.
pub fn measure_correlator(
    prep: &Circuit,
    alpha: f64,
    beta: f64,
    shots: u64,
    seed: u64,
) -> Result<f64> {
    let circuit = correlator_circuit(prep, alpha, beta)?;
    let counts = run_circuit(&circuit, shots, seed)?;
    Ok(counts.mean_over_shots(parity_expectation))
}

/// Born-rule `E(α, β)` via exact probabilities.
pub fn exact_correlator(prep: &Circuit, alpha: f64, beta: f64) -> Result<f64> {
    let circuit = correlator_circuit(prep, alpha, beta)?;
    let probs = exact_probabilities(&circuit)?;
    Ok(probs
        .iter()
        .map(|(key, p)| {
            let bits: Vec<u8> = key.bytes().map(|b| b - b'0').collect();
            parity_expectation(&bits) * p
        })
        .sum())
}

/// Shot-sampled correlator on an already-prepared state (used for states
/// that have no gate decomposition in the toolkit, e.g. Haar-random ones).
pub fn measure_correlator_state(
    state: &StateVector,
    alpha: f64,
    beta: f64,
    shots: u64,
    seed: u64,
) -> Result<f64> {
    if state.num_qubits() != 2 {
        return Err(Error::Argument("correlator requires a 2-qubit state".into()));
    }
    if shots == 0 {
        return Err(Error::Argument("shots must be at least 1".into()));
    }
    let mut acc = 0.0;
    for shot in 0..shots {
        let mut rng = stream(seed, &[labels::SHOT, shot]);
        let mut s = state.clone();
        s.apply(
            &crate::qsim::GateOp::Ry {
                qubit: 0,
                angle: -2.0 * alpha,
            },
            &mut rng,
        )?;
        s.apply(
            &crate::qsim::GateOp::Ry {
                qubit: 1,
                angle: -2.0 * beta,
            },
            &mut rng,
        )?;
        let a = s
            .apply(&crate::qsim::GateOp::MeasureZ { qubit: 0, slot: 0 }, &mut rng)?
            .expect("measurement returns a bit")
            .1;
        let b = s
            .apply(&crate::qsim::GateOp::MeasureZ { qubit: 1, slot: 1 }, &mut rng)?
            .expect("measurement returns a bit")
            .1;
        acc += parity_expectation(&[a, b]);
    }
    Ok(acc / shots as f64)
}

/// Sampled Bell parameter `S`; the four correlator runs use independent
/// substreams of `seed`.
pub fn chsh_s(prep: &Circuit, settings: &ChshSettings, shots: u64, seed: u64) -> Result<f64> {
    settings.validate()?;
    let mut s = 0.0;
    for (k, (alpha, beta, sign)) in settings.pairs().into_iter().enumerate() {
        let sub = derive(seed, &[labels::CORRELATOR, k as u64]);
        s += sign * measure_correlator(prep, alpha, beta, shots, sub)?;
    }
    Ok(s)
}

/// Sampled `S` on an already-prepared 2-qubit state.
pub fn chsh_s_state(
    state: &StateVector,
    settings: &ChshSettings,
    shots: u64,
    seed: u64,
) -> Result<f64> {
    settings.validate()?;
    let mut s = 0.0;
    for (k, (alpha, beta, sign)) in settings.pairs().into_iter().enumerate() {
        let sub = derive(seed, &[labels::CORRELATOR, k as u64]);
        s += sign * measure_correlator_state(state, alpha, beta, shots, sub)?;
    }
    Ok(s)
}

/// Exact Bell parameter `S`.
pub fn exact_chsh_s(prep: &Circuit, settings: &ChshSettings) -> Result<f64> {
    settings.validate()?;
    let mut s = 0.0;
    for (alpha, beta, sign) in settings.pairs() {
        s += sign * exact_correlator(prep, alpha, beta)?;
    }
    Ok(s)
}

/// `CS = |S| / 2`.
#[must_use]
pub fn confounding_strength(s: f64) -> f64 {
    fmath::abs(s) / 2.0
}

// ---------------------------------------------------------------------------
// Confounding Strength estimates over trials
// ---------------------------------------------------------------------------

/// Aggregated Confounding Strength over independent trials.
///
/// `trial_values` holds the per-trial CS. `s_value` carries the mean |S|
/// with the sign of the mean signed S, so `cs = |s_value|/2` holds by
/// construction even when trial-level S values change sign.
#[derive(Clone, Debug, PartialEq)]
pub struct CsEstimate {
    pub cs: f64,
    pub s_value: f64,
    pub stderr: f64,
    pub n_trials: usize,
    pub trial_values: Vec<f64>,
}

impl CsEstimate {
    /// Builds an estimate from per-trial signed S values.
    pub fn from_trial_s(s_values: &[f64]) -> Result<CsEstimate> {
        if s_values.is_empty() {
            return Err(Error::Argument("at least one trial is required".into()));
        }
        let trial_values: Vec<f64> = s_values.iter().map(|&s| confounding_strength(s)).collect();
        let cs = stats::mean(&trial_values);
        if cs > 2.0 + 1e-9 {
            return Err(Error::Numerical(format!(
                "mean CS {cs} exceeds the algebraic maximum of 2"
            )));
        }
        let signed_mean = stats::mean(s_values);
        let s_value = if signed_mean < 0.0 { -2.0 * cs } else { 2.0 * cs };
        Ok(CsEstimate {
            cs,
            s_value,
            stderr: stats::standard_error(&trial_values),
            n_trials: s_values.len(),
            trial_values,
        })
    }

    /// Sample standard deviation of the per-trial CS values.
    #[must_use]
    pub fn std(&self) -> f64 {
        stats::sample_std(&self.trial_values)
    }

    /// t-based 95% confidence interval for the mean CS.
    #[must_use]
    pub fn ci95(&self) -> (f64, f64) {
        let (_, lo, hi) = stats::mean_ci95(&self.trial_values);
        (lo, hi)
    }
}

// ---------------------------------------------------------------------------
// Local hidden variable strategies
// ---------------------------------------------------------------------------

/// A deterministic local response strategy: fixed ±1 answers for
/// `(A(a), A(a'), B(b), B(b'))`, optionally corrupted by independent
/// classical bit flips on each reported outcome.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LhvStrategy {
    pub responses: [i8; 4],
    pub flip_probability: f64,
}

impl LhvStrategy {
    #[must_use]
    pub fn new(responses: [i8; 4], flip_probability: f64) -> Self {
        LhvStrategy {
            responses,
            flip_probability,
        }
    }

    /// Index pairs into `responses` for the CHSH combination, with signs.
    const PAIRS: [(usize, usize, f64); 4] = [
        (0, 2, 1.0),
        (0, 3, 1.0),
        (1, 2, 1.0),
        (1, 3, -1.0),
    ];

    /// Exact S of the noiseless deterministic strategy. Local responses do
    /// not depend on the measurement angles, so neither does S.
    #[must_use]
    pub fn deterministic_s(&self) -> f64 {
        Self::PAIRS
            .iter()
            .map(|&(i, j, sign)| sign * f64::from(self.responses[i] * self.responses[j]))
            .sum()
    }

    /// Shot-sampled S with per-outcome flip noise. Each correlator run uses
    /// its own substream; with `flip_probability = 0` the outcome is exact
    /// and consumes no randomness.
    #[must_use]
    pub fn sampled_s(&self, shots: u64, seed: u64) -> f64 {
        let p = self.flip_probability;
        let mut s = 0.0;
        for (k, &(i, j, sign)) in Self::PAIRS.iter().enumerate() {
            let product = f64::from(self.responses[i] * self.responses[j]);
            let e = if p == 0.0 {
                product
            } else {
                let mut rng = stream(seed, &[labels::CORRELATOR, k as u64]);
                let mut acc = 0.0;
                for _ in 0..shots {
                    let flip_a = rng.gen::<f64>() < p;
                    let flip_b = rng.gen::<f64>() < p;
                    let mut v = product;
                    if flip_a {
                        v = -v;
                    }
                    if flip_b {
                        v = -v;
                    }
                    acc += v;
                }
                acc / shots as f64
            };
            s += sign * e;
        }
        s
    }
}

/// All 16 deterministic response assignments in lexicographic order
/// (−1 before +1, ordered as `(A(a), A(a'), B(b), B(b'))`).
pub fn all_deterministic_responses() -> impl Iterator<Item = [i8; 4]> {
    (0u8..16).map(|m| {
        let mut r = [0i8; 4];
        for (j, slot) in r.iter_mut().enumerate() {
            *slot = if (m >> (3 - j)) & 1 == 1 { 1 } else { -1 };
        }
        r
    })
}

/// The lexicographically first deterministic strategy maximizing S
/// (the maximum is exactly 2), with zero flip noise.
#[must_use]
pub fn optimal_lhv_strategy() -> LhvStrategy {
    let mut best: Option<LhvStrategy> = None;
    for responses in all_deterministic_responses() {
        let candidate = LhvStrategy::new(responses, 0.0);
        match &best {
            Some(b) if b.deterministic_s() >= candidate.deterministic_s() => {}
            _ => best = Some(candidate),
        }
    }
    best.expect("enumeration is nonempty")
}

// ---------------------------------------------------------------------------
// Experiment: confounding hierarchy
// ---------------------------------------------------------------------------

/// The three causal scenarios of the hierarchy experiment.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scenario {
    NoConfounding,
    Classical,
    Quantum,
}

impl Scenario {
    #[must_use]
    pub fn label(&self) -> &'static str {
        match self {
            Scenario::NoConfounding => "no_confounding",
            Scenario::Classical => "classical",
            Scenario::Quantum => "quantum",
        }
    }
}

/// Signed S for one hierarchy trial. Pure in `(scenario, settings, shots,
/// lhv_flip, seed, trial)`, so trials can run in any order or in parallel.
pub fn hierarchy_trial(
    scenario: Scenario,
    settings: &ChshSettings,
    shots: u64,
    lhv_flip: f64,
    seed: u64,
    trial: u64,
) -> Result<f64> {
    match scenario {
        Scenario::Quantum => chsh_s(
            &bell_pair_circuit(),
            settings,
            shots,
            derive(seed, &[labels::HIERARCHY_QUANTUM, trial]),
        ),
        Scenario::Classical => Ok(optimal_lhv_strategy_with_flip(lhv_flip)
            .sampled_s(shots, derive(seed, &[labels::HIERARCHY_CLASSICAL, trial]))),
        Scenario::NoConfounding => {
            // Fresh independent Haar-random single-qubit states each trial,
            // measured with the fixed default settings.
            let mut prep_rng = stream(seed, &[labels::HIERARCHY_NONE_PREP, trial]);
            let mut prep = Circuit::new(2, 0);
            for qubit in 0..2 {
                let polar = fmath::acos(1.0 - 2.0 * prep_rng.gen::<f64>());
                let azimuth = 2.0 * core::f64::consts::PI * prep_rng.gen::<f64>();
                prep.ry(qubit, polar).rz(qubit, azimuth);
            }
            chsh_s(
                &prep,
                settings,
                shots,
                derive(seed, &[labels::HIERARCHY_NONE, trial]),
            )
        }
    }
}

fn optimal_lhv_strategy_with_flip(flip_probability: f64) -> LhvStrategy {
    let mut strategy = optimal_lhv_strategy();
    strategy.flip_probability = flip_probability;
    strategy
}

/// Per-scenario CS estimates for the hierarchy experiment.
#[derive(Clone, Debug)]
pub struct HierarchyResult {
    pub no_confounding: CsEstimate,
    pub classical: CsEstimate,
    pub quantum: CsEstimate,
    pub shots: u64,
    pub trials: u64,
    pub lhv_flip: f64,
}

impl HierarchyResult {
    #[must_use]
    pub fn estimate(&self, scenario: Scenario) -> &CsEstimate {
        match scenario {
            Scenario::NoConfounding => &self.no_confounding,
            Scenario::Classical => &self.classical,
            Scenario::Quantum => &self.quantum,
        }
    }
}

/// Runs all three scenarios sequentially. `lhv_flip = 0` keeps the classical
/// scenario noiseless (CS exactly 1 in every trial); 0.0025 reproduces a
/// classical mean near 0.990.
pub fn run_hierarchy(shots: u64, trials: u64, lhv_flip: f64, seed: u64) -> Result<HierarchyResult> {
    if trials == 0 {
        return Err(Error::Argument("trials must be at least 1".into()));
    }
    let settings = ChshSettings::default();
    let run = |scenario: Scenario| -> Result<CsEstimate> {
        let s_values: Vec<f64> = (0..trials)
            .map(|t| hierarchy_trial(scenario, &settings, shots, lhv_flip, seed, t))
            .collect::<Result<_>>()?;
        CsEstimate::from_trial_s(&s_values)
    };
    Ok(HierarchyResult {
        no_confounding: run(Scenario::NoConfounding)?,
        classical: run(Scenario::Classical)?,
        quantum: run(Scenario::Quantum)?,
        shots,
        trials,
        lhv_flip,
    })
}

// ---------------------------------------------------------------------------
// Experiment: entanglement sweep
// ---------------------------------------------------------------------------

/// One point of the CS(θ) sweep.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepPoint {
    pub theta: f64,
    pub concurrence: f64,
    pub cs_measured: f64,
    pub cs_theory: f64,
}

/// Fit quality of the sweep against theory and against concurrence.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepFit {
    pub r_squared_vs_theory: f64,
    pub pearson_r_vs_concurrence: f64,
    pub slope: f64,
    pub intercept: f64,
}

/// θ of sweep point `k` on the uniform grid over `[0, π/2]`.
#[must_use]
pub fn sweep_theta(k: usize, steps: usize) -> f64 {
    core::f64::consts::FRAC_PI_2 * k as f64 / (steps - 1) as f64
}

/// Protocol prediction `CS(θ) = |(1 + sin 2θ)/√2|` for the fixed settings.
#[must_use]
pub fn cs_theory(theta: f64) -> f64 {
    fmath::abs((1.0 + fmath::sin(2.0 * theta)) / core::f64::consts::SQRT_2)
}

/// One sampled sweep point; pure in `(k, steps, shots, seed)`.
pub fn sweep_point(k: usize, steps: usize, shots: u64, seed: u64) -> Result<SweepPoint> {
    let theta = sweep_theta(k, steps);
    let prep = partially_entangled_circuit(theta);
    let s = chsh_s(
        &prep,
        &ChshSettings::default(),
        shots,
        derive(seed, &[labels::SWEEP_POINT, k as u64]),
    )?;
    Ok(SweepPoint {
        theta,
        concurrence: prep.prepared_state()?.concurrence()?,
        cs_measured: confounding_strength(s),
        cs_theory: cs_theory(theta),
    })
}

/// Fits measured CS against theory (R²) and against concurrence (Pearson r
/// and least squares; the exact law is `CS = C/√2 + 1/√2`).
pub fn fit_sweep(points: &[SweepPoint]) -> Result<SweepFit> {
    let measured: Vec<f64> = points.iter().map(|p| p.cs_measured).collect();
    let theory: Vec<f64> = points.iter().map(|p| p.cs_theory).collect();
    let concurrence: Vec<f64> = points.iter().map(|p| p.concurrence).collect();
    let (slope, intercept) = stats::linear_fit(&concurrence, &measured)?;
    Ok(SweepFit {
        r_squared_vs_theory: stats::r_squared(&measured, &theory)?,
        pearson_r_vs_concurrence: stats::pearson_r(&concurrence, &measured)?,
        slope,
        intercept,
    })
}

/// The full sweep: `theta_steps` uniform points with per-point substreams.
pub fn run_sweep(theta_steps: usize, shots: u64, seed: u64) -> Result<(Vec<SweepPoint>, SweepFit)> {
    if theta_steps < 2 {
        return Err(Error::Argument("theta_steps must be at least 2".into()));
    }
    let points: Vec<SweepPoint> = (0..theta_steps)
        .map(|k| sweep_point(k, theta_steps, shots, seed))
        .collect::<Result<_>>()?;
    let fit = fit_sweep(&points)?;
    Ok((points, fit))
}

/// Exact-oracle CS for the sweep state at `theta` under default settings.
pub fn exact_sweep_cs(theta: f64) -> Result<f64> {
    let s = exact_chsh_s(&partially_entangled_circuit(theta), &ChshSettings::default())?;
    Ok(confounding_strength(s))
}

// ---------------------------------------------------------------------------
// Universality: Mermin, CH, Hardy
// ---------------------------------------------------------------------------

#[derive(Clone, Copy)]
enum MeasBasis {
    X,
    Y,
}

fn three_party_correlator(bases: [MeasBasis; 3], shots: u64, seed: u64) -> Result<f64> {
    let mut c = Circuit::new(3, 3);
    for op in ghz_circuit().ops() {
        c.push(op.clone());
    }
    for (qubit, basis) in bases.iter().enumerate() {
        if let MeasBasis::Y = basis {
            c.rz(qubit, -core::f64::consts::FRAC_PI_2);
        }
        c.h(qubit);
        c.measure_z(qubit, qubit);
    }
    let counts = run_circuit(&c, shots, seed)?;
    Ok(counts.mean_over_shots(|bits| {
        if bits[0] ^ bits[1] ^ bits[2] == 0 {
            1.0
        } else {
            -1.0
        }
    }))
}

/// Sampled Mermin Confounding Strength `|⟨M⟩|/2` on the GHZ state, with
/// `M = XXX − XYY − YXY − YYX`.
pub fn mermin_cs(shots: u64, seed: u64) -> Result<f64> {
    use MeasBasis::{X, Y};
    let terms: [([MeasBasis; 3], f64); 4] = [
        ([X, X, X], 1.0),
        ([X, Y, Y], -1.0),
        ([Y, X, Y], -1.0),
        ([Y, Y, X], -1.0),
    ];
    let mut m = 0.0;
    for (k, (bases, sign)) in terms.into_iter().enumerate() {
        m += sign * three_party_correlator(bases, shots, derive(seed, &[labels::MERMIN, k as u64]))?;
    }
    Ok(fmath::abs(m) / 2.0)
}

/// Exact `⟨M⟩` on the GHZ state via Pauli expectations (equals 4).
pub fn exact_mermin_m() -> Result<f64> {
    let state = ghz_circuit().prepared_state()?;
    let xxx = state.expectation(&[Pauli::X, Pauli::X, Pauli::X])?;
    let xyy = state.expectation(&[Pauli::X, Pauli::Y, Pauli::Y])?;
    let yxy = state.expectation(&[Pauli::Y, Pauli::X, Pauli::Y])?;
    let yyx = state.expectation(&[Pauli::Y, Pauli::Y, Pauli::X])?;
    Ok(xxx - xyy - yxy - yyx)
}

/// Maximum |⟨M⟩| over all 64 deterministic three-party strategies (equals 2).
#[must_use]
pub fn lhv_mermin_max() -> f64 {
    let mut best = 0.0f64;
    for m in 0u8..64 {
        let v: [f64; 6] = core::array::from_fn(|j| if (m >> j) & 1 == 1 { 1.0 } else { -1.0 });
        // v = [ax, ay, bx, by, cx, cy]
        let value = v[0] * v[2] * v[4] - v[0] * v[3] * v[5] - v[1] * v[2] * v[5] - v[1] * v[3] * v[4];
        best = best.max(fmath::abs(value));
    }
    best
}

/// Joint outcome probabilities at one setting pair, indexed by
/// `[outcome_a][outcome_b]` where outcome 1 is the +1 eigenvalue of `O(φ)`
/// (post-rotation bit 0).
fn sampled_outcome_probs(
    prep: &Circuit,
    x: f64,
    y: f64,
    shots: u64,
    seed: u64,
) -> Result<[[f64; 2]; 2]> {
    let circuit = correlator_circuit(prep, x, y)?;
    let counts = run_circuit(&circuit, shots, seed)?;
    let mut probs = [[0.0f64; 2]; 2];
    for (key, &count) in counts.table() {
        let bits: Vec<u8> = key.bytes().map(|b| b - b'0').collect();
        let oa = usize::from(bits[0] == 0);
        let ob = usize::from(bits[1] == 0);
        probs[oa][ob] += count as f64 / counts.total_shots() as f64;
    }
    Ok(probs)
}

fn exact_outcome_probs(prep: &Circuit, x: f64, y: f64) -> Result<[[f64; 2]; 2]> {
    let circuit = correlator_circuit(prep, x, y)?;
    let mut probs = [[0.0f64; 2]; 2];
    for (key, p) in exact_probabilities(&circuit)? {
        let bits: Vec<u8> = key.bytes().map(|b| b - b'0').collect();
        let oa = usize::from(bits[0] == 0);
        let ob = usize::from(bits[1] == 0);
        probs[oa][ob] += p;
    }
    Ok(probs)
}

/// Sampled Clauser–Horne value
/// `CH = P₁₁(a,b) + P₁₁(a,b') + P₁₁(a',b) − P₁₁(a',b') − P₁(a) − P₁(b)`,
/// with the marginals taken from the `(a, b)` run.
pub fn ch_value(prep: &Circuit, settings: &ChshSettings, shots: u64, seed: u64) -> Result<f64> {
    settings.validate()?;
    let run = |k: u64, x: f64, y: f64| -> Result<[[f64; 2]; 2]> {
        sampled_outcome_probs(prep, x, y, shots, derive(seed, &[labels::CH, k]))
    };
    let ab = run(0, settings.a, settings.b)?;
    let abp = run(1, settings.a, settings.b_prime)?;
    let apb = run(2, settings.a_prime, settings.b)?;
    let apbp = run(3, settings.a_prime, settings.b_prime)?;
    let p1_a = ab[1][0] + ab[1][1];
    let p1_b = ab[0][1] + ab[1][1];
    Ok(ab[1][1] + abp[1][1] + apb[1][1] - apbp[1][1] - p1_a - p1_b)
}

/// Exact CH value via the Born-rule oracle.
pub fn exact_ch(prep: &Circuit, settings: &ChshSettings) -> Result<f64> {
    settings.validate()?;
    let ab = exact_outcome_probs(prep, settings.a, settings.b)?;
    let abp = exact_outcome_probs(prep, settings.a, settings.b_prime)?;
    let apb = exact_outcome_probs(prep, settings.a_prime, settings.b)?;
    let apbp = exact_outcome_probs(prep, settings.a_prime, settings.b_prime)?;
    let p1_a = ab[1][0] + ab[1][1];
    let p1_b = ab[0][1] + ab[1][1];
    Ok(ab[1][1] + abp[1][1] + apb[1][1] - apbp[1][1] - p1_a - p1_b)
}

/// CH value of a deterministic strategy (outcome 1 ⇔ response +1).
#[must_use]
pub fn lhv_ch(responses: [i8; 4]) -> f64 {
    let ind = |r: i8| if r == 1 { 1.0 } else { 0.0 };
    let (a, ap, b, bp) = (
        ind(responses[0]),
        ind(responses[1]),
        ind(responses[2]),
        ind(responses[3]),
    );
    a * b + a * bp + ap * b - ap * bp - a - b
}

/// Maximum CH over all 16 deterministic strategies (equals 0).
#[must_use]
pub fn lhv_ch_max() -> f64 {
    all_deterministic_responses()
        .map(lhv_ch)
        .fold(f64::NEG_INFINITY, f64::max)
}

// ---------------------------------------------------------------------------
// Hardy configuration
// ---------------------------------------------------------------------------

/// State angle of the built-in Hardy configuration:
/// `|ψ⟩ = cos θ|00⟩ + sin θ|11⟩`.
///
/// The constants below maximize the forbidden-outcome probability subject to
/// the three Hardy premise constraints, found by the grid + coordinate
/// refinement search kept in `tests/hardy_oracle.rs`. The optimum value is
/// `(5√5 − 11)/2 ≈ 0.0902`.
pub const HARDY_STATE_THETA: f64 = 2.005_488_670_525_990_9;

/// Built-in Hardy measurement half-angles (symmetric across parties).
pub const HARDY_SETTINGS: ChshSettings = ChshSettings {
    a: -0.306_420_194_895_389_3,
    a_prime: 0.598_136_699_406_991_99,
    b: -0.306_420_194_895_389_3,
    b_prime: 0.598_136_699_406_991_99,
};

/// Forbidden-outcome probability at the analytic Hardy optimum.
pub const HARDY_P_IMP_OPTIMUM: f64 = 0.090_169_943_749_474_51;

/// Circuit preparing the built-in Hardy state.
#[must_use]
pub fn hardy_state_circuit() -> Circuit {
    partially_entangled_circuit(HARDY_STATE_THETA)
}

fn hardy_excess_from(
    p_ab: [[f64; 2]; 2],
    p_abp: [[f64; 2]; 2],
    p_apb: [[f64; 2]; 2],
    p_apbp: [[f64; 2]; 2],
) -> f64 {
    // P₁₁(a,b) − P₁₀(a,b') − P₀₁(a',b) − P₁₁(a',b'); nonpositive for every
    // local model, so the clamped value is the classically forbidden excess.
    let excess = p_ab[1][1] - p_abp[1][0] - p_apb[0][1] - p_apbp[1][1];
    excess.max(0.0)
}

/// Sampled Hardy violation for an arbitrary preparation and settings:
/// the probability of the `(1,1)` outcome at `(a, b)` in excess of the three
/// premise probabilities. Zero (after clamping) for every separable state.
pub fn hardy_excess(
    prep: &Circuit,
    settings: &ChshSettings,
    shots: u64,
    seed: u64,
) -> Result<f64> {
    settings.validate()?;
    let run = |k: u64, x: f64, y: f64| -> Result<[[f64; 2]; 2]> {
        sampled_outcome_probs(prep, x, y, shots, derive(seed, &[labels::HARDY, k]))
    };
    Ok(hardy_excess_from(
        run(0, settings.a, settings.b)?,
        run(1, settings.a, settings.b_prime)?,
        run(2, settings.a_prime, settings.b)?,
        run(3, settings.a_prime, settings.b_prime)?,
    ))
}

/// Exact Hardy violation via the Born-rule oracle.
pub fn exact_hardy_excess(prep: &Circuit, settings: &ChshSettings) -> Result<f64> {
    settings.validate()?;
    Ok(hardy_excess_from(
        exact_outcome_probs(prep, settings.a, settings.b)?,
        exact_outcome_probs(prep, settings.a, settings.b_prime)?,
        exact_outcome_probs(prep, settings.a_prime, settings.b)?,
        exact_outcome_probs(prep, settings.a_prime, settings.b_prime)?,
    ))
}

/// Sampled probability of the classically forbidden Hardy outcome on the
/// built-in configuration (the premise terms vanish there, so the excess is
/// the forbidden-outcome probability itself, ≈ 0.090).
pub fn hardy_p_imp(shots: u64, seed: u64) -> Result<f64> {
    hardy_excess(&hardy_state_circuit(), &HARDY_SETTINGS, shots, seed)
}

#[cfg(test)]
mod tests;
