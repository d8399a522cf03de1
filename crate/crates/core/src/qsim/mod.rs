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

//! Dense statevector simulation for 1–8 qubits.
//!
//! Two evaluation paths are provided for every circuit:
//!
//! - [`run_circuit`] samples shot by shot; mid-circuit measurements,
//!   resets, and non-selective measurements are handled by trajectory
//!   sampling, with one RNG substream per shot.
//! - [`exact_probabilities`] propagates a density matrix through the same
//!   circuit, treating resets and non-selective measurements as exact
//!   channels. It is the shot-free oracle the sampled experiments are
//!   checked against.
//!
//! Basis indices are little-endian: qubit 0 is the least significant bit.
//! Classical bitstrings list register slot 0 first.

mod density;

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::{format, vec, vec::Vec};
use core::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::Rng;

use crate::{fmath, rng, Error, Result};

pub use density::{exact_probabilities, DensityMatrix};

/// Largest register size the dense simulator accepts.
pub const MAX_QUBITS: usize = 8;

/// Tolerance on `Σ|amplitude|² = 1` enforced after every gate.
pub const NORM_TOLERANCE: f64 = 1e-10;

/// Norm drift above which a state is renormalized in place.
const RENORM_TRIGGER: f64 = 1e-12;

/// Single-qubit Pauli operators, used to build tensor-product observables.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

/// One circuit operation.
///
/// `MeasureZ` collapses the state and records the outcome bit in a classical
/// register slot. `Reset` measures, discards the bit, and flips the qubit to
/// `|0⟩` if needed. `NonSelectiveZ` measures and discards the outcome, which
/// realises the Z-dephasing channel one trajectory at a time.
#[derive(Clone, Debug, PartialEq)]
pub enum GateOp {
    H(usize),
    X(usize),
    Z(usize),
    Ry { qubit: usize, angle: f64 },
    Rz { qubit: usize, angle: f64 },
    Cnot { control: usize, target: usize },
    MeasureZ { qubit: usize, slot: usize },
    Reset(usize),
    NonSelectiveZ(usize),
}

impl GateOp {
    /// True for operations that consume randomness when sampled.
    #[must_use]
    pub fn is_sampling(&self) -> bool {
        matches!(
            self,
            GateOp::MeasureZ { .. } | GateOp::Reset(_) | GateOp::NonSelectiveZ(_)
        )
    }

    fn validate(&self, num_qubits: usize, num_slots: usize) -> Result<()> {
        let check = |q: usize| -> Result<()> {
            if q >= num_qubits {
                Err(Error::Config(format!(
                    "qubit index {q} out of range for {num_qubits}-qubit circuit"
                )))
            } else {
                Ok(())
            }
        };
        match *self {
            GateOp::H(q) | GateOp::X(q) | GateOp::Z(q) => check(q),
            GateOp::Ry { qubit, .. } | GateOp::Rz { qubit, .. } => check(qubit),
            GateOp::Cnot { control, target } => {
                check(control)?;
                check(target)?;
                if control == target {
                    return Err(Error::Config(format!(
                        "cnot control and target both {control}"
                    )));
                }
                Ok(())
            }
            GateOp::MeasureZ { qubit, slot } => {
                check(qubit)?;
                if slot >= num_slots {
                    return Err(Error::Config(format!(
                        "classical slot {slot} out of range for {num_slots} slots"
                    )));
                }
                Ok(())
            }
            GateOp::Reset(q) | GateOp::NonSelectiveZ(q) => check(q),
        }
    }
}

/// An ordered gate/measurement program on a fixed register.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    num_qubits: usize,
    num_classical_slots: usize,
    ops: Vec<GateOp>,
}

impl Circuit {
    #[must_use]
    pub fn new(num_qubits: usize, num_classical_slots: usize) -> Self {
        Circuit {
            num_qubits,
            num_classical_slots,
            ops: Vec::new(),
        }
    }

    #[must_use]
    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    #[must_use]
    pub fn num_classical_slots(&self) -> usize {
        self.num_classical_slots
    }

    #[must_use]
    pub fn ops(&self) -> &[GateOp] {
        &self.ops
    }

    pub fn push(&mut self, op: GateOp) -> &mut Self {
        self.ops.push(op);
        self
    }

    pub fn h(&mut self, qubit: usize) -> &mut Self {
        self.push(GateOp::H(qubit))
    }

    pub fn x(&mut self, qubit: usize) -> &mut Self {
        self.push(GateOp::X(qubit))
    }

    pub fn z(&mut self, qubit: usize) -> &mut Self {
        self.push(GateOp::Z(qubit))
    }

    pub fn ry(&mut self, qubit: usize, angle: f64) -> &mut Self {
        self.push(GateOp::Ry { qubit, angle })
    }

    pub fn rz(&mut self, qubit: usize, angle: f64) -> &mut Self {
        self.push(GateOp::Rz { qubit, angle })
    }

    pub fn cnot(&mut self, control: usize, target: usize) -> &mut Self {
        self.push(GateOp::Cnot { control, target })
    }

    pub fn measure_z(&mut self, qubit: usize, slot: usize) -> &mut Self {
        self.push(GateOp::MeasureZ { qubit, slot })
    }

    pub fn reset(&mut self, qubit: usize) -> &mut Self {
        self.push(GateOp::Reset(qubit))
    }

    pub fn nonselective_z(&mut self, qubit: usize) -> &mut Self {
        self.push(GateOp::NonSelectiveZ(qubit))
    }

    /// Checks qubit/slot ranges, `control != target`, and that each classical
    /// slot is written at most once.
    pub fn validate(&self) -> Result<()> {
        if self.num_qubits == 0 || self.num_qubits > MAX_QUBITS {
            return Err(Error::Config(format!(
                "circuit must have between 1 and {MAX_QUBITS} qubits, got {}",
                self.num_qubits
            )));
        }
        let mut used_slots = vec![false; self.num_classical_slots];
        for op in &self.ops {
            op.validate(self.num_qubits, self.num_classical_slots)?;
            if let GateOp::MeasureZ { slot, .. } = *op {
                if used_slots[slot] {
                    return Err(Error::Config(format!(
                        "classical slot {slot} written more than once"
                    )));
                }
                used_slots[slot] = true;
            }
        }
        Ok(())
    }

    /// True when the circuit contains no measurement, reset, or dephasing op.
    #[must_use]
    pub fn is_unitary(&self) -> bool {
        self.ops.iter().all(|op| !op.is_sampling())
    }

    #[must_use]
    pub fn has_recorded_measurement(&self) -> bool {
        self.ops
            .iter()
            .any(|op| matches!(op, GateOp::MeasureZ { .. }))
    }

    /// Runs a unitary-only circuit once and returns the final state.
    pub fn prepared_state(&self) -> Result<StateVector> {
        self.validate()?;
        if !self.is_unitary() {
            return Err(Error::Config(
                "prepared_state requires a unitary-only circuit".into(),
            ));
        }
        let mut state = StateVector::new(self.num_qubits)?;
        // Unitary ops never touch the RNG; any stream works here.
        let mut rng = rng::stream(0, &[]);
        for op in &self.ops {
            state.apply(op, &mut rng)?;
        }
        Ok(state)
    }
}

/// Complex amplitudes of an n-qubit pure state.
#[derive(Clone, Debug)]
pub struct StateVector {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// `|0...0⟩` on `num_qubits` qubits.
    pub fn new(num_qubits: usize) -> Result<Self> {
        if num_qubits == 0 || num_qubits > MAX_QUBITS {
            return Err(Error::Config(format!(
                "state must have between 1 and {MAX_QUBITS} qubits, got {num_qubits}"
            )));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        Ok(StateVector {
            num_qubits,
            amplitudes,
        })
    }

    /// Builds a state from explicit amplitudes (length must be a power of
    /// two, norm must be 1 within [`NORM_TOLERANCE`]).
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() || len > (1 << MAX_QUBITS) {
            return Err(Error::Config(format!(
                "amplitude vector length {len} is not a supported power of two"
            )));
        }
        let num_qubits = len.trailing_zeros() as usize;
        let state = StateVector {
            num_qubits,
            amplitudes,
        };
        if fmath::abs(state.norm_sqr() - 1.0) > NORM_TOLERANCE {
            return Err(Error::Numerical(format!(
                "state norm² = {} is not 1 within {NORM_TOLERANCE}",
                state.norm_sqr()
            )));
        }
        Ok(state)
    }

    #[must_use]
    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    #[must_use]
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    #[must_use]
    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(Complex64::norm_sqr).sum()
    }

    /// Applies one operation. For `MeasureZ` the recorded `(slot, bit)` pair
    /// is returned; `Reset` and `NonSelectiveZ` sample and discard. Gates may
    /// follow measurements freely: measurement collapses the state, it does
    /// not consume the qubit.
    pub fn apply<R: Rng>(&mut self, op: &GateOp, rng: &mut R) -> Result<Option<(usize, u8)>> {
        op.validate(self.num_qubits, usize::MAX)?;
        match *op {
            GateOp::H(q) => {
                let h = FRAC_1_SQRT_2;
                self.apply_single(q, [[c(h), c(h)], [c(h), c(-h)]]);
            }
            GateOp::X(q) => {
                self.apply_single(q, [[c(0.0), c(1.0)], [c(1.0), c(0.0)]]);
            }
            GateOp::Z(q) => {
                self.apply_single(q, [[c(1.0), c(0.0)], [c(0.0), c(-1.0)]]);
            }
            GateOp::Ry { qubit, angle } => {
                let (s, co) = (fmath::sin(angle / 2.0), fmath::cos(angle / 2.0));
                self.apply_single(qubit, [[c(co), c(-s)], [c(s), c(co)]]);
            }
            GateOp::Rz { qubit, angle } => {
                let half = angle / 2.0;
                let lo = Complex64::new(fmath::cos(half), -fmath::sin(half));
                let hi = Complex64::new(fmath::cos(half), fmath::sin(half));
                self.apply_single(qubit, [[lo, c(0.0)], [c(0.0), hi]]);
            }
            GateOp::Cnot { control, target } => self.apply_cnot(control, target),
            GateOp::MeasureZ { qubit, slot } => {
                let bit = self.measure(qubit, rng);
                return Ok(Some((slot, bit)));
            }
            GateOp::Reset(q) => {
                if self.measure(q, rng) == 1 {
                    self.apply_single(q, [[c(0.0), c(1.0)], [c(1.0), c(0.0)]]);
                }
            }
            GateOp::NonSelectiveZ(q) => {
                self.measure(q, rng);
            }
        }
        self.renormalize_if_drifted();
        Ok(None)
    }

    fn apply_single(&mut self, qubit: usize, u: [[Complex64; 2]; 2]) {
        let mask = 1usize << qubit;
        for base in 0..self.amplitudes.len() {
            if base & mask != 0 {
                continue;
            }
            let hi = base | mask;
            let a0 = self.amplitudes[base];
            let a1 = self.amplitudes[hi];
            self.amplitudes[base] = u[0][0] * a0 + u[0][1] * a1;
            self.amplitudes[hi] = u[1][0] * a0 + u[1][1] * a1;
        }
    }

    fn apply_cnot(&mut self, control: usize, target: usize) {
        let cmask = 1usize << control;
        let tmask = 1usize << target;
        for base in 0..self.amplitudes.len() {
            if base & cmask != 0 && base & tmask == 0 {
                self.amplitudes.swap(base, base | tmask);
            }
        }
    }

    fn prob_zero(&self, qubit: usize) -> f64 {
        let mask = 1usize << qubit;
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(i, _)| i & mask == 0)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    fn measure<R: Rng>(&mut self, qubit: usize, rng: &mut R) -> u8 {
        let p0 = self.prob_zero(qubit);
        let u: f64 = rng.gen();
        let (bit, p) = if u < p0 { (0u8, p0) } else { (1u8, 1.0 - p0) };
        let mask = 1usize << qubit;
        let keep = if bit == 0 { 0 } else { mask };
        let scale = 1.0 / fmath::sqrt(p);
        for (i, a) in self.amplitudes.iter_mut().enumerate() {
            if i & mask == keep {
                *a *= scale;
            } else {
                *a = Complex64::new(0.0, 0.0);
            }
        }
        bit
    }

    fn renormalize_if_drifted(&mut self) {
        let n = self.norm_sqr();
        if fmath::abs(n - 1.0) > RENORM_TRIGGER {
            let scale = 1.0 / fmath::sqrt(n);
            for a in &mut self.amplitudes {
                *a *= scale;
            }
        }
    }

    /// `⟨ψ|O|ψ⟩` for a tensor product of Paulis, one per qubit.
    pub fn expectation(&self, paulis: &[Pauli]) -> Result<f64> {
        if paulis.len() != self.num_qubits {
            return Err(Error::Argument(format!(
                "observable has {} factors but the state has {} qubits",
                paulis.len(),
                self.num_qubits
            )));
        }
        let mut transformed = self.amplitudes.clone();
        for (qubit, pauli) in paulis.iter().enumerate() {
            let mask = 1usize << qubit;
            match pauli {
                Pauli::I => {}
                Pauli::X => {
                    for base in 0..transformed.len() {
                        if base & mask == 0 {
                            transformed.swap(base, base | mask);
                        }
                    }
                }
                Pauli::Y => {
                    let i = Complex64::new(0.0, 1.0);
                    for base in 0..transformed.len() {
                        if base & mask == 0 {
                            let hi = base | mask;
                            let a0 = transformed[base];
                            let a1 = transformed[hi];
                            transformed[base] = -i * a1;
                            transformed[hi] = i * a0;
                        }
                    }
                }
                Pauli::Z => {
                    for (idx, a) in transformed.iter_mut().enumerate() {
                        if idx & mask != 0 {
                            *a = -*a;
                        }
                    }
                }
            }
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&transformed)
            .map(|(a, b)| (a.conj() * b).re)
            .sum())
    }

    /// Two-qubit pure-state concurrence `2|a₀₀a₁₁ − a₀₁a₁₀|`.
    pub fn concurrence(&self) -> Result<f64> {
        if self.num_qubits != 2 {
            return Err(Error::Argument(format!(
                "concurrence is defined for 2 qubits, got {}",
                self.num_qubits
            )));
        }
        let a = &self.amplitudes;
        Ok(2.0 * (a[0] * a[3] - a[1] * a[2]).norm())
    }

    /// Partial trace over every qubit not in `keep_qubits`. Bit `k` of the
    /// reduced index corresponds to `keep_qubits[k]`.
    pub fn reduced_density_matrix(&self, keep_qubits: &[usize]) -> Result<DensityMatrix> {
        if keep_qubits.is_empty() {
            return Err(Error::Argument("keep set must be nonempty".into()));
        }
        for (pos, &q) in keep_qubits.iter().enumerate() {
            if q >= self.num_qubits {
                return Err(Error::Argument(format!(
                    "keep qubit {q} out of range for {}-qubit state",
                    self.num_qubits
                )));
            }
            if keep_qubits[..pos].contains(&q) {
                return Err(Error::Argument(format!("keep qubit {q} listed twice")));
            }
        }
        let keep_mask: usize = keep_qubits.iter().map(|&q| 1usize << q).sum();
        let env_mask = ((1usize << self.num_qubits) - 1) & !keep_mask;
        let dim = 1usize << keep_qubits.len();
        let gather = |full: usize| -> usize {
            keep_qubits
                .iter()
                .enumerate()
                .map(|(pos, &q)| ((full >> q) & 1) << pos)
                .sum()
        };
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        let n = self.amplitudes.len();
        for x in 0..n {
            for y in 0..n {
                if x & env_mask != y & env_mask {
                    continue;
                }
                let i = gather(x);
                let j = gather(y);
                entries[i * dim + j] += self.amplitudes[x] * self.amplitudes[y].conj();
            }
        }
        DensityMatrix::from_entries(dim, entries)
    }
}

#[inline]
fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Shot-sampled measurement results keyed by classical bitstring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counts {
    total_shots: u64,
    table: BTreeMap<String, u64>,
}

impl Counts {
    #[must_use]
    pub fn total_shots(&self) -> u64 {
        self.total_shots
    }

    #[must_use]
    pub fn table(&self) -> &BTreeMap<String, u64> {
        &self.table
    }

    #[must_use]
    pub fn get(&self, key: &str) -> u64 {
        self.table.get(key).copied().unwrap_or(0)
    }

    #[must_use]
    pub fn frequency(&self, key: &str) -> f64 {
        self.get(key) as f64 / self.total_shots as f64
    }

    /// Average of `f` over shots, weighted by counts. `f` receives the bits
    /// of each observed key (slot 0 first).
    pub fn mean_over_shots<F: Fn(&[u8]) -> f64>(&self, f: F) -> f64 {
        let mut acc = 0.0;
        for (key, &count) in &self.table {
            let bits: Vec<u8> = key.bytes().map(|b| b - b'0').collect();
            acc += f(&bits) * count as f64;
        }
        acc / self.total_shots as f64
    }

    /// Serializes as `{"shots": N, "counts": {"bitstring": n, ...}}` with
    /// keys in sorted order.
    #[must_use]
    pub fn to_json(&self) -> String {
        let mut out = format!("{{\"shots\": {}, \"counts\": {{", self.total_shots);
        for (idx, (key, count)) in self.table.iter().enumerate() {
            if idx > 0 {
                out.push_str(", ");
            }
            out.push_str(&format!("\"{key}\": {count}"));
        }
        out.push_str("}}");
        out
    }
}

/// Runs `circuit` for `shots` trajectories. Shot `i` draws from the
/// substream `(seed, [SHOT, i])`, so results are independent of scheduling
/// and identical across runs for the same `(circuit, shots, seed)`.
pub fn run_circuit(circuit: &Circuit, shots: u64, seed: u64) -> Result<Counts> {
    circuit.validate()?;
    if shots == 0 {
        return Err(Error::Argument("shots must be at least 1".into()));
    }
    let mut table: BTreeMap<String, u64> = BTreeMap::new();
    for shot in 0..shots {
        let mut state = StateVector::new(circuit.num_qubits())?;
        let mut rng = rng::stream(seed, &[rng::labels::SHOT, shot]);
        let mut bits = vec![0u8; circuit.num_classical_slots()];
        for op in circuit.ops() {
            if let Some((slot, bit)) = state.apply(op, &mut rng)? {
                bits[slot] = bit;
            }
        }
        let key: String = bits.iter().map(|b| char::from(b'0' + b)).collect();
        *table.entry(key).or_insert(0) += 1;
    }
    Ok(Counts {
        total_shots: shots,
        table,
    })
}
