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

//! Density matrices, quantum-information measures, and exact circuit
//! evaluation by channel propagation.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::{format, vec, vec::Vec};

use num_complex::Complex64;

use crate::qsim::{Circuit, GateOp, StateVector};
use crate::{fmath, Error, Result};

/// Hermiticity / trace tolerance for density-matrix validity checks.
pub const HERMITICITY_TOLERANCE: f64 = 1e-10;

/// Eigenvalues may undershoot zero by at most this much.
pub const PSD_TOLERANCE: f64 = 1e-9;

/// Weight below which a measurement branch is dropped during exact
/// propagation.
const BRANCH_PRUNE: f64 = 1e-15;

/// A `dim × dim` complex matrix intended to represent a quantum state.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl DensityMatrix {
    /// Builds a matrix from row-major entries and checks the basic state
    /// invariants (Hermitian, unit trace).
    pub fn from_entries(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 || entries.len() != dim * dim {
            return Err(Error::Argument(format!(
                "expected {dim}×{dim} entries, got {}",
                entries.len()
            )));
        }
        let rho = DensityMatrix { dim, entries };
        rho.validate_basic()?;
        Ok(rho)
    }

    /// `|ψ⟩⟨ψ|` of a pure state.
    #[must_use]
    pub fn from_state(state: &StateVector) -> Self {
        let amps = state.amplitudes();
        let dim = amps.len();
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                entries[i * dim + j] = amps[i] * amps[j].conj();
            }
        }
        DensityMatrix { dim, entries }
    }

    fn ground(num_qubits: usize) -> Self {
        let dim = 1usize << num_qubits;
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        entries[0] = Complex64::new(1.0, 0.0);
        DensityMatrix { dim, entries }
    }

    #[must_use]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[must_use]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    #[must_use]
    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Hermiticity and unit trace within [`HERMITICITY_TOLERANCE`].
    pub fn validate_basic(&self) -> Result<()> {
        for i in 0..self.dim {
            for j in i..self.dim {
                let delta = (self.get(i, j) - self.get(j, i).conj()).norm();
                if delta > HERMITICITY_TOLERANCE {
                    return Err(Error::Numerical(format!(
                        "matrix is not Hermitian: |ρ[{i},{j}] − ρ[{j},{i}]*| = {delta:e}"
                    )));
                }
            }
        }
        let tr = self.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > HERMITICITY_TOLERANCE {
            return Err(Error::Numerical(format!(
                "trace = {tr} is not 1 within {HERMITICITY_TOLERANCE}"
            )));
        }
        Ok(())
    }

    /// Full state validity: Hermitian, unit trace, and eigenvalues above
    /// `−`[`PSD_TOLERANCE`].
    pub fn validate(&self) -> Result<()> {
        self.validate_basic()?;
        let eigs = self.eigenvalues();
        if let Some(&min) = eigs.first() {
            if min < -PSD_TOLERANCE {
                return Err(Error::Numerical(format!(
                    "matrix is not positive semidefinite: λ_min = {min:e}"
                )));
            }
        }
        Ok(())
    }

    /// `Tr(ρ²)`, in `[1/dim, 1]` for a valid state.
    pub fn purity(&self) -> Result<f64> {
        self.validate_basic()?;
        Ok(self.entries.iter().map(Complex64::norm_sqr).sum())
    }

    /// Von Neumann entropy in bits, with eigenvalues clipped to `[0, 1]`
    /// and `0·log 0 = 0`.
    pub fn von_neumann_entropy(&self) -> Result<f64> {
        self.validate_basic()?;
        let mut entropy = 0.0;
        for lambda in self.eigenvalues() {
            let l = lambda.clamp(0.0, 1.0);
            if l > 0.0 {
                entropy -= l * fmath::log2(l);
            }
        }
        Ok(entropy)
    }

    /// Eigenvalues in ascending order, via Jacobi rotations on the real
    /// symmetric embedding `[[Re ρ, −Im ρ], [Im ρ, Re ρ]]` (each eigenvalue
    /// of ρ appears twice in the embedding).
    #[must_use]
    pub fn eigenvalues(&self) -> Vec<f64> {
        let d = self.dim;
        let n = 2 * d;
        let mut m = vec![0.0f64; n * n];
        for i in 0..d {
            for j in 0..d {
                let z = self.get(i, j);
                m[i * n + j] = z.re;
                m[i * n + (j + d)] = -z.im;
                m[(i + d) * n + j] = z.im;
                m[(i + d) * n + (j + d)] = z.re;
            }
        }
        jacobi_symmetric_eigenvalues(&mut m, n)
            .into_iter()
            .step_by(2)
            .collect()
    }

    /// In-place unitary gate application `ρ → UρU†`. Measurement-like ops
    /// are rejected; they are channels, not unitaries.
    pub fn apply_unitary(&mut self, op: &GateOp) -> Result<()> {
        let num_qubits = self.dim.trailing_zeros() as usize;
        match *op {
            GateOp::H(q) => {
                let h = core::f64::consts::FRAC_1_SQRT_2;
                self.conjugate_single(q, [[cx(h, 0.0), cx(h, 0.0)], [cx(h, 0.0), cx(-h, 0.0)]]);
            }
            GateOp::X(q) => {
                self.conjugate_single(
                    q,
                    [[cx(0.0, 0.0), cx(1.0, 0.0)], [cx(1.0, 0.0), cx(0.0, 0.0)]],
                );
            }
            GateOp::Z(q) => {
                self.conjugate_single(
                    q,
                    [[cx(1.0, 0.0), cx(0.0, 0.0)], [cx(0.0, 0.0), cx(-1.0, 0.0)]],
                );
            }
            GateOp::Ry { qubit, angle } => {
                let (s, co) = (fmath::sin(angle / 2.0), fmath::cos(angle / 2.0));
                self.conjugate_single(
                    qubit,
                    [[cx(co, 0.0), cx(-s, 0.0)], [cx(s, 0.0), cx(co, 0.0)]],
                );
            }
            GateOp::Rz { qubit, angle } => {
                let half = angle / 2.0;
                self.conjugate_single(
                    qubit,
                    [
                        [cx(fmath::cos(half), -fmath::sin(half)), cx(0.0, 0.0)],
                        [cx(0.0, 0.0), cx(fmath::cos(half), fmath::sin(half))],
                    ],
                );
            }
            GateOp::Cnot { control, target } => {
                if control >= num_qubits || target >= num_qubits {
                    return Err(Error::Config("cnot index out of range".into()));
                }
                self.permute_cnot(control, target);
            }
            GateOp::MeasureZ { .. } | GateOp::Reset(_) | GateOp::NonSelectiveZ(_) => {
                return Err(Error::Config(
                    "measurement-like op passed to apply_unitary".into(),
                ));
            }
        }
        Ok(())
    }

    /// The Z-dephasing channel on one qubit:
    /// `ρ → P₀ρP₀ + P₁ρP₁`, i.e. zero every element whose row and column
    /// disagree on the qubit's bit.
    pub fn dephase(&mut self, qubit: usize) {
        let mask = 1usize << qubit;
        for i in 0..self.dim {
            for j in 0..self.dim {
                if (i & mask) != (j & mask) {
                    self.entries[i * self.dim + j] = Complex64::new(0.0, 0.0);
                }
            }
        }
    }

    /// The reset channel `ρ → P₀ρP₀ + X P₁ρP₁ X` on one qubit.
    pub fn reset(&mut self, qubit: usize) {
        let mask = 1usize << qubit;
        let dim = self.dim;
        let mut next = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            if i & mask != 0 {
                continue;
            }
            for j in 0..dim {
                if j & mask != 0 {
                    continue;
                }
                next[i * dim + j] =
                    self.entries[i * dim + j] + self.entries[(i | mask) * dim + (j | mask)];
            }
        }
        self.entries = next;
    }

    /// Unnormalized projection onto outcome `bit` of a Z measurement.
    /// The trace of the result is the outcome probability.
    #[must_use]
    pub fn project(&self, qubit: usize, bit: u8) -> DensityMatrix {
        let mask = 1usize << qubit;
        let want = if bit == 0 { 0 } else { mask };
        let dim = self.dim;
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            if i & mask != want {
                continue;
            }
            for j in 0..dim {
                if j & mask == want {
                    entries[i * dim + j] = self.entries[i * dim + j];
                }
            }
        }
        DensityMatrix { dim, entries }
    }

    fn conjugate_single(&mut self, qubit: usize, u: [[Complex64; 2]; 2]) {
        let mask = 1usize << qubit;
        let dim = self.dim;
        // ρ → Uρ (rows) …
        for col in 0..dim {
            for row in 0..dim {
                if row & mask != 0 {
                    continue;
                }
                let hi = row | mask;
                let a0 = self.entries[row * dim + col];
                let a1 = self.entries[hi * dim + col];
                self.entries[row * dim + col] = u[0][0] * a0 + u[0][1] * a1;
                self.entries[hi * dim + col] = u[1][0] * a0 + u[1][1] * a1;
            }
        }
        // … then (Uρ) → (Uρ)U† (columns, with the elementwise conjugate).
        for row in 0..dim {
            for col in 0..dim {
                if col & mask != 0 {
                    continue;
                }
                let hi = col | mask;
                let a0 = self.entries[row * dim + col];
                let a1 = self.entries[row * dim + hi];
                self.entries[row * dim + col] = u[0][0].conj() * a0 + u[0][1].conj() * a1;
                self.entries[row * dim + hi] = u[1][0].conj() * a0 + u[1][1].conj() * a1;
            }
        }
    }

    fn permute_cnot(&mut self, control: usize, target: usize) {
        let cmask = 1usize << control;
        let tmask = 1usize << target;
        let dim = self.dim;
        let flip = |i: usize| if i & cmask != 0 { i ^ tmask } else { i };
        let mut next = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                next[flip(i) * dim + flip(j)] = self.entries[i * dim + j];
            }
        }
        self.entries = next;
    }
}

#[inline]
fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi sweeps,
/// ascending.
fn jacobi_symmetric_eigenvalues(m: &mut [f64], n: usize) -> Vec<f64> {
    let scale: f64 = m.iter().map(|v| v * v).sum::<f64>().max(1e-300);
    let tol = 1e-28 * scale;
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|p| (0..n).map(move |q| (p, q)))
            .filter(|&(p, q)| p != q)
            .map(|(p, q)| m[p * n + q] * m[p * n + q])
            .sum();
        if off < tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[p * n + q];
                if fmath::abs(apq) < 1e-300 {
                    continue;
                }
                let theta = (m[q * n + q] - m[p * n + p]) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + fmath::sqrt(theta * theta + 1.0))
                } else {
                    -1.0 / (-theta + fmath::sqrt(theta * theta + 1.0))
                };
                let c = 1.0 / fmath::sqrt(t * t + 1.0);
                let s = t * c;
                for k in 0..n {
                    let mkp = m[k * n + p];
                    let mkq = m[k * n + q];
                    m[k * n + p] = c * mkp - s * mkq;
                    m[k * n + q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[p * n + k];
                    let mqk = m[q * n + k];
                    m[p * n + k] = c * mpk - s * mqk;
                    m[q * n + k] = s * mpk + c * mqk;
                }
            }
        }
    }
    let mut eigs: Vec<f64> = (0..n).map(|i| m[i * n + i]).collect();
    eigs.sort_by(|a, b| a.partial_cmp(b).expect("eigenvalues are finite"));
    eigs
}

/// One branch of the exact propagation: the classical bits recorded so far
/// and the (unnormalized) conditional state.
struct Branch {
    bits: Vec<u8>,
    rho: DensityMatrix,
}

/// Exact outcome distribution of a circuit by density-matrix propagation.
///
/// `Reset` and `NonSelectiveZ` are applied as exact channels; `MeasureZ`
/// splits the computation into branches, one per recorded outcome, so the
/// returned map gives the exact joint distribution over classical
/// bitstrings. This is the shot-free oracle for every sampled experiment.
pub fn exact_probabilities(circuit: &Circuit) -> Result<BTreeMap<String, f64>> {
    circuit.validate()?;
    let mut branches = vec![Branch {
        bits: vec![0u8; circuit.num_classical_slots()],
        rho: DensityMatrix::ground(circuit.num_qubits()),
    }];
    for op in circuit.ops() {
        match *op {
            GateOp::NonSelectiveZ(q) => {
                for b in &mut branches {
                    b.rho.dephase(q);
                }
            }
            GateOp::Reset(q) => {
                for b in &mut branches {
                    b.rho.reset(q);
                }
            }
            GateOp::MeasureZ { qubit, slot } => {
                let mut next = Vec::with_capacity(branches.len() * 2);
                for b in branches {
                    for bit in [0u8, 1u8] {
                        let projected = b.rho.project(qubit, bit);
                        if projected.trace().re > BRANCH_PRUNE {
                            let mut bits = b.bits.clone();
                            bits[slot] = bit;
                            next.push(Branch {
                                bits,
                                rho: projected,
                            });
                        }
                    }
                }
                branches = next;
            }
            ref unitary => {
                for b in &mut branches {
                    b.rho.apply_unitary(unitary)?;
                }
            }
        }
    }
    let mut out: BTreeMap<String, f64> = BTreeMap::new();
    for b in branches {
        let key: String = b.bits.iter().map(|&bit| char::from(b'0' + bit)).collect();
        *out.entry(key).or_insert(0.0) += b.rho.trace().re;
    }
    let total: f64 = out.values().sum();
    if fmath::abs(total - 1.0) > 1e-10 {
        return Err(Error::Numerical(format!(
            "exact probabilities sum to {total}, expected 1"
        )));
    }
    Ok(out)
}
