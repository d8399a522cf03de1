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

//! Small-scale quantum experiments for causal analysis.
//!
//! This crate bundles everything needed to run Bell-type experiments on a
//! dense statevector simulator and to analyse them with the language of
//! causal inference:
//!
//! - [`qsim`] — a 1–8 qubit statevector simulator with exact Born-rule
//!   probabilities, seeded shot sampling, mid-circuit measurement, reset,
//!   non-selective (dephasing) measurement, and the usual information
//!   measures (partial trace, purity, von Neumann entropy, concurrence).
//! - [`bell`] — CHSH correlators, the Confounding Strength metric
//!   `CS = |S|/2`, deterministic local-hidden-variable baselines, the
//!   entanglement sweep, the confounding hierarchy, and the Mermin / CH /
//!   Hardy variants of the analysis.
//! - [`intervention`] — a circuit-level DO-operator (project–prepare
//!   surgery), observational vs interventional conditionals with Wilson
//!   intervals, no-signaling checks, and the confounder validation suite.
//! - [`stats`] — Wilson intervals, Welch and paired t-tests, Pearson r and
//!   R², all self-contained (Student-t tail via the regularized incomplete
//!   beta function).
//! - [`qml`] — a three-bit causal data generator (`C ↔ A → B`),
//!   interventional feature validation, from-scratch logistic regression,
//!   and the cross-domain robustness study.
//!
//! # Conventions
//!
//! - Qubit ordering is little-endian: qubit 0 is the least significant bit
//!   of a basis-state index, so `|q1 q0⟩ = |01⟩` is index 1 for qubit 0 = 1.
//! - Classical bitstrings (keys of [`qsim::Counts`]) list register slot 0
//!   first (leftmost character).
//! - Measurement half-angles: a stored setting `φ` selects the observable
//!   `O(φ) = cos(2φ)·Z + sin(2φ)·X`, realised by rotating with `Ry(−2φ)`
//!   and measuring in the Z basis.
//! - Entropies are in bits (log base 2).
//! - All randomness derives from explicit 64-bit seeds; see [`rng`].
#![cfg_attr(not(test), no_std)]

extern crate alloc;

use alloc::string::String;
use core::fmt;

pub mod bell;
pub(crate) mod fmath;
pub mod intervention;
pub mod qml;
pub mod qsim;
pub mod rng;
pub mod stats;

/// Errors reported by the toolkit.
///
/// `Config` covers structurally invalid inputs (bad qubit indices, malformed
/// circuits), `Argument` covers out-of-range call arguments, and `Numerical`
/// covers inputs that fail a numerical validity check (e.g. a density matrix
/// that is not Hermitian within tolerance).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    Config(String),
    Argument(String),
    Numerical(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Config(msg) => write!(f, "configuration error: {msg}"),
            Error::Argument(msg) => write!(f, "argument error: {msg}"),
            Error::Numerical(msg) => write!(f, "numerical validity error: {msg}"),
        }
    }
}

#[cfg(test)]
impl std::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
