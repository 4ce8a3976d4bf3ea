// Copyright 2026 the adqc developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Ancilla-driven quantum computation (ADQC).
//!
//! A register of computational qubits is steered remotely by a single
//! ancilla: the ancilla is repeatedly prepared, coupled to one or two
//! register qubits through a fixed two-qubit unitary E, and measured. The
//! measurement back-action on the register is what implements the gates.
//!
//! This crate provides, end to end:
//!
//! * a dense complex linear-algebra kernel ([`linalg`]);
//! * the canonical (KAK) decomposition of two-qubit unitaries into local
//!   factors around D(αx, αy, αz) = exp(−i(αx X⊗X + αy Y⊗Y + αz Z⊗Z))
//!   ([`kak`]);
//! * the measurement back-action engine: Kraus pairs, generalized-Pauli
//!   branching and tensor-commutation tests ([`kernel`]);
//! * a classifier deciding which couplings admit unitary, step-wise
//!   deterministic, universal register steering ([`classifier`]);
//! * a compiler from register circuits to ancilla measurement patterns with
//!   adaptive angles and per-qubit correction frames ([`compiler`]);
//! * a pattern simulator with branch enumeration, seeded sampling, remote
//!   register readout and Neumark-dilated POVMs ([`simulator`]).

pub mod classifier;
pub mod compiler;
pub mod error;
pub mod kak;
pub mod kernel;
pub mod linalg;
pub mod simulator;

pub use error::{AdqcError, Result};
