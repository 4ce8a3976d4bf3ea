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

use thiserror::Error;

/// Errors produced by the adqc library.
#[derive(Debug, Error)]
pub enum AdqcError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("repeated target qubit index {0}")]
    RepeatedTarget(usize),

    #[error("qubit index {index} out of range for {qubit_count} qubits")]
    BadQubitIndex { index: usize, qubit_count: usize },

    #[error("matrix is not unitary (deviation {deviation:.3e} exceeds {tolerance:.3e})")]
    NonUnitary { deviation: f64, tolerance: f64 },

    #[error("Kraus operator is not proportional to a unitary")]
    NotUnitaryBranch,

    #[error("measurement outcome has probability below 1e-14")]
    ImpossibleOutcome,

    #[error("measurement angle cannot be adapted through a non-identity residual correction")]
    UnflushedResidual,

    #[error("invalid POVM: {0}")]
    InvalidPovm(String),

    #[error("branch enumeration refused for {0} measurements (limit 20)")]
    EnumerationTooLarge(usize),

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("decomposition failed: {0}")]
    DecompositionFailed(String),
}

pub type Result<T> = std::result::Result<T, AdqcError>;
