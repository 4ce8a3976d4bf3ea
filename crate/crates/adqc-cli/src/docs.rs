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

//! JSON file formats and their conversions.
//!
//! Complex numbers are [re, im] pairs; floats print in scientific
//! notation with 17 significant digits, so output is textually
//! reproducible and round-trips exactly.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use adqc_core::classifier::ClassificationReport;
use adqc_core::compiler::{
    Circuit, FrameRule, Gate, MeasureAxis, OutcomeMask, Pattern, PatternStep, ResidualKind,
};
use adqc_core::kernel::{AncillaParams, GeneralizedPauli};
use adqc_core::linalg::{ComplexMatrix, StateVector};
use adqc_core::simulator::{PovmSpec, RunResult};

use crate::commands::Failure;

/// Serializes with every float at 17 significant digits.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SciFloatFormatter);
    value.serialize(&mut ser).expect("in-memory serialization");
    String::from_utf8(out).expect("json is utf8")
}

struct SciFloatFormatter;

impl serde_json::ser::Formatter for SciFloatFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        write!(writer, "{value:.16e}")
    }
}

fn parse_error(context: &str, err: impl std::fmt::Display) -> Failure {
    Failure::parse(format!("{context}: {err}"))
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &str) -> Result<T, Failure> {
    let text =
        std::fs::read_to_string(path).map_err(|e| parse_error(&format!("reading {path}"), e))?;
    serde_json::from_str(&text).map_err(|e| parse_error(&format!("parsing {path}"), e))
}

/// Dense complex matrix: {"dim": n, "entries": [[re, im], ...]} row-major.
#[derive(Debug, Serialize, Deserialize)]
pub struct MatrixDocument {
    pub dim: usize,
    pub entries: Vec<[f64; 2]>,
}

impl MatrixDocument {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        Self {
            dim: m.rows(),
            entries: m.entries().iter().map(|c| [c.re, c.im]).collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix, Failure> {
        if self.entries.len() != self.dim * self.dim {
            return Err(Failure::parse(format!(
                "matrix document: dim {} needs {} entries, got {}",
                self.dim,
                self.dim * self.dim,
                self.entries.len()
            )));
        }
        let entries = self
            .entries
            .iter()
            .map(|[re, im]| Complex64::new(*re, *im))
            .collect();
        ComplexMatrix::from_entries(self.dim, self.dim, entries)
            .map_err(|e| Failure::parse(e.to_string()))
    }
}

/// Register state: {"qubits": n, "amplitudes": [[re, im], ...]}.
#[derive(Debug, Serialize, Deserialize)]
pub struct StateDocument {
    pub qubits: usize,
    pub amplitudes: Vec<[f64; 2]>,
}

impl StateDocument {
    pub fn from_state(s: &StateVector) -> Self {
        Self {
            qubits: s.qubit_count(),
            amplitudes: s.amplitudes().iter().map(|c| [c.re, c.im]).collect(),
        }
    }

    pub fn to_state(&self) -> Result<StateVector, Failure> {
        let amplitudes = self
            .amplitudes
            .iter()
            .map(|[re, im]| Complex64::new(*re, *im))
            .collect();
        StateVector::new(self.qubits, amplitudes).map_err(|e| Failure::parse(e.to_string()))
    }
}

/// Circuit: {"qubits": n, "gates": [{"type": "u", ...} | {"type": "cz", ...}]}.
#[derive(Debug, Serialize, Deserialize)]
pub struct CircuitDocument {
    pub qubits: usize,
    pub gates: Vec<GateDocument>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum GateDocument {
    #[serde(rename = "u")]
    U { q: usize, matrix: MatrixDocument },
    #[serde(rename = "cz")]
    Cz { q1: usize, q2: usize },
}

impl CircuitDocument {
    pub fn from_circuit(c: &Circuit) -> Self {
        Self {
            qubits: c.qubit_count,
            gates: c
                .gates
                .iter()
                .map(|g| match g {
                    Gate::SingleQubit { qubit, matrix } => GateDocument::U {
                        q: *qubit,
                        matrix: MatrixDocument::from_matrix(matrix),
                    },
                    Gate::Cz { q1, q2 } => GateDocument::Cz { q1: *q1, q2: *q2 },
                })
                .collect(),
        }
    }

    pub fn to_circuit(&self) -> Result<Circuit, Failure> {
        let gates = self
            .gates
            .iter()
            .map(|g| {
                Ok(match g {
                    GateDocument::U { q, matrix } => Gate::SingleQubit {
                        qubit: *q,
                        matrix: matrix.to_matrix()?,
                    },
                    GateDocument::Cz { q1, q2 } => Gate::Cz { q1: *q1, q2: *q2 },
                })
            })
            .collect::<Result<Vec<_>, Failure>>()?;
        Ok(Circuit {
            qubit_count: self.qubits,
            gates,
        })
    }
}

/// Compiled pattern with its final frame rule.
#[derive(Debug, Serialize, Deserialize)]
pub struct PatternDocument {
    pub qubits: usize,
    pub measurements: usize,
    pub steps: Vec<StepDocument>,
    pub final_frame: Vec<FrameDocument>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum StepDocument {
    #[serde(rename = "prepare")]
    Prepare { gamma: f64, delta: f64 },
    #[serde(rename = "couple")]
    Couple { qubits: Vec<usize> },
    #[serde(rename = "measure")]
    Measure {
        id: usize,
        axis: String,
        base_angle: f64,
        adapt_from: Vec<usize>,
    },
}

#[derive(Debug, Serialize, Deserialize)]
pub struct FrameDocument {
    pub x_mask: Vec<usize>,
    pub z_mask: Vec<usize>,
    pub residual: String,
}

fn axis_name(axis: MeasureAxis) -> &'static str {
    match axis {
        MeasureAxis::XPlane => "xplane",
        MeasureAxis::YBasis => "y",
        MeasureAxis::ZBasis => "z",
    }
}

fn axis_from_name(name: &str) -> Result<MeasureAxis, Failure> {
    match name {
        "xplane" => Ok(MeasureAxis::XPlane),
        "y" => Ok(MeasureAxis::YBasis),
        "z" => Ok(MeasureAxis::ZBasis),
        other => Err(Failure::parse(format!("unknown measurement axis {other:?}"))),
    }
}

impl PatternDocument {
    pub fn from_pattern(p: &Pattern) -> Self {
        Self {
            qubits: p.qubit_count,
            measurements: p.measurement_count,
            steps: p
                .steps
                .iter()
                .map(|s| match s {
                    PatternStep::PrepareAncilla { gamma, delta } => StepDocument::Prepare {
                        gamma: *gamma,
                        delta: *delta,
                    },
                    PatternStep::Couple { qubits } => StepDocument::Couple {
                        qubits: qubits.clone(),
                    },
                    PatternStep::MeasureAncilla {
                        id,
                        axis,
                        base_angle,
                        adapt_from,
                    } => StepDocument::Measure {
                        id: *id,
                        axis: axis_name(*axis).to_string(),
                        base_angle: *base_angle,
                        adapt_from: adapt_from.indices(),
                    },
                })
                .collect(),
            final_frame: p
                .final_frame
                .iter()
                .map(|f| FrameDocument {
                    x_mask: f.x_mask.indices(),
                    z_mask: f.z_mask.indices(),
                    residual: match f.residual {
                        ResidualKind::Identity => "identity".to_string(),
                        ResidualKind::HTimesSdag => "h_sdag".to_string(),
                    },
                })
                .collect(),
        }
    }

    pub fn to_pattern(&self) -> Result<Pattern, Failure> {
        let steps = self
            .steps
            .iter()
            .map(|s| {
                Ok(match s {
                    StepDocument::Prepare { gamma, delta } => PatternStep::PrepareAncilla {
                        gamma: *gamma,
                        delta: *delta,
                    },
                    StepDocument::Couple { qubits } => PatternStep::Couple {
                        qubits: qubits.clone(),
                    },
                    StepDocument::Measure {
                        id,
                        axis,
                        base_angle,
                        adapt_from,
                    } => PatternStep::MeasureAncilla {
                        id: *id,
                        axis: axis_from_name(axis)?,
                        base_angle: *base_angle,
                        adapt_from: OutcomeMask::from_indices(adapt_from),
                    },
                })
            })
            .collect::<Result<Vec<_>, Failure>>()?;
        let final_frame = self
            .final_frame
            .iter()
            .map(|f| {
                Ok(FrameRule {
                    x_mask: OutcomeMask::from_indices(&f.x_mask),
                    z_mask: OutcomeMask::from_indices(&f.z_mask),
                    residual: match f.residual.as_str() {
                        "identity" => ResidualKind::Identity,
                        "h_sdag" => ResidualKind::HTimesSdag,
                        other => {
                            return Err(Failure::parse(format!("unknown residual {other:?}")))
                        }
                    },
                })
            })
            .collect::<Result<Vec<_>, Failure>>()?;
        Ok(Pattern {
            qubit_count: self.qubits,
            steps,
            measurement_count: self.measurements,
            final_frame,
        })
    }
}

/// POVM: {"elements": [MatrixDocument, ...]}.
#[derive(Debug, Serialize, Deserialize)]
pub struct PovmDocument {
    pub elements: Vec<MatrixDocument>,
}

impl PovmDocument {
    pub fn to_spec(&self) -> Result<PovmSpec, Failure> {
        let elements = self
            .elements
            .iter()
            .map(|m| m.to_matrix())
            .collect::<Result<Vec<_>, Failure>>()?;
        Ok(PovmSpec { elements })
    }
}

/// One executed branch.
#[derive(Debug, Serialize, Deserialize)]
pub struct RunResultDocument {
    pub outcomes: Vec<u8>,
    pub probability: f64,
    pub outcome_probabilities: Vec<f64>,
    pub final_state: StateDocument,
    pub applied_final_frame: Vec<MatrixDocument>,
}

impl RunResultDocument {
    pub fn from_result(r: &RunResult) -> Self {
        Self {
            outcomes: r.outcomes.iter().map(|b| u8::from(*b)).collect(),
            probability: r.branch_probability,
            outcome_probabilities: r.outcome_probabilities.clone(),
            final_state: StateDocument::from_state(&r.final_state),
            applied_final_frame: r
                .applied_final_frame
                .iter()
                .map(MatrixDocument::from_matrix)
                .collect(),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct RunDocument {
    pub mode: String,
    pub results: Vec<RunResultDocument>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct WitnessParamsDocument {
    pub gamma: f64,
    pub delta: f64,
    pub theta: f64,
    pub phi: f64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct WitnessBranchDocument {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct LocalFactorsDocument {
    pub v_ancilla: MatrixDocument,
    pub v_register: MatrixDocument,
    pub w_ancilla: MatrixDocument,
    pub w_register: MatrixDocument,
}

/// Classifier verdict with its evidence.
#[derive(Debug, Serialize, Deserialize)]
pub struct ClassificationDocument {
    pub class: String,
    pub universal: bool,
    pub stepwise_deterministic: bool,
    pub composable: bool,
    pub alphas: [f64; 3],
    pub witness_alphas: [f64; 3],
    pub global_phase: f64,
    pub locals: LocalFactorsDocument,
    pub witness_params: Option<WitnessParamsDocument>,
    pub witness_branch: Option<WitnessBranchDocument>,
    pub failure_reason: Option<String>,
}

impl ClassificationDocument {
    pub fn from_report(r: &ClassificationReport) -> Self {
        Self {
            class: format!("{:?}", r.class),
            universal: r.universal,
            stepwise_deterministic: r.stepwise_deterministic,
            composable: r.composable,
            alphas: [
                r.canonical.alpha_x,
                r.canonical.alpha_y,
                r.canonical.alpha_z,
            ],
            witness_alphas: [r.witness_alphas.0, r.witness_alphas.1, r.witness_alphas.2],
            global_phase: r.canonical.global_phase,
            locals: LocalFactorsDocument {
                v_ancilla: MatrixDocument::from_matrix(&r.canonical.v_ancilla),
                v_register: MatrixDocument::from_matrix(&r.canonical.v_register),
                w_ancilla: MatrixDocument::from_matrix(&r.canonical.w_ancilla),
                w_register: MatrixDocument::from_matrix(&r.canonical.w_register),
            },
            witness_params: r.witness_params.map(|p: AncillaParams| WitnessParamsDocument {
                gamma: p.gamma,
                delta: p.delta,
                theta: p.theta,
                phi: p.phi,
            }),
            witness_branch: r.witness_branch.map(|b: GeneralizedPauli| {
                WitnessBranchDocument {
                    a: b.a,
                    b: b.b,
                    c: b.c,
                }
            }),
            failure_reason: r.failure_reason.clone(),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct DistributionDocument {
    pub probabilities: Vec<f64>,
    pub measurements: usize,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CompileSummaryDocument {
    pub measurements: usize,
    pub out: String,
}
