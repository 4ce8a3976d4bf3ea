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

//! Command implementations.
//!
//! Exit codes:
//!   0  success (classify: universal coupling)
//!   1  parse or I/O error (also: unknown selftest level)
//!   2  invalid input (non-unitary matrix, bad circuit, incomplete POVM)
//!   3  classify: coupling is not universal
//!   4  classify: coupling is not step-wise deterministic
//!   5  simulate: enumeration refused (more than 20 measurements)
//!   6  simulate: forced branch has zero probability
//!   7  selftest: at least one suite failed

use num_complex::Complex64;

use adqc_core::classifier::{classify_with, ClassifyOptions};
use adqc_core::compiler::compile_circuit;
use adqc_core::error::AdqcError;
use adqc_core::linalg::StateVector;
use adqc_core::simulator::{povm_neumark, run_pattern, RunMode};

use crate::docs::{
    read_json, to_json, CircuitDocument, ClassificationDocument, CompileSummaryDocument,
    DistributionDocument, MatrixDocument, PatternDocument, PovmDocument, RunDocument,
    RunResultDocument, StateDocument,
};

/// Environment variable supplying the default sampling seed; `--seed`
/// overrides it.
pub const SEED_ENV: &str = "ADQC_SEED";

/// A command failure with its documented exit code.
#[derive(Debug, Clone)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn parse(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            message: message.into(),
        }
    }

    pub fn invalid(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }
}

fn map_core_error(err: AdqcError) -> Failure {
    let code = match err {
        AdqcError::EnumerationTooLarge(_) => 5,
        AdqcError::ImpossibleOutcome => 6,
        _ => 2,
    };
    Failure {
        code,
        message: err.to_string(),
    }
}

/// Classifies a 4×4 coupling from a matrix document.
///
/// Exit 0 for a universal coupling, 3 for step-wise deterministic but not
/// universal, 4 otherwise.
pub fn cmd_classify(path: &str, tol: f64, grid: usize) -> Result<(String, i32), Failure> {
    let doc: MatrixDocument = read_json(path)?;
    if doc.dim != 4 {
        return Err(Failure::parse(format!(
            "classify needs a 4x4 matrix document, got dim {}",
            doc.dim
        )));
    }
    let matrix = doc.to_matrix()?;
    let report = classify_with(
        &matrix,
        &ClassifyOptions {
            grid,
            class_tol: tol,
        },
    )
    .map_err(map_core_error)?;
    let code = if report.universal {
        0
    } else if report.stepwise_deterministic {
        3
    } else {
        4
    };
    let mut out = to_json(&ClassificationDocument::from_report(&report));
    out.push('\n');
    Ok((out, code))
}

/// Compiles a circuit document into a pattern document.
///
/// With `--out` the pattern goes to the file and stdout carries the
/// measurement count; without it the whole pattern document is printed.
pub fn cmd_compile(path: &str, out: Option<&str>) -> Result<(String, i32), Failure> {
    let doc: CircuitDocument = read_json(path)?;
    let circuit = doc.to_circuit()?;
    circuit
        .validate()
        .map_err(|e| Failure::invalid(e.to_string()))?;
    let pattern = compile_circuit(&circuit).map_err(|e| Failure::invalid(e.to_string()))?;
    let pattern_doc = PatternDocument::from_pattern(&pattern);
    match out {
        Some(out_path) => {
            std::fs::write(out_path, to_json(&pattern_doc))
                .map_err(|e| Failure::parse(format!("writing {out_path}: {e}")))?;
            let mut s = to_json(&CompileSummaryDocument {
                measurements: pattern.measurement_count,
                out: out_path.to_string(),
            });
            s.push('\n');
            Ok((s, 0))
        }
        None => {
            let mut s = to_json(&pattern_doc);
            s.push('\n');
            Ok((s, 0))
        }
    }
}

/// Parses either a product-state shorthand over {0, 1, +, -} (qubit 0
/// first) or a path to a state document.
pub fn parse_state_arg(arg: &str) -> Result<StateVector, Failure> {
    let shorthand = !arg.is_empty() && arg.chars().all(|c| matches!(c, '0' | '1' | '+' | '-'));
    if shorthand {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let factors: Vec<[Complex64; 2]> = arg
            .chars()
            .map(|c| match c {
                '0' => [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
                '1' => [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
                '+' => [Complex64::new(h, 0.0), Complex64::new(h, 0.0)],
                _ => [Complex64::new(h, 0.0), Complex64::new(-h, 0.0)],
            })
            .collect();
        return Ok(StateVector::product(&factors));
    }
    let doc: StateDocument = read_json(arg)?;
    doc.to_state()
}

#[derive(Debug, Clone)]
pub enum SimulateMode {
    Sample,
    Enumerate,
    Branch(Vec<bool>),
}

pub fn parse_mode(arg: &str) -> Result<SimulateMode, Failure> {
    match arg {
        "sample" => Ok(SimulateMode::Sample),
        "enumerate" => Ok(SimulateMode::Enumerate),
        other => {
            if let Some(bits) = other.strip_prefix("branch:") {
                if bits.is_empty() || !bits.chars().all(|c| c == '0' || c == '1') {
                    return Err(Failure::parse(format!(
                        "branch mode needs a bit string, got {bits:?}"
                    )));
                }
                Ok(SimulateMode::Branch(
                    bits.chars().map(|c| c == '1').collect(),
                ))
            } else {
                Err(Failure::parse(format!("unknown mode {other:?}")))
            }
        }
    }
}

/// Resolves the sampling seed: `--seed`, then the environment, then 0.
pub fn resolve_seed(flag: Option<u64>) -> u64 {
    flag.or_else(|| {
        std::env::var(SEED_ENV)
            .ok()
            .and_then(|s| s.parse::<u64>().ok())
    })
    .unwrap_or(0)
}

/// Runs a pattern document against an input state.
pub fn cmd_simulate(
    pattern_path: &str,
    input: &str,
    mode: &str,
    seed: Option<u64>,
    trials: usize,
) -> Result<(String, i32), Failure> {
    let doc: PatternDocument = read_json(pattern_path)?;
    let pattern = doc.to_pattern()?;
    pattern
        .validate()
        .map_err(|e| Failure::invalid(e.to_string()))?;
    let state = parse_state_arg(input)?;
    let mode = parse_mode(mode)?;

    let mut results = Vec::new();
    let mode_name;
    match mode {
        SimulateMode::Sample => {
            mode_name = "sample";
            let base = resolve_seed(seed);
            for k in 0..trials.max(1) {
                let runs = run_pattern(
                    &pattern,
                    &state,
                    RunMode::Sample {
                        seed: base.wrapping_add(k as u64),
                    },
                )
                .map_err(map_core_error)?;
                results.extend(runs);
            }
        }
        SimulateMode::Enumerate => {
            mode_name = "enumerate";
            results = run_pattern(&pattern, &state, RunMode::Enumerate).map_err(map_core_error)?;
        }
        SimulateMode::Branch(outcomes) => {
            mode_name = "branch";
            results = run_pattern(&pattern, &state, RunMode::Branch { outcomes })
                .map_err(map_core_error)?;
        }
    }

    let doc = RunDocument {
        mode: mode_name.to_string(),
        results: results.iter().map(RunResultDocument::from_result).collect(),
    };
    let mut out = to_json(&doc);
    out.push('\n');
    Ok((out, 0))
}

/// Synthesizes a POVM on one register qubit through Neumark dilation.
pub fn cmd_povm(spec_path: &str, state: &str, qubit: usize) -> Result<(String, i32), Failure> {
    let doc: PovmDocument = read_json(spec_path)?;
    let spec = doc.to_spec()?;
    let state = parse_state_arg(state)?;
    let outcome = povm_neumark(&spec, &state, qubit).map_err(map_core_error)?;
    let mut out = to_json(&DistributionDocument {
        probabilities: outcome.probabilities,
        measurements: outcome.measurement_count,
    });
    out.push('\n');
    Ok((out, 0))
}

/// Runs the acceptance-criteria suites. Exit 0 iff every suite passes,
/// otherwise 7 with the failure manifest on stdout.
pub fn cmd_selftest(level: &str) -> Result<(String, i32), Failure> {
    let criteria = match level {
        "quick" => crate::selftest::run_quick(),
        "full" => crate::selftest::run_full(),
        other => {
            return Err(Failure::parse(format!(
                "unknown selftest level {other:?} (expected quick or full)"
            )))
        }
    };
    let mut out = String::new();
    let mut all_passed = true;
    for c in &criteria {
        all_passed &= c.passed;
        out.push_str(&format!(
            "criterion {} ({}): {} — {}\n",
            c.number,
            c.name,
            if c.passed { "PASS" } else { "FAIL" },
            c.detail
        ));
    }
    let code = if all_passed { 0 } else { 7 };
    Ok((out, code))
}
