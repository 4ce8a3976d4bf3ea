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

//! Every JSON document round-trips through its own parser, bit-exactly
//! for the float encoding in use.

use adqc_cli::docs::{
    to_json, CircuitDocument, MatrixDocument, PatternDocument, StateDocument,
};
use adqc_cli::execute;
use adqc_core::compiler::{compile_circuit, Circuit, Gate};
use adqc_core::linalg::{cz_swap, hadamard, random_unitary, ComplexMatrix, StateVector};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

#[test]
fn matrix_documents_round_trip() {
    let mut rng = ChaCha12Rng::seed_from_u64(0xd0c);
    for _ in 0..10 {
        let m = random_unitary(4, &mut rng);
        let text = to_json(&MatrixDocument::from_matrix(&m));
        let doc: MatrixDocument = serde_json::from_str(&text).unwrap();
        let back = doc.to_matrix().unwrap();
        assert_eq!(back.entries(), m.entries(), "parse must be exact");
        // Re-serialization is textually identical.
        assert_eq!(to_json(&MatrixDocument::from_matrix(&back)), text);
    }
}

#[test]
fn state_documents_round_trip() {
    let mut rng = ChaCha12Rng::seed_from_u64(0xd0d);
    let s = StateVector::random(3, &mut rng);
    let text = to_json(&StateDocument::from_state(&s));
    let doc: StateDocument = serde_json::from_str(&text).unwrap();
    assert_eq!(doc.to_state().unwrap().amplitudes(), s.amplitudes());
}

#[test]
fn pattern_documents_round_trip() {
    let circuit = Circuit {
        qubit_count: 2,
        gates: vec![
            Gate::SingleQubit {
                qubit: 1,
                matrix: hadamard(),
            },
            Gate::Cz { q1: 0, q2: 1 },
        ],
    };
    let pattern = compile_circuit(&circuit).unwrap();
    let text = to_json(&PatternDocument::from_pattern(&pattern));
    let doc: PatternDocument = serde_json::from_str(&text).unwrap();
    let back = doc.to_pattern().unwrap();
    assert_eq!(back, pattern);
    back.validate().unwrap();
}

#[test]
fn circuit_documents_round_trip() {
    let circuit = Circuit {
        qubit_count: 2,
        gates: vec![
            Gate::SingleQubit {
                qubit: 0,
                matrix: hadamard(),
            },
            Gate::Cz { q1: 1, q2: 0 },
        ],
    };
    let text = to_json(&CircuitDocument::from_circuit(&circuit));
    let doc: CircuitDocument = serde_json::from_str(&text).unwrap();
    let back = doc.to_circuit().unwrap();
    assert_eq!(back.qubit_count, 2);
    assert_eq!(back.gates.len(), 2);
}

#[test]
fn classify_output_parses_as_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    std::fs::write(&path, to_json(&MatrixDocument::from_matrix(&cz_swap()))).unwrap();
    let exec = execute(&["adqc", "classify", path.to_str().unwrap()]);
    assert_eq!(exec.code, 0);
    let value: serde_json::Value = serde_json::from_str(&exec.stdout).unwrap();
    assert_eq!(value["class"], "HeisenbergXXMaximal");
    assert_eq!(value["universal"], true);
}

#[test]
fn compile_counts_match_the_contract() {
    // One single-qubit gate: 4 measurements; one CZ: 1 + 2·4; empty: 0.
    let dir = tempfile::tempdir().unwrap();
    let case = |gates: Vec<Gate>, qubits: usize, want: u64| {
        let path = dir.path().join(format!("c{want}.json"));
        let doc = CircuitDocument::from_circuit(&Circuit {
            qubit_count: qubits,
            gates,
        });
        std::fs::write(&path, to_json(&doc)).unwrap();
        let out = dir.path().join(format!("p{want}.json"));
        let exec = execute(&[
            "adqc",
            "compile",
            path.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(exec.code, 0, "{}", exec.stderr);
        let v: serde_json::Value = serde_json::from_str(&exec.stdout).unwrap();
        assert_eq!(v["measurements"], serde_json::json!(want));
    };
    case(
        vec![Gate::SingleQubit {
            qubit: 0,
            matrix: hadamard(),
        }],
        1,
        4,
    );
    case(vec![Gate::Cz { q1: 0, q2: 1 }], 2, 9);
    case(vec![], 1, 0);
}

#[test]
fn simulate_enumerate_reports_uniform_branches() {
    let dir = tempfile::tempdir().unwrap();
    let circuit_path = dir.path().join("h.json");
    let doc = CircuitDocument::from_circuit(&Circuit {
        qubit_count: 1,
        gates: vec![Gate::SingleQubit {
            qubit: 0,
            matrix: hadamard(),
        }],
    });
    std::fs::write(&circuit_path, to_json(&doc)).unwrap();
    let pattern_path = dir.path().join("h_pattern.json");
    let exec = execute(&[
        "adqc",
        "compile",
        circuit_path.to_str().unwrap(),
        "--out",
        pattern_path.to_str().unwrap(),
    ]);
    assert_eq!(exec.code, 0);
    let exec = execute(&[
        "adqc",
        "simulate",
        pattern_path.to_str().unwrap(),
        "--input",
        "0",
        "--mode",
        "enumerate",
    ]);
    assert_eq!(exec.code, 0, "{}", exec.stderr);
    let v: serde_json::Value = serde_json::from_str(&exec.stdout).unwrap();
    let results = v["results"].as_array().unwrap();
    assert_eq!(results.len(), 16);
    for r in results {
        let p = r["probability"].as_f64().unwrap();
        assert!((p - 1.0 / 16.0).abs() < 1e-12);
    }
}

#[test]
fn state_document_files_feed_simulate_and_povm() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = ChaCha12Rng::seed_from_u64(0xfee);
    let state = StateVector::random(1, &mut rng);
    let state_path = dir.path().join("state.json");
    std::fs::write(&state_path, to_json(&StateDocument::from_state(&state))).unwrap();

    let circuit_path = dir.path().join("id.json");
    let doc = CircuitDocument::from_circuit(&Circuit {
        qubit_count: 1,
        gates: vec![],
    });
    std::fs::write(&circuit_path, to_json(&doc)).unwrap();
    let pattern_path = dir.path().join("id_pattern.json");
    let exec = execute(&[
        "adqc",
        "compile",
        circuit_path.to_str().unwrap(),
        "--out",
        pattern_path.to_str().unwrap(),
    ]);
    assert_eq!(exec.code, 0);
    let exec = execute(&[
        "adqc",
        "simulate",
        pattern_path.to_str().unwrap(),
        "--input",
        state_path.to_str().unwrap(),
        "--mode",
        "enumerate",
    ]);
    assert_eq!(exec.code, 0, "{}", exec.stderr);
    let v: serde_json::Value = serde_json::from_str(&exec.stdout).unwrap();
    let amp = v["results"][0]["final_state"]["amplitudes"][0][0]
        .as_f64()
        .unwrap();
    assert!((amp - state.amplitudes()[0].re).abs() < 1e-15);

    // POVM accepts the same state file; projective probabilities follow
    // the Born weights of the document.
    let povm_path = dir.path().join("proj.json");
    let proj = adqc_cli::docs::PovmDocument {
        elements: vec![
            MatrixDocument::from_matrix(&ComplexMatrix::from_real_rows(&[
                &[1.0, 0.0],
                &[0.0, 0.0],
            ])),
            MatrixDocument::from_matrix(&ComplexMatrix::from_real_rows(&[
                &[0.0, 0.0],
                &[0.0, 1.0],
            ])),
        ],
    };
    std::fs::write(&povm_path, to_json(&proj)).unwrap();
    let exec = execute(&[
        "adqc",
        "povm",
        povm_path.to_str().unwrap(),
        "--state",
        state_path.to_str().unwrap(),
        "--qubit",
        "0",
    ]);
    assert_eq!(exec.code, 0, "{}", exec.stderr);
    let v: serde_json::Value = serde_json::from_str(&exec.stdout).unwrap();
    let p0 = v["probabilities"][0].as_f64().unwrap();
    assert!((p0 - state.amplitudes()[0].norm_sqr()).abs() < 1e-8);
}

#[test]
fn malformed_matrix_is_a_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("short.json");
    let doc = MatrixDocument {
        dim: 4,
        entries: vec![[1.0, 0.0]; 3],
    };
    std::fs::write(&path, to_json(&doc)).unwrap();
    let exec = execute(&["adqc", "classify", path.to_str().unwrap()]);
    assert_eq!(exec.code, 1);
    let missing = execute(&["adqc", "classify", "/nonexistent/file.json"]);
    assert_eq!(missing.code, 1);
    let odd = ComplexMatrix::identity(2);
    let path2 = dir.path().join("dim2.json");
    std::fs::write(&path2, to_json(&MatrixDocument::from_matrix(&odd))).unwrap();
    let exec = execute(&["adqc", "classify", path2.to_str().unwrap()]);
    assert_eq!(exec.code, 1);
}

#[test]
fn float_format_carries_seventeen_significant_digits() {
    let text = to_json(&vec![0.5f64, 1.0 / 3.0]);
    assert!(text.contains("5.0000000000000000e-1"));
    assert!(text.contains("3.3333333333333331e-1"));
    let back: Vec<f64> = serde_json::from_str(&text).unwrap();
    assert_eq!(back[1], 1.0 / 3.0, "17 digits round-trip f64 exactly");
}
