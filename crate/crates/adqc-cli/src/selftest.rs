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

//! Acceptance suites: property checks against the exact algebraic
//! identities the scheme is built on, at fixed tolerances.

use std::f64::consts::{FRAC_PI_4, PI};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use adqc_core::classifier::{
    classify_with, unitary_pair_scan, verify_witness, ClassifyOptions, InteractionClass,
};
use adqc_core::compiler::{compile_circuit, j_matrix, Circuit, Gate};
use adqc_core::kak::{canonical_d, kak_decompose, reconstruct};
use adqc_core::kernel::{kraus_pair, AncillaParams};
use adqc_core::linalg::{
    apply_to_qubits, coupling_e, cz, cz_swap, equal_up_to_phase, hadamard, pauli_x, pauli_z,
    random_unitary, random_unitary_2x2, states_equal_up_to_phase, tensor, ComplexMatrix,
    StateVector, C, C_ZERO, IM,
};

use adqc_core::simulator::{povm_neumark, remote_z_measure, run_pattern, PovmSpec, RemoteMode, RunMode};

/// Outcome of one acceptance criterion.
#[derive(Debug, Clone)]
pub struct Criterion {
    pub number: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Criterion {
    fn new(number: usize, name: &'static str, passed: bool, detail: String) -> Self {
        Self {
            number,
            name,
            passed,
            detail,
        }
    }

    /// Applies the criterion's runtime budget: exceeding it is a failure.
    fn with_budget(mut self, elapsed: std::time::Duration, budget_secs: f64) -> Self {
        if elapsed.as_secs_f64() > budget_secs {
            self.passed = false;
            self.detail = format!(
                "{} (exceeded the {budget_secs} s runtime budget)",
                self.detail
            );
        }
        self
    }
}

/// Quick level: the gate-teleportation identities plus a 100-sample
/// decomposition round trip.
pub fn run_quick() -> Vec<Criterion> {
    vec![criterion_1(), criterion_2(), criterion_3_with(100)]
}

/// Full level: every acceptance criterion.
pub fn run_full() -> Vec<Criterion> {
    vec![
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
        criterion_9(),
    ]
}

/// Criterion 1: ⟨j| J_A(β) E |+⟩ = X^j J(β)/√2 up to global phase within
/// 1e-10, for 100 random β and both outcomes.
pub fn criterion_1() -> Criterion {
    let start = Instant::now();
    let mut rng = ChaCha12Rng::seed_from_u64(0xe92);
    let e = coupling_e();
    let half = C::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let mut worst = 0.0f64;
    let mut ok = true;
    for _ in 0..100 {
        let beta = rng.gen_range(-PI..PI);
        // Apply J(β) to the ancilla after the coupling, then measure z.
        let dressed = tensor(&j_matrix(beta), &ComplexMatrix::identity(2)).mul(&e);
        let pair = match kraus_pair(&dressed, &AncillaParams::z_basis()) {
            Ok(p) => p,
            Err(_) => {
                ok = false;
                break;
            }
        };
        let expected_plus = j_matrix(beta).scale(half);
        let expected_minus = pauli_x().mul(&j_matrix(beta)).scale(half);
        for (got, want) in [(&pair.k_plus, &expected_plus), (&pair.k_minus, &expected_minus)] {
            match equal_up_to_phase(got, want, 1e-10) {
                Some(phase) => {
                    let resid = got
                        .sub(&want.scale(C::from_polar(1.0, phase)))
                        .frobenius_norm();
                    worst = worst.max(resid);
                }
                None => {
                    ok = false;
                    worst = f64::INFINITY;
                }
            }
        }
    }
    Criterion::new(
        1,
        "single-qubit gate teleportation identity",
        ok,
        format!("worst residual {worst:.2e}, {:?}", start.elapsed()),
    )
    .with_budget(start.elapsed(), 1.0)
}

/// Criterion 2: ⟨y_j| E_AR E_AR' |+⟩ = U(j) ⊗ U(j) · CZ/√2 up to global
/// phase within 1e-10, both y outcomes, with U(j) = H·((1+iZ)/√2)·Z^j.
///
/// The coupling of the ancilla to two register qubits is the shared-
/// Hadamard composition (H_A ⊗ H_R ⊗ H_R')·CZ_AR·CZ_AR'; composing the
/// literal single-qubit E twice leaves the second-coupled qubit with a
/// plain Hadamard correction and never satisfies the symmetric identity.
pub fn criterion_2() -> Criterion {
    let start = Instant::now();
    // Build the three-qubit mediation unitary column by column
    // (qubit 0 = ancilla, 1 = R, 2 = R').
    let mut m = ComplexMatrix::zeros(8, 8);
    for col in 0..8 {
        let mut state = StateVector::basis_state(3, col);
        state = apply_to_qubits(&cz(), &state, &[0, 1]).unwrap();
        state = apply_to_qubits(&cz(), &state, &[0, 2]).unwrap();
        for q in 0..3 {
            state = apply_to_qubits(&hadamard(), &state, &[q]).unwrap();
        }
        for row in 0..8 {
            m[(row, col)] = state.amplitudes()[row];
        }
    }

    let h = std::f64::consts::FRAC_1_SQRT_2;
    let plus = [C::new(h, 0.0), C::new(h, 0.0)];
    let correction = |j: usize| {
        let s_dag_like = ComplexMatrix::identity(2)
            .add(&pauli_z().scale(IM))
            .scale(C::new(h, 0.0));
        let mut u = hadamard().mul(&s_dag_like);
        if j == 1 {
            u = u.mul(&pauli_z());
        }
        u
    };

    let mut ok = true;
    let mut worst = 0.0f64;
    for j in 0..2 {
        let y = [
            C::new(h, 0.0),
            C::new(0.0, if j == 0 { h } else { -h }),
        ];
        // K_j[r_out, r_in] = Σ_{a,b} y_j[a]* · plus[b] · M[4a+r_out, 4b+r_in]
        let mut k = ComplexMatrix::zeros(4, 4);
        for a in 0..2 {
            for b in 0..2 {
                let w = y[a].conj() * plus[b];
                for r_out in 0..4 {
                    for r_in in 0..4 {
                        k[(r_out, r_in)] += w * m[(4 * a + r_out, 4 * b + r_in)];
                    }
                }
            }
        }
        let u = correction(j);
        let expected = tensor(&u, &u).mul(&cz()).scale(C::new(h, 0.0));
        match equal_up_to_phase(&k, &expected, 1e-10) {
            Some(phase) => {
                let resid = k
                    .sub(&expected.scale(C::from_polar(1.0, phase)))
                    .frobenius_norm();
                worst = worst.max(resid);
            }
            None => ok = false,
        }
    }
    Criterion::new(
        2,
        "two-qubit CZ mediation identity",
        ok,
        format!("worst residual {worst:.2e}, {:?}", start.elapsed()),
    )
    .with_budget(start.elapsed(), 1.0)
}

/// Criterion 3: canonical-decomposition round trip on 1000 Haar-random
/// two-qubit unitaries at 1e-9, plus the CZ and CZ+SWAP chamber points.
pub fn criterion_3() -> Criterion {
    criterion_3_with(1000)
}

pub fn criterion_3_with(samples: usize) -> Criterion {
    let start = Instant::now();
    let mut rng = ChaCha12Rng::seed_from_u64(0x3a3);
    let mut ok = true;
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let u = random_unitary(4, &mut rng);
        match kak_decompose(&u) {
            Ok(form) => {
                // The global phase is tracked explicitly, so the
                // phase-quotiented comparison and the direct difference
                // must both stay below tolerance.
                if equal_up_to_phase(&reconstruct(&form), &u, 1e-9).is_none() {
                    ok = false;
                }
                let direct = reconstruct(&form).sub(&u).frobenius_norm();
                worst = worst.max(direct);
                if direct > 1e-9 {
                    ok = false;
                }
            }
            Err(_) => ok = false,
        }
    }
    let cz_form = kak_decompose(&cz());
    let swap_form = kak_decompose(&cz_swap());
    match (cz_form, swap_form) {
        (Ok(a), Ok(b)) => {
            if (a.alpha_x - FRAC_PI_4).abs() > 1e-9
                || a.alpha_y.abs() > 1e-9
                || a.alpha_z.abs() > 1e-9
            {
                ok = false;
            }
            if (b.alpha_x - FRAC_PI_4).abs() > 1e-9
                || (b.alpha_y - FRAC_PI_4).abs() > 1e-9
                || b.alpha_z.abs() > 1e-9
            {
                ok = false;
            }
        }
        _ => ok = false,
    }
    Criterion::new(
        3,
        "canonical decomposition round trip",
        ok,
        format!(
            "{samples} samples, worst residual {worst:.2e}, {:?}",
            start.elapsed()
        ),
    )
    .with_budget(start.elapsed(), 10.0)
}

/// Criterion 4: 100 locally-dressed instances spanning all five classes
/// classified with 100% accuracy; every step-wise deterministic verdict
/// carries a witness that re-verifies at 1e-8.
pub fn criterion_4() -> Criterion {
    let start = Instant::now();
    let mut rng = ChaCha12Rng::seed_from_u64(0x4c4);
    let opts = ClassifyOptions::default();
    let mut correct = 0usize;
    let mut total = 0usize;
    let mut witness_failures = 0usize;

    let mut instances: Vec<(InteractionClass, ComplexMatrix)> = Vec::new();
    for _ in 0..20 {
        instances.push((
            InteractionClass::IsingMaximal,
            canonical_d(FRAC_PI_4, 0.0, 0.0),
        ));
        instances.push((
            InteractionClass::HeisenbergXXMaximal,
            canonical_d(FRAC_PI_4, FRAC_PI_4, 0.0),
        ));
        instances.push((
            InteractionClass::IsingPartial,
            canonical_d(rng.gen_range(0.1..FRAC_PI_4 - 0.05), 0.0, 0.0),
        ));
        instances.push((
            InteractionClass::HeisenbergPartial,
            canonical_d(FRAC_PI_4, rng.gen_range(0.1..FRAC_PI_4 - 0.05), 0.0),
        ));
        let z = rng.gen_range(0.05..FRAC_PI_4);
        let y = rng.gen_range(z..=FRAC_PI_4);
        let x = rng.gen_range(y..=FRAC_PI_4);
        instances.push((
            InteractionClass::NotStepwiseDeterministic,
            canonical_d(x, y, z),
        ));
    }

    for (want, core) in instances {
        let dressed = tensor(&random_unitary_2x2(&mut rng), &random_unitary_2x2(&mut rng))
            .mul(&core)
            .mul(&tensor(
                &random_unitary_2x2(&mut rng),
                &random_unitary_2x2(&mut rng),
            ))
            .scale(C::from_polar(1.0, rng.gen_range(-PI..PI)));
        total += 1;
        if let Ok(report) = classify_with(&dressed, &opts) {
            if report.class == want {
                correct += 1;
            }
            if report.stepwise_deterministic {
                let params = report.witness_params.expect("witness present");
                let branch = report.witness_branch.expect("witness present");
                match verify_witness(report.witness_alphas, &params, &branch) {
                    Ok(dev) if dev < 1e-8 => {}
                    _ => witness_failures += 1,
                }
            }
        }
    }

    let ok = correct == total && witness_failures == 0;
    Criterion::new(
        4,
        "theorem classifier confusion matrix",
        ok,
        format!(
            "{correct}/{total} classified, {witness_failures} witness failures, {:?}",
            start.elapsed()
        ),
    )
    .with_budget(start.elapsed(), 300.0)
}

/// Criterion 5: for 10 random chamber points with αz ≥ 0.05 the 64⁴ grid
/// holds no ancilla parameters with both branches unitary-proportional at
/// 1e-6.
pub fn criterion_5() -> Criterion {
    let start = Instant::now();
    let mut rng = ChaCha12Rng::seed_from_u64(0x5a5);
    let mut ok = true;
    let mut closest = f64::INFINITY;
    for _ in 0..10 {
        let z = rng.gen_range(0.05..FRAC_PI_4);
        let y = rng.gen_range(z..=FRAC_PI_4);
        let x = rng.gen_range(y..=FRAC_PI_4);
        let scan = unitary_pair_scan((x, y, z), 64, 1e-6);
        closest = closest.min(scan.min_residual);
        if scan.found.is_some() {
            ok = false;
        }
    }
    Criterion::new(
        5,
        "alpha_z necessity on the 64^4 grid",
        ok,
        format!(
            "closest unitarity residual {closest:.2e}, {:?}",
            start.elapsed()
        ),
    )
    .with_budget(start.elapsed(), 600.0)
}

/// Criterion 6: 50 random 3-qubit, 8-gate circuits; 200 sampled branches
/// each (patterns exceed 14 measurements); every branch's final logical
/// state matches the circuit unitary within 1e-8 up to phase and every
/// measurement is unbiased within 1e-10.
pub fn criterion_6() -> Criterion {
    let start = Instant::now();
    let mut rng = ChaCha12Rng::seed_from_u64(0x6c6);
    let mut ok = true;
    let mut worst_prob = 0.0f64;
    let mut branches = 0usize;
    for circuit_index in 0..50 {
        let mut gates = Vec::new();
        for _ in 0..8 {
            if rng.gen_bool(0.5) {
                gates.push(Gate::SingleQubit {
                    qubit: rng.gen_range(0..3),
                    matrix: random_unitary_2x2(&mut rng),
                });
            } else {
                let q1 = rng.gen_range(0..3);
                let q2 = (q1 + 1 + rng.gen_range(0..2)) % 3;
                gates.push(Gate::Cz { q1, q2 });
            }
        }
        let circuit = Circuit {
            qubit_count: 3,
            gates,
        };
        let pattern = match compile_circuit(&circuit) {
            Ok(p) => p,
            Err(_) => {
                ok = false;
                continue;
            }
        };
        let input = StateVector::random(3, &mut rng);
        let target = circuit.unitary().expect("validated circuit");
        let expected = apply_to_qubits(&target, &input, &[0, 1, 2]).expect("dimensions");

        let branch_count = if pattern.measurement_count <= 14 {
            let results = run_pattern(&pattern, &input, RunMode::Enumerate).expect("enumerate");
            for r in &results {
                for p in &r.outcome_probabilities {
                    worst_prob = worst_prob.max((p - 0.5).abs());
                }
                if states_equal_up_to_phase(&r.final_state, &expected, 1e-8).is_none() {
                    ok = false;
                }
            }
            results.len()
        } else {
            for k in 0..200u64 {
                let seed = (circuit_index as u64) << 32 | k;
                let r = run_pattern(&pattern, &input, RunMode::Sample { seed })
                    .expect("sample")
                    .remove(0);
                for p in &r.outcome_probabilities {
                    worst_prob = worst_prob.max((p - 0.5).abs());
                }
                if states_equal_up_to_phase(&r.final_state, &expected, 1e-8).is_none() {
                    ok = false;
                }
            }
            200
        };
        branches += branch_count;
        if worst_prob > 1e-10 {
            ok = false;
        }
    }
    Criterion::new(
        6,
        "compiler step-wise determinism",
        ok,
        format!(
            "{branches} branches, worst |p-1/2| = {worst_prob:.2e}, {:?}",
            start.elapsed()
        ),
    )
    .with_budget(start.elapsed(), 120.0)
}

/// Criterion 7: remote z-measurement statistics equal |⟨j|ψ⟩|² within
/// 1e-12 on 100 random single-qubit states embedded in 3-qubit registers.
pub fn criterion_7() -> Criterion {
    let start = Instant::now();
    let mut rng = ChaCha12Rng::seed_from_u64(0x7e7);
    let mut ok = true;
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let target: usize = rng.gen_range(0..3);
        let factors: Vec<[C; 2]> = (0..3)
            .map(|_| {
                let v = StateVector::random(1, &mut rng);
                [v.amplitudes()[0], v.amplitudes()[1]]
            })
            .collect();
        let state = StateVector::product(&factors);
        let expect_zero = factors[target][0].norm_sqr();
        match remote_z_measure(&state, target, RemoteMode::Forced(false), false) {
            Ok(res) => {
                let dev = (res.probability - expect_zero).abs();
                worst = worst.max(dev);
                if dev > 1e-12 || (res.post_state.norm() - 1.0).abs() > 1e-10 {
                    ok = false;
                }
            }
            Err(_) => {
                // Zero-probability branch: the state had no |0⟩ weight.
                if expect_zero > 1e-13 {
                    ok = false;
                }
            }
        }
    }
    Criterion::new(
        7,
        "remote register readout",
        ok,
        format!("worst deviation {worst:.2e}, {:?}", start.elapsed()),
    )
    .with_budget(start.elapsed(), 1.0)
}

pub fn trine_povm() -> PovmSpec {
    let elements = (0..3)
        .map(|i| {
            let theta = 2.0 * PI * i as f64 / 3.0;
            let v = [
                C::new((theta / 2.0).cos(), 0.0),
                C::new((theta / 2.0).sin(), 0.0),
            ];
            let mut e = ComplexMatrix::zeros(2, 2);
            for a in 0..2 {
                for b in 0..2 {
                    e[(a, b)] = v[a] * v[b].conj() * C::new(2.0 / 3.0, 0.0);
                }
            }
            e
        })
        .collect();
    PovmSpec { elements }
}

/// Criterion 8: the trine POVM through Neumark dilation matches
/// ⟨ψ|Eᵢ|ψ⟩ within 1e-8 on 100 random states; completeness validation
/// rejects a deliberately broken spec.
pub fn criterion_8() -> Criterion {
    let start = Instant::now();
    let mut rng = ChaCha12Rng::seed_from_u64(0x8f8);
    let spec = trine_povm();
    let mut ok = true;
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let state = StateVector::random(1, &mut rng);
        match povm_neumark(&spec, &state, 0) {
            Ok(out) => {
                for (i, e) in spec.elements.iter().enumerate() {
                    let mut expect = C_ZERO;
                    for a in 0..2 {
                        for b in 0..2 {
                            expect += state.amplitudes()[a].conj()
                                * e[(a, b)]
                                * state.amplitudes()[b];
                        }
                    }
                    let dev = (out.probabilities[i] - expect.re).abs();
                    worst = worst.max(dev);
                    if dev > 1e-8 {
                        ok = false;
                    }
                }
            }
            Err(_) => ok = false,
        }
    }
    let broken = PovmSpec {
        elements: vec![
            ComplexMatrix::identity(2).scale(C::new(0.7, 0.0)),
            ComplexMatrix::identity(2).scale(C::new(0.7, 0.0)),
        ],
    };
    if povm_neumark(&broken, &StateVector::basis_state(1, 0), 0).is_ok() {
        ok = false;
    }
    Criterion::new(
        8,
        "POVM synthesis by Neumark dilation",
        ok,
        format!("worst deviation {worst:.2e}, {:?}", start.elapsed()),
    )
    .with_budget(start.elapsed(), 10.0)
}

/// Criterion 9: the CLI produces the documented exit codes and identical
/// stdout across two runs with the same seed.
pub fn criterion_9() -> Criterion {
    let start = Instant::now();
    match cli_roundtrip() {
        Ok(()) => Criterion::new(
            9,
            "CLI end-to-end determinism and exit codes",
            true,
            format!("{:?}", start.elapsed()),
        )
        .with_budget(start.elapsed(), 30.0),
        Err(msg) => Criterion::new(9, "CLI end-to-end determinism and exit codes", false, msg),
    }
}

fn cli_roundtrip() -> Result<(), String> {
    use crate::docs::{to_json, MatrixDocument};

    let dir = tempfile::tempdir().map_err(|e| format!("tempdir: {e}"))?;
    let path = |name: &str| dir.path().join(name).to_string_lossy().into_owned();
    let write = |name: &str, contents: &str| -> Result<String, String> {
        let p = path(name);
        std::fs::write(&p, contents).map_err(|e| format!("write {name}: {e}"))?;
        Ok(p)
    };
    let matrix_file = |name: &str, m: &ComplexMatrix| -> Result<String, String> {
        write(name, &to_json(&MatrixDocument::from_matrix(m)))
    };

    let expect = |args: &[&str], want_code: i32| -> Result<String, String> {
        let exec = crate::execute(args);
        if exec.code != want_code {
            return Err(format!(
                "`{}` exited {} (expected {want_code}): {}",
                args.join(" "),
                exec.code,
                exec.stderr.trim()
            ));
        }
        Ok(exec.stdout)
    };

    // Exit codes of classify.
    let swap_path = matrix_file("cz_swap.json", &cz_swap())?;
    expect(&["adqc", "classify", &swap_path], 0)?;
    let partial_path = matrix_file("partial.json", &canonical_d(PI / 8.0, 0.0, 0.0))?;
    expect(&["adqc", "classify", &partial_path], 3)?;
    let id_path = matrix_file("identity.json", &ComplexMatrix::identity(4))?;
    expect(&["adqc", "classify", &id_path], 4)?;
    let bad_json = write("bad.json", "{ not json")?;
    expect(&["adqc", "classify", &bad_json], 1)?;
    let mut nonunitary = ComplexMatrix::identity(4);
    nonunitary[(0, 0)] = C::new(2.0, 0.0);
    let nonunitary_path = matrix_file("nonunitary.json", &nonunitary)?;
    expect(&["adqc", "classify", &nonunitary_path], 2)?;

    // compile → simulate: a single-qubit rotation (the Eq. 2 machinery)
    // and a CZ mediation (the Eq. 3 machinery).
    let circuit = crate::docs::CircuitDocument::from_circuit(&Circuit {
        qubit_count: 2,
        gates: vec![
            Gate::SingleQubit {
                qubit: 0,
                matrix: hadamard(),
            },
            Gate::Cz { q1: 0, q2: 1 },
        ],
    });
    let circuit_path = write("circuit.json", &to_json(&circuit))?;
    let pattern_path = path("pattern.json");
    let c1 = expect(&["adqc", "compile", &circuit_path, "--out", &pattern_path], 0)?;
    let c2 = expect(&["adqc", "compile", &circuit_path, "--out", &pattern_path], 0)?;
    if c1 != c2 {
        return Err("compile output differs between identical runs".into());
    }

    let sim_args = [
        "adqc",
        "simulate",
        &pattern_path,
        "--input",
        "00",
        "--mode",
        "sample",
        "--seed",
        "7",
        "--trials",
        "3",
    ];
    let s1 = expect(&sim_args, 0)?;
    let s2 = expect(&sim_args, 0)?;
    if s1 != s2 {
        return Err("simulate output differs between identical seeded runs".into());
    }

    // classify twice for bit-identical reports.
    let k1 = expect(&["adqc", "classify", &swap_path], 0)?;
    let k2 = expect(&["adqc", "classify", &swap_path], 0)?;
    if k1 != k2 {
        return Err("classify output differs between identical runs".into());
    }

    // POVM: trine twice, then a broken spec.
    let spec = trine_povm();
    let povm_doc = crate::docs::PovmDocument {
        elements: spec.elements.iter().map(MatrixDocument::from_matrix).collect(),
    };
    let povm_path = write("trine.json", &to_json(&povm_doc))?;
    let p1 = expect(
        &["adqc", "povm", &povm_path, "--state", "0", "--qubit", "0"],
        0,
    )?;
    let p2 = expect(
        &["adqc", "povm", &povm_path, "--state", "0", "--qubit", "0"],
        0,
    )?;
    if p1 != p2 {
        return Err("povm output differs between identical runs".into());
    }
    let broken_doc = crate::docs::PovmDocument {
        elements: vec![
            MatrixDocument::from_matrix(&ComplexMatrix::identity(2).scale(C::new(0.7, 0.0))),
            MatrixDocument::from_matrix(&ComplexMatrix::identity(2).scale(C::new(0.7, 0.0))),
        ],
    };
    let broken_path = write("broken.json", &to_json(&broken_doc))?;
    expect(
        &["adqc", "povm", &broken_path, "--state", "0", "--qubit", "0"],
        2,
    )?;

    // Enumeration refusal above 20 measurements (exit 5).
    let mut many = Vec::new();
    for _ in 0..6 {
        many.push(Gate::SingleQubit {
            qubit: 0,
            matrix: hadamard(),
        });
    }
    let big_circuit = crate::docs::CircuitDocument::from_circuit(&Circuit {
        qubit_count: 1,
        gates: many,
    });
    let big_path = write("big.json", &to_json(&big_circuit))?;
    let big_pattern = path("big_pattern.json");
    expect(&["adqc", "compile", &big_path, "--out", &big_pattern], 0)?;
    expect(
        &[
            "adqc",
            "simulate",
            &big_pattern,
            "--input",
            "0",
            "--mode",
            "enumerate",
        ],
        5,
    )?;

    // Impossible forced branch (exit 6): prepare |0⟩ and measure the
    // x-plane; the minus outcome has zero amplitude.
    let impossible = r#"{
        "qubits": 1,
        "measurements": 1,
        "steps": [
            {"type": "prepare", "gamma": 0.0, "delta": 0.0},
            {"type": "couple", "qubits": [0]},
            {"type": "measure", "id": 0, "axis": "xplane", "base_angle": 0.0, "adapt_from": []}
        ],
        "final_frame": [{"x_mask": [], "z_mask": [], "residual": "identity"}]
    }"#;
    let impossible_path = write("impossible.json", impossible)?;
    expect(
        &[
            "adqc",
            "simulate",
            &impossible_path,
            "--input",
            "0",
            "--mode",
            "branch:1",
        ],
        6,
    )?;

    // Unknown selftest level (exit 1).
    expect(&["adqc", "selftest", "--level", "bogus"], 1)?;

    Ok(())
}
