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

//! Property tests for the library invariants.

use adqc_core::compiler::{compile_circuit, Circuit, Gate};
use adqc_core::kak::{canonical_d, kak_decompose, reconstruct};
use adqc_core::kernel::{branching_relation, kraus_pair, AncillaParams};
use adqc_core::linalg::{
    apply_to_qubits, equal_up_to_phase, operator_schmidt_terms, proportional_to_unitary,
    random_unitary, random_unitary_2x2, states_equal_up_to_phase, tensor, ComplexMatrix,
    StateVector, C,
};
use adqc_core::simulator::{run_pattern, RunMode};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use std::f64::consts::PI;

fn unitary_from_seed(n: usize, seed: u64) -> ComplexMatrix {
    random_unitary(n, &mut ChaCha12Rng::seed_from_u64(seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn tensor_of_unitaries_is_unitary(seed in any::<u64>()) {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let u = random_unitary_2x2(&mut rng);
        let v = random_unitary_2x2(&mut rng);
        prop_assert!(tensor(&u, &v).is_unitary(1e-10));
    }

    #[test]
    fn gate_application_preserves_norm(seed in any::<u64>(), qubit in 0usize..3) {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let state = StateVector::random(3, &mut rng);
        let u = random_unitary_2x2(&mut rng);
        let out = apply_to_qubits(&u, &state, &[qubit]).unwrap();
        prop_assert!((out.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn phase_equality_is_an_equivalence(seed in any::<u64>(), phi in -3.0f64..3.0) {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let a = random_unitary_2x2(&mut rng);
        let b = a.scale(C::from_polar(1.0, phi));
        let c = b.scale(C::from_polar(1.0, 0.4));
        // Reflexive, symmetric, transitive at 1e-9.
        prop_assert!(equal_up_to_phase(&a, &a, 1e-9).is_some());
        prop_assert!(equal_up_to_phase(&a, &b, 1e-9).is_some());
        prop_assert!(equal_up_to_phase(&b, &a, 1e-9).is_some());
        prop_assert!(equal_up_to_phase(&a, &c, 1e-9).is_some());
    }

    #[test]
    fn proportionality_recovers_the_scale(seed in any::<u64>(), s in 0.01f64..2.0) {
        let u = unitary_from_seed(2, seed);
        let m = u.scale(C::new(s, 0.0));
        let (got, _) = proportional_to_unitary(&m, 1e-10).unwrap();
        prop_assert!((got - s).abs() < 1e-10);
    }

    #[test]
    fn schmidt_weights_carry_the_frobenius_norm(seed in any::<u64>()) {
        let m = unitary_from_seed(4, seed);
        let w = operator_schmidt_terms(&m);
        let total: f64 = w.iter().map(|x| x * x).sum();
        prop_assert!((total - m.frobenius_norm().powi(2)).abs() < 1e-10);
        // Weights are sorted descending.
        for pair in w.windows(2) {
            prop_assert!(pair[0] >= pair[1] - 1e-12);
        }
    }

    #[test]
    fn kak_round_trip_holds(seed in any::<u64>()) {
        let u = unitary_from_seed(4, seed);
        let form = kak_decompose(&u).unwrap();
        prop_assert!(equal_up_to_phase(&reconstruct(&form), &u, 1e-9).is_some());
    }

    #[test]
    fn kraus_pairs_are_complete(seed in any::<u64>(),
                                gamma in 0.0f64..PI,
                                delta in 0.0f64..(2.0 * PI),
                                theta in 0.0f64..PI,
                                phi in 0.0f64..(2.0 * PI)) {
        let e = unitary_from_seed(4, seed);
        let pair = kraus_pair(&e, &AncillaParams::new(gamma, delta, theta, phi)).unwrap();
        prop_assert!(pair.completeness_deviation() < 1e-10);
    }

    #[test]
    fn branching_pauli_has_unit_coefficients(seed in any::<u64>(), beta in -3.0f64..3.0) {
        // Any unitary pair connected by a Pauli passes the relation with a
        // unit coefficient vector.
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let u = random_unitary_2x2(&mut rng);
        let n: [f64; 3] = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let p = adqc_core::kernel::GeneralizedPauli::new(n[0], n[1], n[2]);
        let half = C::new(0.5f64.sqrt(), 0.0);
        let pair = adqc_core::kernel::KrausPair {
            k_plus: u.scale(half * C::from_polar(1.0, beta)),
            k_minus: p.matrix().mul(&u).scale(half),
            p_plus: None,
            p_minus: None,
        };
        let (got, _) = branching_relation(&pair, 1e-9).unwrap().unwrap();
        prop_assert!((got.coefficient_norm() - 1.0).abs() < 1e-10);
    }
}

#[test]
fn compiled_patterns_are_stepwise_deterministic() {
    // Random 2-qubit circuits, every enumerated branch must land on the
    // same logical state.
    let mut rng = ChaCha12Rng::seed_from_u64(0xdead);
    for _ in 0..4 {
        let circuit = Circuit {
            qubit_count: 2,
            gates: vec![
                Gate::SingleQubit {
                    qubit: rng.gen_range(0..2),
                    matrix: random_unitary_2x2(&mut rng),
                },
                Gate::Cz { q1: 0, q2: 1 },
            ],
        };
        let pattern = compile_circuit(&circuit).unwrap();
        let input = StateVector::random(2, &mut rng);
        let target = circuit.unitary().unwrap();
        let expected = apply_to_qubits(&target, &input, &[0, 1]).unwrap();
        let results = run_pattern(&pattern, &input, RunMode::Enumerate).unwrap();
        let mut total = 0.0;
        for r in &results {
            total += r.branch_probability;
            assert!(
                states_equal_up_to_phase(&r.final_state, &expected, 1e-8).is_some(),
                "branch {:?}",
                r.outcomes
            );
        }
        assert!((total - 1.0).abs() < 1e-9);
    }
}

#[test]
fn canonical_d_stays_unitary_everywhere() {
    let mut rng = ChaCha12Rng::seed_from_u64(7);
    for _ in 0..200 {
        let d = canonical_d(
            rng.gen_range(-PI..PI),
            rng.gen_range(-PI..PI),
            rng.gen_range(-PI..PI),
        );
        assert!(d.is_unitary(1e-12));
    }
}
