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

//! Pattern execution on state vectors.
//!
//! The ancilla lives as a freshly appended qubit for the duration of one
//! prepare–couple–measure cycle and is contracted away by the measurement.
//! Execution modes: Born-rule sampling from a seeded ChaCha12 stream (one
//! uniform draw per measurement, stable across platforms), forced branches,
//! and full branch enumeration. After the last step the recorded final
//! frame is inverted so the returned state is the logical one.
//!
//! The same machinery drives remote register readout (the coupling plus a
//! z-basis ancilla measurement projects a register qubit without ever
//! touching it) and POVM synthesis by Neumark dilation: each 2-outcome
//! round embeds the POVM into a two-qubit unitary on (qubit, extension),
//! compiles it to a pattern, runs it, and reads the extension qubit
//! remotely; more outcomes cascade rounds on the conditional states.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::compiler::{
    compile_circuit, kak_gates, Circuit, Gate, MeasureAxis, Pattern, PatternStep, ResidualKind,
};
use crate::error::{AdqcError, Result};
use crate::linalg::{
    apply_to_qubits, cz, hadamard, pauli_x, pauli_z, ComplexMatrix, StateVector, C, C_ONE, C_ZERO,
};

/// Outcome list, final logical state and probability of one branch.
#[derive(Debug, Clone)]
pub struct RunResult {
    pub outcomes: Vec<bool>,
    /// Born probability of each recorded outcome, in measurement order.
    pub outcome_probabilities: Vec<f64>,
    pub final_state: StateVector,
    pub branch_probability: f64,
    /// The per-qubit unitary applied at the end to undo the frame.
    pub applied_final_frame: Vec<ComplexMatrix>,
}

/// How measurement outcomes are chosen during a run.
#[derive(Debug, Clone)]
pub enum RunMode {
    /// Born-rule sampling from a seeded generator.
    Sample { seed: u64 },
    /// Forced outcomes, one per measurement.
    Branch { outcomes: Vec<bool> },
    /// All branches with probability above 1e-14; refused beyond 20
    /// measurements.
    Enumerate,
}

/// Runs a pattern. Sample and branch modes return one result; enumerate
/// returns every branch.
pub fn run_pattern(pattern: &Pattern, input: &StateVector, mode: RunMode) -> Result<Vec<RunResult>> {
    pattern.validate()?;
    if input.qubit_count() != pattern.qubit_count {
        return Err(AdqcError::DimensionMismatch(format!(
            "pattern is over {} qubits, input has {}",
            pattern.qubit_count,
            input.qubit_count()
        )));
    }
    match mode {
        RunMode::Sample { seed } => {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            let result = run_single(pattern, input, &mut |_, p_plus| {
                Ok(rng.gen::<f64>() >= p_plus)
            })?;
            Ok(vec![result])
        }
        RunMode::Branch { outcomes } => {
            if outcomes.len() != pattern.measurement_count {
                return Err(AdqcError::DimensionMismatch(format!(
                    "pattern has {} measurements, branch specifies {}",
                    pattern.measurement_count,
                    outcomes.len()
                )));
            }
            let result = run_single(pattern, input, &mut |id, _| Ok(outcomes[id]))?;
            Ok(vec![result])
        }
        RunMode::Enumerate => {
            if pattern.measurement_count > 20 {
                return Err(AdqcError::EnumerationTooLarge(pattern.measurement_count));
            }
            let mut results = Vec::new();
            enumerate_from(
                pattern,
                0,
                input.clone(),
                1.0,
                Vec::new(),
                Vec::new(),
                &mut results,
            )?;
            Ok(results)
        }
    }
}

/// Walks all steps, asking `decide` for each measurement outcome.
fn run_single(
    pattern: &Pattern,
    input: &StateVector,
    decide: &mut dyn FnMut(usize, f64) -> Result<bool>,
) -> Result<RunResult> {
    let mut register = input.clone();
    let mut joint: Option<StateVector> = None;
    let mut outcomes = Vec::with_capacity(pattern.measurement_count);
    let mut step_probabilities = Vec::with_capacity(pattern.measurement_count);
    let mut probability = 1.0f64;

    for step in &pattern.steps {
        match step {
            PatternStep::PrepareAncilla { gamma, delta } => {
                let (s, c) = (gamma / 2.0).sin_cos();
                joint = Some(register.append_qubit(C::new(c, 0.0), C::from_polar(s, *delta)));
            }
            PatternStep::Couple { qubits } => {
                let state = joint.as_mut().expect("validated pattern couples after prep");
                *state = couple(state, qubits)?;
            }
            PatternStep::MeasureAncilla {
                id,
                axis,
                base_angle,
                adapt_from,
            } => {
                let state = joint.take().expect("validated pattern measures after prep");
                let angle = if adapt_from.parity(&outcomes) {
                    -base_angle
                } else {
                    *base_angle
                };
                let (m_plus, m_minus) = measurement_vectors(*axis, angle);
                let plus_branch = state.contract_last_qubit(m_plus);
                let p_plus = plus_branch.norm().powi(2);
                let outcome = decide(*id, p_plus)?;
                let mut branch = if outcome {
                    state.contract_last_qubit(m_minus)
                } else {
                    plus_branch
                };
                let p = if outcome { 1.0 - p_plus } else { p_plus };
                if p < 1e-14 {
                    return Err(AdqcError::ImpossibleOutcome);
                }
                branch.normalize();
                register = branch;
                probability *= p;
                step_probabilities.push(p);
                outcomes.push(outcome);
            }
        }
    }

    let (final_state, applied) = apply_final_frame(pattern, register, &outcomes)?;
    Ok(RunResult {
        outcomes,
        outcome_probabilities: step_probabilities,
        final_state,
        branch_probability: probability,
        applied_final_frame: applied,
    })
}

/// Depth-first enumeration sharing common prefixes.
fn enumerate_from(
    pattern: &Pattern,
    step_index: usize,
    state: StateVector,
    probability: f64,
    outcomes: Vec<bool>,
    step_probabilities: Vec<f64>,
    results: &mut Vec<RunResult>,
) -> Result<()> {
    let register = state;
    let mut joint: Option<StateVector> = None;

    for (idx, step) in pattern.steps.iter().enumerate().skip(step_index) {
        match step {
            PatternStep::PrepareAncilla { gamma, delta } => {
                let (s, c) = (gamma / 2.0).sin_cos();
                joint = Some(register.append_qubit(C::new(c, 0.0), C::from_polar(s, *delta)));
            }
            PatternStep::Couple { qubits } => {
                let state = joint.as_mut().expect("validated pattern");
                *state = couple(state, qubits)?;
            }
            PatternStep::MeasureAncilla {
                axis,
                base_angle,
                adapt_from,
                ..
            } => {
                let state = joint.take().expect("validated pattern");
                let angle = if adapt_from.parity(&outcomes) {
                    -base_angle
                } else {
                    *base_angle
                };
                let (m_plus, m_minus) = measurement_vectors(*axis, angle);
                for (outcome, bra) in [(false, m_plus), (true, m_minus)] {
                    let mut branch = state.contract_last_qubit(bra);
                    let p = branch.norm().powi(2);
                    if p < 1e-14 {
                        continue;
                    }
                    branch.normalize();
                    let mut next_outcomes = outcomes.clone();
                    next_outcomes.push(outcome);
                    let mut next_probs = step_probabilities.clone();
                    next_probs.push(p);
                    enumerate_from(
                        pattern,
                        idx + 1,
                        branch,
                        probability * p,
                        next_outcomes,
                        next_probs,
                        results,
                    )?;
                }
                return Ok(());
            }
        }
    }

    let (final_state, applied) = apply_final_frame(pattern, register, &outcomes)?;
    results.push(RunResult {
        outcomes,
        outcome_probabilities: step_probabilities,
        final_state,
        branch_probability: probability,
        applied_final_frame: applied,
    });
    Ok(())
}

/// The fixed coupling, applied between the ancilla (last qubit) and one or
/// two register qubits: CZ to each register qubit, then Hadamards on the
/// ancilla and every coupled register qubit.
fn couple(joint: &StateVector, qubits: &[usize]) -> Result<StateVector> {
    let ancilla = joint.qubit_count() - 1;
    let mut state = joint.clone();
    for &q in qubits {
        state = apply_to_qubits(&cz(), &state, &[ancilla, q])?;
    }
    state = apply_to_qubits(&hadamard(), &state, &[ancilla])?;
    for &q in qubits {
        state = apply_to_qubits(&hadamard(), &state, &[q])?;
    }
    Ok(state)
}

/// Measurement bras for each axis; the x-plane angle is already adapted.
fn measurement_vectors(axis: MeasureAxis, angle: f64) -> ([C; 2], [C; 2]) {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    match axis {
        MeasureAxis::XPlane => (
            [C::new(h, 0.0), C::from_polar(h, angle)],
            [C::new(h, 0.0), -C::from_polar(h, angle)],
        ),
        MeasureAxis::YBasis => (
            [C::new(h, 0.0), C::new(0.0, h)],
            [C::new(h, 0.0), C::new(0.0, -h)],
        ),
        MeasureAxis::ZBasis => ([C_ONE, C_ZERO], [C_ZERO, C_ONE]),
    }
}

/// Undoes residual · X^s Z^t on every qubit, returning the logical state
/// and the applied unitaries.
fn apply_final_frame(
    pattern: &Pattern,
    state: StateVector,
    outcomes: &[bool],
) -> Result<(StateVector, Vec<ComplexMatrix>)> {
    let mut out = state;
    let mut applied = Vec::with_capacity(pattern.qubit_count);
    for (q, rule) in pattern.final_frame.iter().enumerate() {
        let s = rule.x_mask.parity(outcomes);
        let t = rule.z_mask.parity(outcomes);
        let mut m = rule.residual.matrix().dagger();
        if s {
            m = pauli_x().mul(&m);
        }
        if t {
            m = pauli_z().mul(&m);
        }
        if rule.residual != ResidualKind::Identity || s || t {
            out = apply_to_qubits(&m, &out, &[q])?;
        }
        applied.push(m);
    }
    Ok((out, applied))
}

/// Worst-case deviation report from comparing a pattern against a target
/// unitary.
#[derive(Debug, Clone, Copy)]
pub struct VerifyReport {
    pub max_infidelity: f64,
    pub branches_checked: usize,
}

/// Compares a pattern against a target 2^n × 2^n unitary on random input
/// states: full enumeration when the pattern has at most 14 measurements,
/// otherwise `trials` sampled branches.
pub fn verify_pattern(
    pattern: &Pattern,
    target: &ComplexMatrix,
    trials: usize,
    seed: u64,
) -> Result<VerifyReport> {
    target.check_unitary(1e-9)?;
    let dim = 1usize << pattern.qubit_count;
    if target.rows() != dim || target.cols() != dim {
        return Err(AdqcError::DimensionMismatch(format!(
            "target must be {dim}x{dim}"
        )));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut report = VerifyReport {
        max_infidelity: 0.0,
        branches_checked: 0,
    };
    let check = |input: &StateVector, result: &RunResult, report: &mut VerifyReport| {
        let expected = apply_unitary(target, input);
        let infidelity = result.final_state.infidelity(&expected);
        report.max_infidelity = report.max_infidelity.max(infidelity);
        report.branches_checked += 1;
    };

    if pattern.measurement_count <= 14 {
        let inputs = 1 + trials.min(3);
        for _ in 0..inputs {
            let input = StateVector::random(pattern.qubit_count, &mut rng);
            for result in run_pattern(pattern, &input, RunMode::Enumerate)? {
                check(&input, &result, &mut report);
            }
        }
    } else {
        for _ in 0..trials.max(1) {
            let input = StateVector::random(pattern.qubit_count, &mut rng);
            let seed = rng.gen::<u64>();
            for result in run_pattern(pattern, &input, RunMode::Sample { seed })? {
                check(&input, &result, &mut report);
            }
        }
    }
    Ok(report)
}

fn apply_unitary(u: &ComplexMatrix, state: &StateVector) -> StateVector {
    let targets: Vec<usize> = (0..state.qubit_count()).collect();
    apply_to_qubits(u, state, &targets).expect("matching dimensions")
}

/// Outcome selection for a remote measurement.
#[derive(Debug, Clone, Copy)]
pub enum RemoteMode {
    Sample { seed: u64 },
    Forced(bool),
}

/// Result of a remote z-measurement of one register qubit.
#[derive(Debug, Clone)]
pub struct RemoteOutcome {
    pub outcome: bool,
    pub post_state: StateVector,
    pub probability: f64,
}

/// Projects a register qubit in the computational basis without acting on
/// the register: prepare |+⟩, couple E, measure the ancilla in the
/// z-basis. The Kraus operators are H|j⟩⟨j|, so outcome j occurs with the
/// Born weight |⟨j|ψ⟩|² and leaves H|j⟩ on the qubit; with `restore` a
/// compiled Hadamard fragment maps it back to |j⟩ (forced through its
/// all-zero branch, which is as good as any other).
pub fn remote_z_measure(
    state: &StateVector,
    qubit: usize,
    mode: RemoteMode,
    restore: bool,
) -> Result<RemoteOutcome> {
    if qubit >= state.qubit_count() {
        return Err(AdqcError::BadQubitIndex {
            index: qubit,
            qubit_count: state.qubit_count(),
        });
    }
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let joint = state.append_qubit(C::new(h, 0.0), C::new(h, 0.0));
    let coupled = couple(&joint, &[qubit])?;
    let zero_branch = coupled.contract_last_qubit([C_ONE, C_ZERO]);
    let p_zero = zero_branch.norm().powi(2);

    let outcome = match mode {
        RemoteMode::Forced(o) => o,
        RemoteMode::Sample { seed } => {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            rng.gen::<f64>() >= p_zero
        }
    };
    let (mut post, probability) = if outcome {
        (
            coupled.contract_last_qubit([C_ZERO, C_ONE]),
            1.0 - p_zero,
        )
    } else {
        (zero_branch, p_zero)
    };
    if probability < 1e-14 {
        return Err(AdqcError::ImpossibleOutcome);
    }
    post.normalize();

    if restore {
        let circuit = Circuit {
            qubit_count: state.qubit_count(),
            gates: vec![Gate::SingleQubit {
                qubit,
                matrix: hadamard(),
            }],
        };
        let pattern = compile_circuit(&circuit)?;
        let runs = run_pattern(
            &pattern,
            &post,
            RunMode::Branch {
                outcomes: vec![false; pattern.measurement_count],
            },
        )?;
        post = runs.into_iter().next().expect("one branch").final_state;
    }

    Ok(RemoteOutcome {
        outcome,
        post_state: post,
        probability,
    })
}

/// A positive operator valued measurement on one qubit.
#[derive(Debug, Clone)]
pub struct PovmSpec {
    pub elements: Vec<ComplexMatrix>,
}

impl PovmSpec {
    /// Σ Eᵢ = 1 within 1e-9, every element PSD (min eigenvalue ≥ −1e-12),
    /// between 1 and 4 outcomes.
    pub fn validate(&self) -> Result<()> {
        if self.elements.is_empty() || self.elements.len() > 4 {
            return Err(AdqcError::InvalidPovm(format!(
                "need 1..=4 elements, got {}",
                self.elements.len()
            )));
        }
        let mut total = ComplexMatrix::zeros(2, 2);
        for (i, e) in self.elements.iter().enumerate() {
            if e.rows() != 2 || e.cols() != 2 {
                return Err(AdqcError::InvalidPovm(format!("element {i} is not 2x2")));
            }
            if e.sub(&e.dagger()).frobenius_norm() > 1e-9 {
                return Err(AdqcError::InvalidPovm(format!(
                    "element {i} is not Hermitian"
                )));
            }
            let (lo, _) = hermitian_eigenvalues(e);
            if lo < -1e-12 {
                return Err(AdqcError::InvalidPovm(format!(
                    "element {i} has negative eigenvalue {lo:.3e}"
                )));
            }
            total = total.add(e);
        }
        let dev = total.sub(&ComplexMatrix::identity(2)).frobenius_norm();
        if dev > 1e-9 {
            return Err(AdqcError::InvalidPovm(format!(
                "elements sum to 1 only within {dev:.3e}"
            )));
        }
        Ok(())
    }
}

/// Exact outcome distribution of a POVM implemented through Neumark
/// dilation on the ancilla-driven toolchain.
#[derive(Debug, Clone)]
pub struct PovmOutcome {
    pub probabilities: Vec<f64>,
    /// Ancilla measurements spent across all compiled dilation rounds.
    pub measurement_count: usize,
}

/// Realizes a ≤4-outcome POVM on one register qubit: each round splits
/// off one element as a 2-outcome POVM {F, 1−F}, dilates it with the
/// Hermitian square roots M = F^{1/2} into a two-qubit isometry on
/// (qubit, extension), completes it to a unitary, compiles that through
/// the pattern compiler, executes it, and reads the extension qubit with
/// a remote z-measurement. Remaining outcomes recurse on the conditional
/// state with elements G^{−1/2} Eᵢ G^{−1/2}.
///
/// All branches are followed, so the returned distribution is exact.
pub fn povm_neumark(spec: &PovmSpec, state: &StateVector, qubit: usize) -> Result<PovmOutcome> {
    spec.validate()?;
    if qubit >= state.qubit_count() {
        return Err(AdqcError::BadQubitIndex {
            index: qubit,
            qubit_count: state.qubit_count(),
        });
    }
    let mut out = PovmOutcome {
        probabilities: Vec::with_capacity(spec.elements.len()),
        measurement_count: 0,
    };
    cascade(state.clone(), qubit, &spec.elements, 1.0, &mut out)?;
    Ok(out)
}

fn cascade(
    state: StateVector,
    qubit: usize,
    elements: &[ComplexMatrix],
    prefix: f64,
    out: &mut PovmOutcome,
) -> Result<()> {
    if elements.len() == 1 {
        // The conditional POVM is complete, so the last outcome takes all
        // the remaining weight.
        out.probabilities.push(prefix);
        return Ok(());
    }
    if prefix < 1e-14 {
        for _ in elements {
            out.probabilities.push(0.0);
        }
        return Ok(());
    }

    let f = &elements[0];
    let mut g = ComplexMatrix::identity(2).sub(f);
    // Clip the tiny negative eigenvalues that roundoff may introduce.
    let m0 = hermitian_sqrt(f)?;
    let m1 = hermitian_sqrt(&g)?;
    g = m1.mul(&m1);

    let dilation = dilation_unitary(&m0, &m1)?;

    // Fresh extension qubit appended after the register.
    let ext = state.qubit_count();
    let extended = state.append_qubit(C_ONE, C_ZERO);
    let gates = kak_gates(&dilation, qubit, ext)?;
    let pattern = compile_circuit(&Circuit {
        qubit_count: ext + 1,
        gates,
    })?;
    // Any branch realizes the same dilation unitary; force the all-zero
    // one.
    let run = run_pattern(
        &pattern,
        &extended,
        RunMode::Branch {
            outcomes: vec![false; pattern.measurement_count],
        },
    )?
    .into_iter()
    .next()
    .expect("single branch");
    out.measurement_count += pattern.measurement_count;

    // Read the extension qubit through the same fixed coupling.
    let dilated = run.final_state;
    let zero = remote_z_measure(&dilated, ext, RemoteMode::Forced(false), false);
    let one = remote_z_measure(&dilated, ext, RemoteMode::Forced(true), false);
    out.measurement_count += 1;

    let p0 = zero.as_ref().map(|r| r.probability).unwrap_or(0.0);
    let p1 = one.as_ref().map(|r| r.probability).unwrap_or(0.0);
    out.probabilities.push(prefix * p0);

    if prefix * p1 < 1e-14 {
        for _ in 1..elements.len() {
            out.probabilities.push(0.0);
        }
        return Ok(());
    }
    let one = one.expect("positive probability branch");
    let register = drop_extension(&one.post_state, one.outcome);

    // Conditional elements on the surviving branch.
    let g_pinv_sqrt = hermitian_pinv_sqrt(&g)?;
    let conditional: Vec<ComplexMatrix> = elements[1..]
        .iter()
        .map(|e| g_pinv_sqrt.mul(e).mul(&g_pinv_sqrt))
        .collect();
    cascade(register, qubit, &conditional, prefix * p1, out)
}

/// After a remote z-read the extension qubit sits in H|j⟩ as a product
/// factor; contract it away.
fn drop_extension(state: &StateVector, outcome: bool) -> StateVector {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let bra = if outcome {
        [C::new(h, 0.0), C::new(-h, 0.0)]
    } else {
        [C::new(h, 0.0), C::new(h, 0.0)]
    };
    let mut out = state.contract_last_qubit(bra);
    out.normalize();
    out
}

/// Completes the 4×2 isometry with blocks M₀ (extension 0) and M₁
/// (extension 1) into a two-qubit unitary, deterministically.
fn dilation_unitary(m0: &ComplexMatrix, m1: &ComplexMatrix) -> Result<ComplexMatrix> {
    // Joint index = 2·q_bit + ext_bit. The isometry's input is the
    // register qubit with the extension in |0⟩, so register input c sits
    // at joint column 2c; the odd columns are free for completion.
    let mut u = ComplexMatrix::zeros(4, 4);
    for r in 0..2 {
        for c in 0..2 {
            u[(2 * r, 2 * c)] = m0[(r, c)];
            u[(2 * r + 1, 2 * c)] = m1[(r, c)];
        }
    }
    // Gram-Schmidt the standard basis onto the free columns, in a fixed
    // candidate order.
    let mut occupied = vec![0usize, 2];
    let mut free = vec![1usize, 3];
    for k in 0..4 {
        if free.is_empty() {
            break;
        }
        let mut w = [C_ZERO; 4];
        w[k] = C_ONE;
        for &col in &occupied {
            let mut overlap = C_ZERO;
            for row in 0..4 {
                overlap += u[(row, col)].conj() * w[row];
            }
            for row in 0..4 {
                let v = u[(row, col)];
                w[row] -= overlap * v;
            }
        }
        let norm: f64 = w.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            let col = free.remove(0);
            for row in 0..4 {
                u[(row, col)] = w[row] / C::new(norm, 0.0);
            }
            occupied.push(col);
        }
    }
    if !free.is_empty() {
        return Err(AdqcError::InvalidPovm(
            "failed to complete the dilation isometry".into(),
        ));
    }
    u.check_unitary(1e-8)?;
    Ok(u)
}

/// Eigenvalues of a 2×2 Hermitian matrix, (low, high).
fn hermitian_eigenvalues(m: &ComplexMatrix) -> (f64, f64) {
    let a = m[(0, 0)].re;
    let d = m[(1, 1)].re;
    let b = m[(0, 1)];
    let mid = (a + d) / 2.0;
    let rad = ((a - d) * (a - d) / 4.0 + b.norm_sqr()).sqrt();
    (mid - rad, mid + rad)
}

fn hermitian_eigen_decomposition(m: &ComplexMatrix) -> ((f64, [C; 2]), (f64, [C; 2])) {
    let a = m[(0, 0)].re;
    let d = m[(1, 1)].re;
    let b = m[(0, 1)];
    let (lo, hi) = hermitian_eigenvalues(m);
    if b.norm() < 1e-15 {
        if a <= d {
            ((lo, [C_ONE, C_ZERO]), (hi, [C_ZERO, C_ONE]))
        } else {
            ((lo, [C_ZERO, C_ONE]), (hi, [C_ONE, C_ZERO]))
        }
    } else {
        let make = |lam: f64| {
            let v = [b, C::new(lam - a, 0.0)];
            let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
            [v[0] / C::new(n, 0.0), v[1] / C::new(n, 0.0)]
        };
        ((lo, make(lo)), (hi, make(hi)))
    }
}

fn hermitian_apply(m: &ComplexMatrix, f: impl Fn(f64) -> f64) -> ComplexMatrix {
    let ((l0, v0), (l1, v1)) = hermitian_eigen_decomposition(m);
    let mut out = ComplexMatrix::zeros(2, 2);
    for (lam, v) in [(f(l0), v0), (f(l1), v1)] {
        for i in 0..2 {
            for j in 0..2 {
                out[(i, j)] += C::new(lam, 0.0) * v[i] * v[j].conj();
            }
        }
    }
    out
}

/// Hermitian PSD square root (negative roundoff eigenvalues clipped).
fn hermitian_sqrt(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    Ok(hermitian_apply(m, |l| l.max(0.0).sqrt()))
}

/// Pseudo-inverse square root with eigenvalue cutoff 1e-12.
fn hermitian_pinv_sqrt(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    Ok(hermitian_apply(m, |l| {
        if l > 1e-12 {
            1.0 / l.sqrt()
        } else {
            0.0
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compiler::compile_single_qubit;
    use crate::linalg::{random_unitary_2x2, states_equal_up_to_phase};
    use rand::SeedableRng;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn rng() -> ChaCha12Rng {
        ChaCha12Rng::seed_from_u64(0x51)
    }

    fn plus_state(n: usize) -> StateVector {
        let h = C::new(FRAC_1_SQRT_2, 0.0);
        StateVector::product(&vec![[h, h]; n])
    }

    #[test]
    fn compiled_h_enumerates_to_plus() {
        let pattern = compile_single_qubit(&hadamard(), 0).unwrap();
        let input = StateVector::basis_state(1, 0);
        let results = run_pattern(&pattern, &input, RunMode::Enumerate).unwrap();
        assert_eq!(results.len(), 16);
        let plus = plus_state(1);
        let mut total = 0.0;
        for r in &results {
            assert!((r.branch_probability - 1.0 / 16.0).abs() < 1e-12);
            total += r.branch_probability;
            assert!(states_equal_up_to_phase(&r.final_state, &plus, 1e-9).is_some());
        }
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn empty_pattern_returns_input() {
        let pattern = compile_circuit(&Circuit {
            qubit_count: 2,
            gates: vec![],
        })
        .unwrap();
        let mut r = rng();
        let input = StateVector::random(2, &mut r);
        let results = run_pattern(&pattern, &input, RunMode::Enumerate).unwrap();
        assert_eq!(results.len(), 1);
        assert!((results[0].branch_probability - 1.0).abs() < 1e-15);
        assert!(states_equal_up_to_phase(&results[0].final_state, &input, 1e-12).is_some());
    }

    #[test]
    fn compiled_cz_circuit_entangles_plus_plus() {
        let pattern = compile_circuit(&Circuit {
            qubit_count: 2,
            gates: vec![Gate::Cz { q1: 0, q2: 1 }],
        })
        .unwrap();
        let input = plus_state(2);
        let expected = apply_to_qubits(&cz(), &input, &[0, 1]).unwrap();
        let results = run_pattern(&pattern, &input, RunMode::Enumerate).unwrap();
        assert_eq!(results.len(), 1 << 9);
        for r in &results {
            assert!(
                states_equal_up_to_phase(&r.final_state, &expected, 1e-8).is_some(),
                "branch {:?} diverged",
                r.outcomes
            );
            assert!((r.branch_probability - 1.0 / 512.0).abs() < 1e-12);
        }
    }

    #[test]
    fn standalone_cz_fragment_with_recorded_corrections() {
        // The unflushed fragment's final frame carries H·S†·Z^j; applying
        // its inverse must leave CZ|++⟩ in every branch.
        let pattern = crate::compiler::compile_cz(0, 1).unwrap();
        let input = plus_state(2);
        let expected = apply_to_qubits(&cz(), &input, &[0, 1]).unwrap();
        for r in run_pattern(&pattern, &input, RunMode::Enumerate).unwrap() {
            assert!(states_equal_up_to_phase(&r.final_state, &expected, 1e-9).is_some());
        }
    }

    #[test]
    fn double_cz_is_identity() {
        let pattern = compile_circuit(&Circuit {
            qubit_count: 2,
            gates: vec![Gate::Cz { q1: 0, q2: 1 }, Gate::Cz { q1: 0, q2: 1 }],
        })
        .unwrap();
        let mut r = rng();
        let input = StateVector::random(2, &mut r);
        // 18 measurements: sample a handful of branches instead.
        for seed in 0..6 {
            let run = run_pattern(&pattern, &input, RunMode::Sample { seed })
                .unwrap()
                .remove(0);
            assert!(states_equal_up_to_phase(&run.final_state, &input, 1e-8).is_some());
        }
    }

    #[test]
    fn every_measurement_is_unbiased_in_compiled_patterns() {
        let mut r = rng();
        let u = random_unitary_2x2(&mut r);
        let pattern = compile_circuit(&Circuit {
            qubit_count: 2,
            gates: vec![
                Gate::SingleQubit { qubit: 0, matrix: u },
                Gate::Cz { q1: 0, q2: 1 },
            ],
        })
        .unwrap();
        let input = StateVector::random(2, &mut r);
        let results = run_pattern(&pattern, &input, RunMode::Enumerate).unwrap();
        let m = pattern.measurement_count;
        assert_eq!(results.len(), 1 << m);
        for res in &results {
            assert!((res.branch_probability - 0.5f64.powi(m as i32)).abs() < 1e-12);
        }
    }

    #[test]
    fn sampled_runs_are_reproducible() {
        let pattern = compile_single_qubit(&hadamard(), 0).unwrap();
        let input = StateVector::basis_state(1, 1);
        let a = run_pattern(&pattern, &input, RunMode::Sample { seed: 42 }).unwrap();
        let b = run_pattern(&pattern, &input, RunMode::Sample { seed: 42 }).unwrap();
        assert_eq!(a[0].outcomes, b[0].outcomes);
        assert_eq!(
            a[0].final_state.amplitudes(),
            b[0].final_state.amplitudes()
        );
        let c = run_pattern(&pattern, &input, RunMode::Sample { seed: 43 }).unwrap();
        let _ = c;
    }

    #[test]
    fn branch_mode_rejects_impossible_outcomes() {
        // Remote z-measurement of |0⟩ cannot give outcome 1; build the
        // analogous situation with a z-axis pattern by hand.
        let state = StateVector::basis_state(1, 0);
        assert!(matches!(
            remote_z_measure(&state, 0, RemoteMode::Forced(true), false),
            Err(AdqcError::ImpossibleOutcome)
        ));
    }

    #[test]
    fn verify_pattern_accepts_correct_and_flags_wrong() {
        let pattern = compile_single_qubit(&hadamard(), 0).unwrap();
        let good = verify_pattern(&pattern, &hadamard(), 3, 7).unwrap();
        assert!(good.max_infidelity < 1e-8, "{}", good.max_infidelity);
        assert!(good.branches_checked >= 16);
        let bad = verify_pattern(&pattern, &pauli_x(), 3, 7).unwrap();
        assert!(bad.max_infidelity > 0.4, "{}", bad.max_infidelity);
    }

    #[test]
    fn remote_measurement_statistics_match_born_rule() {
        let mut r = rng();
        for _ in 0..20 {
            let state = StateVector::random(3, &mut r);
            let q = 1;
            let zero = remote_z_measure(&state, q, RemoteMode::Forced(false), false).unwrap();
            let one = remote_z_measure(&state, q, RemoteMode::Forced(true), false).unwrap();
            assert!((zero.probability + one.probability - 1.0).abs() < 1e-12);
            // Direct Born weights: project qubit q on |0⟩.
            let mut p0 = 0.0;
            let bit = state.qubit_count() - 1 - q;
            for (idx, amp) in state.amplitudes().iter().enumerate() {
                if idx >> bit & 1 == 0 {
                    p0 += amp.norm_sqr();
                }
            }
            assert!((zero.probability - p0).abs() < 1e-12);
            assert!((zero.post_state.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn remote_measurement_of_basis_states() {
        let zero = StateVector::basis_state(1, 0);
        let res = remote_z_measure(&zero, 0, RemoteMode::Sample { seed: 5 }, false).unwrap();
        assert!(!res.outcome);
        assert!((res.probability - 1.0).abs() < 1e-12);
        assert!(states_equal_up_to_phase(&res.post_state, &plus_state(1), 1e-10).is_some());

        let one = StateVector::basis_state(1, 1);
        let res = remote_z_measure(&one, 0, RemoteMode::Sample { seed: 5 }, false).unwrap();
        assert!(res.outcome);
        let minus = StateVector::product(&[[
            C::new(FRAC_1_SQRT_2, 0.0),
            C::new(-FRAC_1_SQRT_2, 0.0),
        ]]);
        assert!(states_equal_up_to_phase(&res.post_state, &minus, 1e-10).is_some());

        // Restoring maps H|j⟩ back to |j⟩.
        let res = remote_z_measure(&one, 0, RemoteMode::Forced(true), true).unwrap();
        assert!(states_equal_up_to_phase(&res.post_state, &one, 1e-8).is_some());
    }

    fn trine_spec() -> PovmSpec {
        let elements = (0..3)
            .map(|i| {
                let theta = 2.0 * std::f64::consts::PI * i as f64 / 3.0;
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

    #[test]
    fn projective_povm_reduces_to_standard_measurement() {
        let spec = PovmSpec {
            elements: vec![
                ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, 0.0]]),
                ComplexMatrix::from_real_rows(&[&[0.0, 0.0], &[0.0, 1.0]]),
            ],
        };
        let mut r = rng();
        for _ in 0..5 {
            let state = StateVector::random(1, &mut r);
            let out = povm_neumark(&spec, &state, 0).unwrap();
            let a0 = state.amplitudes()[0].norm_sqr();
            assert!((out.probabilities[0] - a0).abs() < 1e-8);
            assert!((out.probabilities[1] - (1.0 - a0)).abs() < 1e-8);
            assert!(out.measurement_count > 0);
        }
    }

    #[test]
    fn trine_povm_on_zero_state() {
        let spec = trine_spec();
        spec.validate().unwrap();
        let state = StateVector::basis_state(1, 0);
        let out = povm_neumark(&spec, &state, 0).unwrap();
        assert!((out.probabilities[0] - 2.0 / 3.0).abs() < 1e-8);
        assert!((out.probabilities[1] - 1.0 / 6.0).abs() < 1e-8);
        assert!((out.probabilities[2] - 1.0 / 6.0).abs() < 1e-8);
    }

    #[test]
    fn trine_povm_matches_trace_rule_on_random_states() {
        let spec = trine_spec();
        let mut r = rng();
        for _ in 0..10 {
            let state = StateVector::random(1, &mut r);
            let out = povm_neumark(&spec, &state, 0).unwrap();
            let total: f64 = out.probabilities.iter().sum();
            assert!((total - 1.0).abs() < 1e-8);
            for (i, e) in spec.elements.iter().enumerate() {
                let expect = expectation(e, &state);
                assert!(
                    (out.probabilities[i] - expect).abs() < 1e-8,
                    "element {i}: {} vs {}",
                    out.probabilities[i],
                    expect
                );
            }
        }
    }

    #[test]
    fn coin_povm_is_state_independent() {
        let spec = PovmSpec {
            elements: vec![
                ComplexMatrix::identity(2).scale(C::new(0.5, 0.0)),
                ComplexMatrix::identity(2).scale(C::new(0.5, 0.0)),
            ],
        };
        let mut r = rng();
        let state = StateVector::random(1, &mut r);
        let out = povm_neumark(&spec, &state, 0).unwrap();
        assert!((out.probabilities[0] - 0.5).abs() < 1e-8);
        assert!((out.probabilities[1] - 0.5).abs() < 1e-8);
    }

    #[test]
    fn tetrahedral_povm_runs_three_cascade_rounds() {
        // Four outcomes: E_i = (1 + n_i·σ)/4 over tetrahedron directions.
        let dirs = [
            [1.0, 1.0, 1.0],
            [1.0, -1.0, -1.0],
            [-1.0, 1.0, -1.0],
            [-1.0, -1.0, 1.0],
        ];
        let s3 = 3.0f64.sqrt();
        let elements = dirs
            .iter()
            .map(|n| {
                let p = crate::kernel::GeneralizedPauli::new(n[0] / s3, n[1] / s3, n[2] / s3);
                ComplexMatrix::identity(2)
                    .add(&p.matrix())
                    .scale(C::new(0.25, 0.0))
            })
            .collect();
        let spec = PovmSpec { elements };
        spec.validate().unwrap();
        let mut r = rng();
        for _ in 0..5 {
            let state = StateVector::random(1, &mut r);
            let out = povm_neumark(&spec, &state, 0).unwrap();
            assert_eq!(out.probabilities.len(), 4);
            let total: f64 = out.probabilities.iter().sum();
            assert!((total - 1.0).abs() < 1e-8);
            for (i, e) in spec.elements.iter().enumerate() {
                assert!((out.probabilities[i] - expectation(e, &state)).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn povm_with_too_many_outcomes_is_rejected() {
        let spec = PovmSpec {
            elements: vec![ComplexMatrix::identity(2).scale(C::new(0.2, 0.0)); 5],
        };
        assert!(matches!(
            povm_neumark(&spec, &StateVector::basis_state(1, 0), 0),
            Err(AdqcError::InvalidPovm(_))
        ));
    }

    #[test]
    fn verify_pattern_on_compiled_cz() {
        let pattern = compile_circuit(&Circuit {
            qubit_count: 2,
            gates: vec![Gate::Cz { q1: 0, q2: 1 }],
        })
        .unwrap();
        let report = verify_pattern(&pattern, &cz(), 2, 3).unwrap();
        assert!(report.max_infidelity < 1e-8, "{}", report.max_infidelity);
    }

    #[test]
    fn broken_povm_is_rejected() {
        let spec = PovmSpec {
            elements: vec![
                ComplexMatrix::identity(2).scale(C::new(0.6, 0.0)),
                ComplexMatrix::identity(2).scale(C::new(0.6, 0.0)),
            ],
        };
        assert!(matches!(
            povm_neumark(&spec, &StateVector::basis_state(1, 0), 0),
            Err(AdqcError::InvalidPovm(_))
        ));
    }

    #[test]
    fn povm_works_on_embedded_register_qubits() {
        let mut r = rng();
        let spec = trine_spec();
        let single = StateVector::random(1, &mut r);
        let other = StateVector::random(1, &mut r);
        let embedded = StateVector::new(
            2,
            tensor_amplitudes(other.amplitudes(), single.amplitudes()),
        )
        .unwrap();
        let direct = povm_neumark(&spec, &single, 0).unwrap();
        let emb = povm_neumark(&spec, &embedded, 1).unwrap();
        for (a, b) in direct.probabilities.iter().zip(&emb.probabilities) {
            assert!((a - b).abs() < 1e-8);
        }
    }

    fn tensor_amplitudes(a: &[C], b: &[C]) -> Vec<C> {
        let mut out = Vec::with_capacity(a.len() * b.len());
        for x in a {
            for y in b {
                out.push(x * y);
            }
        }
        out
    }

    fn expectation(e: &ComplexMatrix, state: &StateVector) -> f64 {
        let mut acc = C_ZERO;
        for i in 0..2 {
            for j in 0..2 {
                acc += state.amplitudes()[i].conj() * e[(i, j)] * state.amplitudes()[j];
            }
        }
        acc.re
    }

    #[test]
    fn hermitian_sqrt_squares_back() {
        let mut r = rng();
        for _ in 0..20 {
            let u = random_unitary_2x2(&mut r);
            // PSD matrix U diag(0.3, 1.4) U†.
            let d = ComplexMatrix::from_real_rows(&[&[0.3, 0.0], &[0.0, 1.4]]);
            let m = u.mul(&d).mul(&u.dagger());
            let s = hermitian_sqrt(&m).unwrap();
            assert!(s.mul(&s).sub(&m).frobenius_norm() < 1e-10);
            let pinv = hermitian_pinv_sqrt(&m).unwrap();
            let prod = pinv.mul(&m).mul(&pinv);
            assert!(prod.sub(&ComplexMatrix::identity(2)).frobenius_norm() < 1e-9);
        }
    }

    #[test]
    fn dilation_unitary_blocks_are_the_roots() {
        let spec = trine_spec();
        let m0 = hermitian_sqrt(&spec.elements[0]).unwrap();
        let g = ComplexMatrix::identity(2).sub(&spec.elements[0]);
        let m1 = hermitian_sqrt(&g).unwrap();
        let u = dilation_unitary(&m0, &m1).unwrap();
        assert!(u.is_unitary(1e-10));
        for r in 0..2 {
            for c in 0..2 {
                assert!((u[(2 * r, 2 * c)] - m0[(r, c)]).norm() < 1e-12);
                assert!((u[(2 * r + 1, 2 * c)] - m1[(r, c)]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn enumerate_refuses_large_patterns() {
        let mut gates = Vec::new();
        for _ in 0..6 {
            gates.push(Gate::SingleQubit {
                qubit: 0,
                matrix: hadamard(),
            });
        }
        let pattern = compile_circuit(&Circuit {
            qubit_count: 1,
            gates,
        })
        .unwrap();
        assert_eq!(pattern.measurement_count, 24);
        assert!(matches!(
            run_pattern(
                &pattern,
                &StateVector::basis_state(1, 0),
                RunMode::Enumerate
            ),
            Err(AdqcError::EnumerationTooLarge(24))
        ));
    }
}
