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

//! Compiles register circuits into ancilla-driven measurement patterns.
//!
//! Everything is built from J(β) = e^{iβX/2}·H. Preparing the ancilla in
//! |+⟩, coupling E = (H⊗H)·CZ to a register qubit and measuring the
//! ancilla in the equatorial basis {(|0⟩ ± e^{iβ}|1⟩)/√2} implements
//! X^j · J(β)/√2 on that qubit, so four such steps realize any
//! single-qubit unitary U = e^{iα} J(0) J(β) J(γ) J(δ). Coupling the
//! ancilla to two register qubits and measuring in the y-basis mediates
//! CZ with local corrections U(j) = H·((1+iZ)/√2)·Z^j on both qubits.
//!
//! Corrections never touch the register. The Pauli part X^s Z^t of each
//! qubit's pending correction is absorbed by adapting later measurement
//! angles through J(β)·X = Z·J(−β) and J(β)·Z = X·J(β); the non-Pauli
//! H·S† residue left by a CZ step is flushed by an explicitly compiled
//! single-qubit fragment immediately after the step. What survives to the
//! end is a per-qubit Pauli, fixed by a final local basis redefinition
//! recorded as XOR masks over measurement outcomes.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{AdqcError, Result};
use crate::linalg::{
    apply_to_qubits, hadamard, phase_s, x_rotation, ComplexMatrix, StateVector, C,
};

/// J(β) = e^{iβX/2}·H, the single generator behind every compiled step.
pub fn j_matrix(beta: f64) -> ComplexMatrix {
    x_rotation(beta).mul(&hadamard())
}

/// Angles of U = e^{iα} J(0) J(β) J(γ) J(δ); equivalently the Z-X-Z Euler
/// form U = e^{iα} e^{iβZ/2} e^{iγX/2} e^{iδZ/2}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EulerJAngles {
    pub global_phase: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
}

impl EulerJAngles {
    /// Multiplies the four J factors (and the phase) back together.
    pub fn reconstruct(&self) -> ComplexMatrix {
        j_matrix(0.0)
            .mul(&j_matrix(self.beta))
            .mul(&j_matrix(self.gamma))
            .mul(&j_matrix(self.delta))
            .scale(C::from_polar(1.0, self.global_phase))
    }

    /// Base measurement angles in temporal order: J(δ) runs first, J(0)
    /// last.
    pub fn step_angles(&self) -> [f64; 4] {
        [self.delta, self.gamma, self.beta, 0.0]
    }
}

/// Decomposes a single-qubit unitary into J angles.
///
/// Angles land in (−π, π]; near the branch cut the representative with the
/// smallest |β|+|γ|+|δ| wins, ties broken lexicographically.
pub fn euler_j(u: &ComplexMatrix) -> Result<EulerJAngles> {
    if u.rows() != 2 || u.cols() != 2 {
        return Err(AdqcError::DimensionMismatch(
            "euler_j needs a 2x2 matrix".into(),
        ));
    }
    u.check_unitary(1e-10)?;

    let alpha = u.determinant().arg() / 2.0;
    let v = u.scale(C::from_polar(1.0, -alpha));

    // v = [[c·e^{i(β+δ)/2}, i·s·e^{−i(δ−β)/2}], [i·s·e^{i(δ−β)/2}, …]]
    // with c = cos(γ/2), s = sin(γ/2).
    let c = v[(0, 0)].norm();
    let s = v[(1, 0)].norm();
    let gamma = 2.0 * s.atan2(c);
    let (beta, delta) = if s < 1e-12 {
        (2.0 * v[(0, 0)].arg(), 0.0)
    } else if c < 1e-12 {
        (0.0, 2.0 * (v[(1, 0)].arg() - FRAC_PI_2))
    } else {
        let sum = 2.0 * v[(0, 0)].arg();
        let diff = 2.0 * (v[(1, 0)].arg() - FRAC_PI_2);
        ((sum - diff) / 2.0, (sum + diff) / 2.0)
    };

    // Candidate representatives: the SU(2) sign lift flips γ and shifts
    // β, δ and the phase by π. Rotation angles have period 4π, so folding
    // one of them by 2π costs a sign that moves into the phase.
    let base = fold_candidate(alpha, beta, gamma, delta);
    let alternate = fold_candidate(alpha + PI, beta + PI, -gamma, delta + PI);
    let weight = |e: &EulerJAngles| e.beta.abs() + e.gamma.abs() + e.delta.abs();
    let candidates = [base, alternate];
    let mut pick = candidates[0];
    for cand in &candidates[1..] {
        let (w0, w1) = (weight(&pick), weight(cand));
        if w1 < w0 - 1e-12
            || ((w1 - w0).abs() <= 1e-12
                && (cand.beta, cand.gamma, cand.delta) < (pick.beta, pick.gamma, pick.delta))
        {
            pick = *cand;
        }
    }

    let err = pick.reconstruct().sub(u).frobenius_norm();
    if err > 1e-9 {
        return Err(AdqcError::DecompositionFailed(format!(
            "euler_j reconstruction residual {err:.3e}"
        )));
    }
    Ok(pick)
}

/// XOR set of measurement ids; the parity of the selected outcomes drives
/// angle signs and the final frame.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutcomeMask {
    words: Vec<u64>,
}

impl OutcomeMask {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn toggle(&mut self, id: usize) {
        let word = id / 64;
        if self.words.len() <= word {
            self.words.resize(word + 1, 0);
        }
        self.words[word] ^= 1u64 << (id % 64);
    }

    pub fn xor_assign(&mut self, other: &OutcomeMask) {
        if self.words.len() < other.words.len() {
            self.words.resize(other.words.len(), 0);
        }
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w ^= o;
        }
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    /// Parity of the masked outcomes.
    pub fn parity(&self, outcomes: &[bool]) -> bool {
        let mut p = false;
        for id in self.indices() {
            if id < outcomes.len() && outcomes[id] {
                p = !p;
            }
        }
        p
    }

    pub fn indices(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (wi, w) in self.words.iter().enumerate() {
            let mut bits = *w;
            while bits != 0 {
                let b = bits.trailing_zeros() as usize;
                out.push(wi * 64 + b);
                bits &= bits - 1;
            }
        }
        out
    }

    pub fn from_indices(ids: &[usize]) -> Self {
        let mut m = Self::new();
        for &id in ids {
            m.toggle(id);
        }
        m
    }
}

/// Measurement axis of a pattern step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MeasureAxis {
    /// Equatorial basis {(|0⟩ ± e^{iθ}|1⟩)/√2} at an adapted angle θ.
    XPlane,
    /// Fixed y-basis {(|0⟩ ± i|1⟩)/√2}, used by CZ mediation.
    YBasis,
    /// Computational basis, used by remote register readout.
    ZBasis,
}

/// One step of an ancilla-driven program.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum PatternStep {
    PrepareAncilla { gamma: f64, delta: f64 },
    Couple { qubits: Vec<usize> },
    MeasureAncilla {
        id: usize,
        axis: MeasureAxis,
        base_angle: f64,
        /// Ids of earlier measurements whose outcome parity flips the
        /// measurement angle's sign.
        adapt_from: OutcomeMask,
    },
}

/// Non-Pauli residue pending on a qubit. The CZ mediation leaves H·S†;
/// compiled fragments clear it, so only these two values ever occur.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ResidualKind {
    Identity,
    HTimesSdag,
}

impl ResidualKind {
    pub fn matrix(&self) -> ComplexMatrix {
        match self {
            ResidualKind::Identity => ComplexMatrix::identity(2),
            ResidualKind::HTimesSdag => hadamard().mul(&phase_s().dagger()),
        }
    }
}

/// Final per-qubit frame: the physical state carries
/// residual · X^s Z^t relative to the logical state, with s and t the
/// parities of the masked outcomes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameRule {
    pub x_mask: OutcomeMask,
    pub z_mask: OutcomeMask,
    pub residual: ResidualKind,
}

/// An ordered ancilla-driven program with its final frame rule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pattern {
    pub qubit_count: usize,
    pub steps: Vec<PatternStep>,
    pub measurement_count: usize,
    pub final_frame: Vec<FrameRule>,
}

impl Pattern {
    /// Structural invariant: every measurement is preceded (since the last
    /// measurement) by exactly one preparation and at least one coupling,
    /// and adaptation masks only reference earlier measurements.
    pub fn validate(&self) -> Result<()> {
        let mut preps = 0usize;
        let mut couples = 0usize;
        let mut seen = 0usize;
        for step in &self.steps {
            match step {
                PatternStep::PrepareAncilla { .. } => preps += 1,
                PatternStep::Couple { qubits } => {
                    if qubits.is_empty() || qubits.len() > 2 {
                        return Err(AdqcError::InvalidCircuit(
                            "couple step needs 1 or 2 register qubits".into(),
                        ));
                    }
                    for &q in qubits {
                        if q >= self.qubit_count {
                            return Err(AdqcError::BadQubitIndex {
                                index: q,
                                qubit_count: self.qubit_count,
                            });
                        }
                    }
                    couples += 1;
                }
                PatternStep::MeasureAncilla { id, adapt_from, .. } => {
                    if preps != 1 || couples == 0 {
                        return Err(AdqcError::InvalidCircuit(format!(
                            "measurement {id} not preceded by exactly one preparation and \
                             at least one coupling"
                        )));
                    }
                    if *id != seen {
                        return Err(AdqcError::InvalidCircuit(format!(
                            "measurement ids must be sequential, got {id} expected {seen}"
                        )));
                    }
                    if adapt_from.indices().iter().any(|&m| m >= *id) {
                        return Err(AdqcError::InvalidCircuit(format!(
                            "measurement {id} adapts from a later step"
                        )));
                    }
                    seen += 1;
                    preps = 0;
                    couples = 0;
                }
            }
        }
        if seen != self.measurement_count {
            return Err(AdqcError::InvalidCircuit(
                "measurement_count does not match the steps".into(),
            ));
        }
        Ok(())
    }
}

/// Runtime correction frame of one qubit.
#[derive(Debug, Clone)]
pub struct CorrectionFrame {
    pub pauli_x_power: bool,
    pub pauli_z_power: bool,
    pub residual: ComplexMatrix,
}

impl CorrectionFrame {
    pub fn identity() -> Self {
        Self {
            pauli_x_power: false,
            pauli_z_power: false,
            residual: ComplexMatrix::identity(2),
        }
    }
}

/// Frame update attached to an adapted measurement: outcome j turns frame
/// (s, t) into (j ⊕ t, s).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FrameUpdate {
    prior_s: bool,
    prior_t: bool,
}

impl FrameUpdate {
    pub fn apply(&self, outcome: bool) -> (bool, bool) {
        (outcome ^ self.prior_t, self.prior_s)
    }
}

/// Measurement angle for implementing J(base) through a Pauli-only frame:
/// the angle is (−1)^s · base and the outcome updates the frame by
/// `FrameUpdate`. A pending non-Pauli residual cannot be adapted through.
pub fn adapt_angle(base: f64, frame: &CorrectionFrame) -> Result<(f64, FrameUpdate)> {
    if frame
        .residual
        .sub(&ComplexMatrix::identity(2))
        .frobenius_norm()
        > 1e-10
    {
        return Err(AdqcError::UnflushedResidual);
    }
    let angle = if frame.pauli_x_power { -base } else { base };
    Ok((
        angle,
        FrameUpdate {
            prior_s: frame.pauli_x_power,
            prior_t: frame.pauli_z_power,
        },
    ))
}

/// A register circuit: single-qubit unitaries and CZ gates.
#[derive(Debug, Clone)]
pub enum Gate {
    SingleQubit { qubit: usize, matrix: ComplexMatrix },
    Cz { q1: usize, q2: usize },
}

#[derive(Debug, Clone)]
pub struct Circuit {
    pub qubit_count: usize,
    pub gates: Vec<Gate>,
}

impl Circuit {
    pub fn validate(&self) -> Result<()> {
        for gate in &self.gates {
            match gate {
                Gate::SingleQubit { qubit, matrix } => {
                    if *qubit >= self.qubit_count {
                        return Err(AdqcError::BadQubitIndex {
                            index: *qubit,
                            qubit_count: self.qubit_count,
                        });
                    }
                    if matrix.rows() != 2 || matrix.cols() != 2 {
                        return Err(AdqcError::InvalidCircuit(
                            "single-qubit gate matrix must be 2x2".into(),
                        ));
                    }
                    matrix.check_unitary(1e-9)?;
                }
                Gate::Cz { q1, q2 } => {
                    if q1 == q2 {
                        return Err(AdqcError::InvalidCircuit(
                            "cz needs two distinct qubits".into(),
                        ));
                    }
                    for q in [q1, q2] {
                        if *q >= self.qubit_count {
                            return Err(AdqcError::BadQubitIndex {
                                index: *q,
                                qubit_count: self.qubit_count,
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// The circuit's unitary on 2^n amplitudes, for verification.
    pub fn unitary(&self) -> Result<ComplexMatrix> {
        self.validate()?;
        let dim = 1usize << self.qubit_count;
        let mut out = ComplexMatrix::zeros(dim, dim);
        for col in 0..dim {
            let mut state = StateVector::basis_state(self.qubit_count, col);
            for gate in &self.gates {
                state = match gate {
                    Gate::SingleQubit { qubit, matrix } => {
                        apply_to_qubits(matrix, &state, &[*qubit])?
                    }
                    Gate::Cz { q1, q2 } => {
                        apply_to_qubits(&crate::linalg::cz(), &state, &[*q1, *q2])?
                    }
                };
            }
            for row in 0..dim {
                out[(row, col)] = state.amplitudes()[row];
            }
        }
        Ok(out)
    }
}

/// Symbolic (compile-time) frame: outcome masks instead of bits.
#[derive(Debug, Clone, Default)]
struct SymbolicFrame {
    s: OutcomeMask,
    t: OutcomeMask,
    dirty: bool,
}

struct Compiler {
    qubit_count: usize,
    steps: Vec<PatternStep>,
    frames: Vec<SymbolicFrame>,
    next_id: usize,
}

impl Compiler {
    fn new(qubit_count: usize) -> Self {
        Self {
            qubit_count,
            steps: Vec::new(),
            frames: vec![SymbolicFrame::default(); qubit_count],
            next_id: 0,
        }
    }

    /// prepare |+⟩ — couple E — measure the x-plane at ±base.
    fn j_step(&mut self, qubit: usize, base_angle: f64) {
        let id = self.next_id;
        self.next_id += 1;
        self.steps.push(PatternStep::PrepareAncilla {
            gamma: FRAC_PI_2,
            delta: 0.0,
        });
        self.steps.push(PatternStep::Couple {
            qubits: vec![qubit],
        });
        self.steps.push(PatternStep::MeasureAncilla {
            id,
            axis: MeasureAxis::XPlane,
            base_angle,
            adapt_from: self.frames[qubit].s.clone(),
        });
        // (s, t) ← (j ⊕ t, s)
        let old_s = std::mem::take(&mut self.frames[qubit].s);
        let mut new_s = std::mem::take(&mut self.frames[qubit].t);
        new_s.toggle(id);
        self.frames[qubit].s = new_s;
        self.frames[qubit].t = old_s;
    }

    /// prepare |+⟩ — couple both qubits — measure the y-basis.
    fn cz_step(&mut self, q1: usize, q2: usize) {
        debug_assert!(!self.frames[q1].dirty && !self.frames[q2].dirty);
        let id = self.next_id;
        self.next_id += 1;
        self.steps.push(PatternStep::PrepareAncilla {
            gamma: FRAC_PI_2,
            delta: 0.0,
        });
        self.steps.push(PatternStep::Couple {
            qubits: vec![q1, q2],
        });
        self.steps.push(PatternStep::MeasureAncilla {
            id,
            axis: MeasureAxis::YBasis,
            base_angle: 0.0,
            adapt_from: OutcomeMask::new(),
        });
        // CZ pushes each qubit's X onto the partner's Z, and the branch
        // correction contributes H·S†·Z^j per qubit.
        let s1 = self.frames[q1].s.clone();
        let s2 = self.frames[q2].s.clone();
        self.frames[q1].t.xor_assign(&s2);
        self.frames[q1].t.toggle(id);
        self.frames[q2].t.xor_assign(&s1);
        self.frames[q2].t.toggle(id);
        self.frames[q1].dirty = true;
        self.frames[q2].dirty = true;
    }

    /// Clears a pending H·S† residue with a compiled fragment for its
    /// inverse S·H = e^{−iπ/4} J(0) J(0) J(π/2) J(π/2).
    fn flush(&mut self, qubit: usize) {
        if !self.frames[qubit].dirty {
            return;
        }
        // Rewriting R·X^sZ^t = (R X^sZ^t R†)·R moves the Pauli in front of
        // the residue; conjugation by H·S† maps X ↦ Y ~ XZ and Z ↦ X,
        // i.e. (s, t) ↦ (s ⊕ t, s).
        let old_s = self.frames[qubit].s.clone();
        let old_t = self.frames[qubit].t.clone();
        let mut new_s = old_s.clone();
        new_s.xor_assign(&old_t);
        self.frames[qubit].s = new_s;
        self.frames[qubit].t = old_s;
        self.frames[qubit].dirty = false;
        for angle in [FRAC_PI_2, FRAC_PI_2, 0.0, 0.0] {
            self.j_step(qubit, angle);
        }
    }

    fn single_qubit(&mut self, qubit: usize, u: &ComplexMatrix) -> Result<()> {
        self.flush(qubit);
        let angles = euler_j(u)?;
        for angle in angles.step_angles() {
            self.j_step(qubit, angle);
        }
        Ok(())
    }

    fn finish(self) -> Pattern {
        let final_frame = self
            .frames
            .into_iter()
            .map(|f| FrameRule {
                x_mask: f.s,
                z_mask: f.t,
                residual: if f.dirty {
                    ResidualKind::HTimesSdag
                } else {
                    ResidualKind::Identity
                },
            })
            .collect();
        Pattern {
            qubit_count: self.qubit_count,
            steps: self.steps,
            measurement_count: self.next_id,
            final_frame,
        }
    }
}

/// Four prepare–couple–measure triples implementing a single-qubit
/// unitary on `qubit` (J(δ), J(γ), J(β), J(0) in temporal order).
pub fn compile_single_qubit(u: &ComplexMatrix, qubit: usize) -> Result<Pattern> {
    let mut c = Compiler::new(qubit + 1);
    c.single_qubit(qubit, u)?;
    Ok(c.finish())
}

/// One prepare–couple(q1,q2)–measure(y) step mediating CZ. The
/// outcome-dependent corrections H·((1+iZ)/√2)·Z^j stay recorded in the
/// fragment's final frame (H·S† residue plus a Z mask); `compile_circuit`
/// flushes them with explicit fragments.
pub fn compile_cz(q1: usize, q2: usize) -> Result<Pattern> {
    if q1 == q2 {
        return Err(AdqcError::InvalidCircuit(
            "cz needs two distinct qubits".into(),
        ));
    }
    let mut c = Compiler::new(q1.max(q2) + 1);
    c.cz_step(q1, q2);
    Ok(c.finish())
}

/// Compiles a circuit into one pattern: single-qubit gates become
/// 4-measurement fragments, each CZ becomes one y-measured mediation step
/// followed by a flush fragment on both involved qubits.
pub fn compile_circuit(circuit: &Circuit) -> Result<Pattern> {
    circuit.validate()?;
    let mut c = Compiler::new(circuit.qubit_count);
    for gate in &circuit.gates {
        match gate {
            Gate::SingleQubit { qubit, matrix } => c.single_qubit(*qubit, matrix)?,
            Gate::Cz { q1, q2 } => {
                c.flush(*q1);
                c.flush(*q2);
                c.cz_step(*q1, *q2);
                c.flush(*q1);
                c.flush(*q2);
            }
        }
    }
    for q in 0..circuit.qubit_count {
        c.flush(q);
    }
    Ok(c.finish())
}

/// Synthesizes a two-qubit unitary into {single-qubit, CZ} gates via the
/// canonical decomposition, up to global phase. `q_high` is the first
/// tensor slot of the 4×4 matrix.
pub fn kak_gates(u: &ComplexMatrix, q_high: usize, q_low: usize) -> Result<Vec<Gate>> {
    let form = crate::kak::kak_decompose(u)?;
    let mut gates = Vec::new();
    let single = |q: usize, m: ComplexMatrix| Gate::SingleQubit { qubit: q, matrix: m };

    gates.push(single(q_high, form.v_ancilla.clone()));
    gates.push(single(q_low, form.v_register.clone()));

    // D(α) = e^{−iαx XX} e^{−iαy YY} e^{−iαz ZZ}; each factor is a ZZ
    // rotation conjugated into the right axis, and
    // e^{−icZZ} = CX · (1 ⊗ e^{−icZ}) · CX with CX = (1⊗H)·CZ·(1⊗H).
    let zz_block = |gates: &mut Vec<Gate>, angle: f64| {
        gates.push(single(q_low, hadamard()));
        gates.push(Gate::Cz {
            q1: q_high,
            q2: q_low,
        });
        gates.push(single(q_low, hadamard()));
        gates.push(single(q_low, crate::linalg::z_rotation(-2.0 * angle)));
        gates.push(single(q_low, hadamard()));
        gates.push(Gate::Cz {
            q1: q_high,
            q2: q_low,
        });
        gates.push(single(q_low, hadamard()));
    };

    if form.alpha_z.abs() > 1e-12 {
        zz_block(&mut gates, form.alpha_z);
    }
    if form.alpha_y.abs() > 1e-12 {
        // V Z V† = Y for V = S·H.
        let v = phase_s().mul(&hadamard());
        let v_dag = v.dagger();
        gates.push(single(q_high, v_dag.clone()));
        gates.push(single(q_low, v_dag));
        zz_block(&mut gates, form.alpha_y);
        gates.push(single(q_high, v.clone()));
        gates.push(single(q_low, v));
    }
    if form.alpha_x.abs() > 1e-12 {
        gates.push(single(q_high, hadamard()));
        gates.push(single(q_low, hadamard()));
        zz_block(&mut gates, form.alpha_x);
        gates.push(single(q_high, hadamard()));
        gates.push(single(q_low, hadamard()));
    }

    gates.push(single(q_high, form.w_ancilla.clone()));
    gates.push(single(q_low, form.w_register.clone()));
    Ok(gates)
}

fn wrap(a: f64) -> f64 {
    let mut x = a.rem_euclid(2.0 * PI);
    if x > PI {
        x -= 2.0 * PI;
    }
    x
}

/// Wraps a rotation angle into (−π, π], moving the −1 of any odd 2π fold
/// into the accumulated phase.
fn fold_rotation(angle: f64, phase: &mut f64) -> f64 {
    let x = wrap(angle);
    let turns = ((angle - x) / (2.0 * PI)).round() as i64;
    if turns % 2 != 0 {
        *phase += PI;
    }
    x
}

fn fold_candidate(alpha: f64, beta: f64, gamma: f64, delta: f64) -> EulerJAngles {
    let mut phase = alpha;
    let beta = fold_rotation(beta, &mut phase);
    let gamma = fold_rotation(gamma, &mut phase);
    let delta = fold_rotation(delta, &mut phase);
    EulerJAngles {
        global_phase: wrap(phase),
        beta,
        gamma,
        delta,
    }
}
