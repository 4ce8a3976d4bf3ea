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

//! Dense complex vector/matrix kernel for 2-, 4- and n-qubit objects.
//!
//! Every other module builds on the carriers and predicates defined here:
//! row-major [`ComplexMatrix`], [`StateVector`] with qubit 0 as the most
//! significant bit, Kronecker products, gate application to qubit subsets,
//! phase-quotiented comparison, proportionality to a unitary, and the
//! operator Schmidt spectrum used as a tensor-product detector.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use crate::error::{AdqcError, Result};

pub type C = Complex64;

/// Default tolerance for exact algebraic identities.
pub const TOL_EXACT: f64 = 1e-10;
/// Default tolerance for decompositions.
pub const TOL_DECOMP: f64 = 1e-9;

pub const C_ZERO: C = C::new(0.0, 0.0);
pub const C_ONE: C = C::new(1.0, 0.0);
pub const IM: C = C::new(0.0, 1.0);

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<C>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![C_ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C_ONE;
        }
        m
    }

    /// Builds a matrix from row-major entries.
    pub fn from_entries(rows: usize, cols: usize, entries: Vec<C>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(AdqcError::DimensionMismatch(format!(
                "{}x{} matrix needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                entries.len()
            )));
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    /// Convenience constructor from real entry rows.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = rows[0].len();
        let entries = rows
            .iter()
            .flat_map(|row| row.iter().map(|&x| C::new(x, 0.0)))
            .collect();
        Self {
            rows: r,
            cols: c,
            entries,
        }
    }

    pub fn from_rows(rows: &[&[C]]) -> Self {
        let r = rows.len();
        let c = rows[0].len();
        let entries = rows.iter().flat_map(|row| row.iter().copied()).collect();
        Self {
            rows: r,
            cols: c,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[C] {
        &self.entries
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn mul(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = ComplexMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == C_ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn add(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    pub fn sub(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    pub fn scale(&self, s: C) -> ComplexMatrix {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|a| a * s).collect(),
        }
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> C {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| e.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// ‖U†U − I‖_F, the deviation from unitarity.
    pub fn unitarity_deviation(&self) -> f64 {
        let gram = self.dagger().mul(self);
        gram.sub(&ComplexMatrix::identity(self.rows)).frobenius_norm()
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.is_square() && self.unitarity_deviation() <= tol
    }

    pub fn check_unitary(&self, tol: f64) -> Result<()> {
        let deviation = self.unitarity_deviation();
        if !self.is_square() || deviation > tol {
            return Err(AdqcError::NonUnitary {
                deviation,
                tolerance: tol,
            });
        }
        Ok(())
    }

    pub fn determinant(&self) -> C {
        assert!(self.is_square());
        self.to_nalgebra().determinant()
    }

    pub fn to_nalgebra(&self) -> DMatrix<C> {
        DMatrix::from_row_iterator(self.rows, self.cols, self.entries.iter().copied())
    }

    pub fn from_nalgebra(m: &DMatrix<C>) -> Self {
        let mut out = ComplexMatrix::zeros(m.nrows(), m.ncols());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                out[(i, j)] = m[(i, j)];
            }
        }
        out
    }

    /// Expands a 2x2 matrix in the Pauli basis: m = w·I + x·X + y·Y + z·Z.
    pub fn pauli_coefficients(&self) -> [C; 4] {
        assert_eq!((self.rows, self.cols), (2, 2));
        let half = C::new(0.5, 0.0);
        [
            (self[(0, 0)] + self[(1, 1)]) * half,
            (self[(0, 1)] + self[(1, 0)]) * half,
            (self[(0, 1)] - self[(1, 0)]) * half * IM,
            (self[(0, 0)] - self[(1, 1)]) * half,
        ]
    }

    pub fn from_pauli_coefficients(c: [C; 4]) -> Self {
        let [w, x, y, z] = c;
        ComplexMatrix::from_rows(&[
            &[w + z, x - IM * y],
            &[x + IM * y, w - z],
        ])
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = C;
    fn index(&self, (i, j): (usize, usize)) -> &C {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C {
        &mut self.entries[i * self.cols + j]
    }
}

/// Pure register state over `qubit_count` qubits.
///
/// Basis ordering: qubit 0 is the most significant bit of the amplitude
/// index. This convention is fixed globally.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    qubit_count: usize,
    amplitudes: Vec<C>,
}

impl StateVector {
    pub fn new(qubit_count: usize, amplitudes: Vec<C>) -> Result<Self> {
        if amplitudes.len() != 1 << qubit_count {
            return Err(AdqcError::DimensionMismatch(format!(
                "{} qubits need {} amplitudes, got {}",
                qubit_count,
                1usize << qubit_count,
                amplitudes.len()
            )));
        }
        Ok(Self {
            qubit_count,
            amplitudes,
        })
    }

    /// Computational basis state |index⟩.
    pub fn basis_state(qubit_count: usize, index: usize) -> Self {
        let mut amplitudes = vec![C_ZERO; 1 << qubit_count];
        amplitudes[index] = C_ONE;
        Self {
            qubit_count,
            amplitudes,
        }
    }

    /// Product state from per-qubit single-qubit states, qubit 0 first.
    pub fn product(factors: &[[C; 2]]) -> Self {
        let n = factors.len();
        let mut amplitudes = vec![C_ONE];
        for f in factors {
            let mut next = Vec::with_capacity(amplitudes.len() * 2);
            for a in &amplitudes {
                next.push(a * f[0]);
                next.push(a * f[1]);
            }
            amplitudes = next;
        }
        Self {
            qubit_count: n,
            amplitudes,
        }
    }

    /// Haar-ish random state: complex Gaussian amplitudes, normalized.
    pub fn random<R: Rng>(qubit_count: usize, rng: &mut R) -> Self {
        let dim = 1usize << qubit_count;
        let mut amplitudes = Vec::with_capacity(dim);
        for _ in 0..dim {
            amplitudes.push(C::new(gaussian(rng), gaussian(rng)));
        }
        let mut s = Self {
            qubit_count,
            amplitudes,
        };
        s.normalize();
        s
    }

    pub fn qubit_count(&self) -> usize {
        self.qubit_count
    }

    pub fn amplitudes(&self) -> &[C] {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut [C] {
        &mut self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn normalize(&mut self) {
        let n = self.norm();
        if n > 0.0 {
            for a in &mut self.amplitudes {
                *a /= n;
            }
        }
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &StateVector) -> C {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// 1 − |⟨self|other⟩|², for unit vectors.
    pub fn infidelity(&self, other: &StateVector) -> f64 {
        (1.0 - self.inner(other).norm_sqr()).max(0.0)
    }

    /// Appends a fresh qubit in the given single-qubit state as the new
    /// least significant index (highest qubit number).
    pub fn append_qubit(&self, amp0: C, amp1: C) -> StateVector {
        let mut amplitudes = Vec::with_capacity(self.amplitudes.len() * 2);
        for a in &self.amplitudes {
            amplitudes.push(a * amp0);
            amplitudes.push(a * amp1);
        }
        StateVector {
            qubit_count: self.qubit_count + 1,
            amplitudes,
        }
    }

    /// Contracts the last qubit with the bra ⟨m| = (m0*, m1*); the result is
    /// unnormalized and its squared norm is the outcome probability.
    pub fn contract_last_qubit(&self, m: [C; 2]) -> StateVector {
        let half = self.amplitudes.len() / 2;
        let mut amplitudes = Vec::with_capacity(half);
        for k in 0..half {
            amplitudes.push(
                m[0].conj() * self.amplitudes[2 * k] + m[1].conj() * self.amplitudes[2 * k + 1],
            );
        }
        StateVector {
            qubit_count: self.qubit_count - 1,
            amplitudes,
        }
    }
}

fn gaussian<R: Rng>(rng: &mut R) -> f64 {
    // Box-Muller; avoids a rand_distr dependency for one sampler.
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Kronecker product with `a`'s indices as the high-order (first) subsystem.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(a.rows() * b.rows(), a.cols() * b.cols());
    for ia in 0..a.rows() {
        for ja in 0..a.cols() {
            let f = a[(ia, ja)];
            if f == C_ZERO {
                continue;
            }
            for ib in 0..b.rows() {
                for jb in 0..b.cols() {
                    out[(ia * b.rows() + ib, ja * b.cols() + jb)] = f * b[(ib, jb)];
                }
            }
        }
    }
    out
}

/// Applies a 2^k × 2^k unitary to the listed qubits of a state; all other
/// qubits are untouched. `targets[0]` is the high-order subsystem of `u`.
pub fn apply_to_qubits(
    u: &ComplexMatrix,
    state: &StateVector,
    targets: &[usize],
) -> Result<StateVector> {
    let k = targets.len();
    let dim = 1usize << k;
    if u.rows() != dim || u.cols() != dim {
        return Err(AdqcError::DimensionMismatch(format!(
            "{} targets need a {}x{} matrix, got {}x{}",
            k,
            dim,
            dim,
            u.rows(),
            u.cols()
        )));
    }
    let n = state.qubit_count();
    for (i, &t) in targets.iter().enumerate() {
        if t >= n {
            return Err(AdqcError::BadQubitIndex {
                index: t,
                qubit_count: n,
            });
        }
        if targets[..i].contains(&t) {
            return Err(AdqcError::RepeatedTarget(t));
        }
    }

    // Bit position of qubit q in the amplitude index (qubit 0 = MSB).
    let bit = |q: usize| n - 1 - q;
    let masks: Vec<usize> = targets.iter().map(|&q| 1usize << bit(q)).collect();
    let full: usize = masks.iter().sum();

    let mut out = vec![C_ZERO; state.amplitudes().len()];
    let mut gathered = vec![C_ZERO; dim];
    for base in 0..state.amplitudes().len() {
        if base & full != 0 {
            continue;
        }
        for (sub, g) in gathered.iter_mut().enumerate() {
            let mut idx = base;
            for (pos, mask) in masks.iter().enumerate() {
                // Bit (k-1-pos) of `sub` belongs to targets[pos].
                if sub >> (k - 1 - pos) & 1 == 1 {
                    idx |= mask;
                }
            }
            *g = state.amplitudes()[idx];
        }
        for row in 0..dim {
            let mut acc = C_ZERO;
            for (col, g) in gathered.iter().enumerate() {
                acc += u[(row, col)] * g;
            }
            let mut idx = base;
            for (pos, mask) in masks.iter().enumerate() {
                if row >> (k - 1 - pos) & 1 == 1 {
                    idx |= mask;
                }
            }
            out[idx] = acc;
        }
    }
    StateVector::new(n, out)
}

/// Returns φ with a = e^{iφ} b within `tol` in Frobenius norm, if any.
///
/// Global phases of states and unitaries are physically insignificant, so
/// comparisons throughout the crate quotient them out with this predicate.
pub fn equal_up_to_phase(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> Option<f64> {
    if (a.rows(), a.cols()) != (b.rows(), b.cols()) {
        return None;
    }
    let overlap: C = b
        .entries()
        .iter()
        .zip(a.entries())
        .map(|(bb, aa)| bb.conj() * aa)
        .sum();
    let phase = if overlap.norm() > 0.0 { overlap.arg() } else { 0.0 };
    let e = C::from_polar(1.0, phase);
    let residual = a.sub(&b.scale(e)).frobenius_norm();
    (residual <= tol).then_some(phase)
}

/// Phase-quotiented comparison for state vectors.
pub fn states_equal_up_to_phase(a: &StateVector, b: &StateVector, tol: f64) -> Option<f64> {
    if a.qubit_count() != b.qubit_count() {
        return None;
    }
    let overlap = b.inner(a);
    let phase = if overlap.norm() > 0.0 { overlap.arg() } else { 0.0 };
    let e = C::from_polar(1.0, phase);
    let residual: f64 = a
        .amplitudes()
        .iter()
        .zip(b.amplitudes())
        .map(|(aa, bb)| (aa - bb * e).norm_sqr())
        .sum::<f64>()
        .sqrt();
    (residual <= tol).then_some(phase)
}

/// If m = s·U with s > 0 and U unitary within `tol`, returns (s, U).
///
/// s is the common singular value; absent when the singular values spread
/// by more than `tol` or the matrix is (numerically) zero.
pub fn proportional_to_unitary(m: &ComplexMatrix, tol: f64) -> Option<(f64, ComplexMatrix)> {
    assert!(m.is_square(), "proportional_to_unitary needs a square matrix");
    let svd = m.to_nalgebra().svd(false, false);
    let sigma = &svd.singular_values;
    let n = sigma.len();
    let mean_sq: f64 = sigma.iter().map(|s| s * s).sum::<f64>() / n as f64;
    let s = mean_sq.sqrt();
    if s <= f64::EPSILON {
        return None;
    }
    // ‖(m/s)†(m/s) − I‖_F in terms of singular values.
    let deviation: f64 = sigma
        .iter()
        .map(|si| {
            let r = si * si / mean_sq - 1.0;
            r * r
        })
        .sum::<f64>()
        .sqrt();
    if deviation > tol {
        return None;
    }
    Some((s, m.scale(C::new(1.0 / s, 0.0))))
}

/// Operator Schmidt weights of a 4×4 matrix over the 2⊗2 split, descending.
///
/// The count of weights above tolerance is the operator Schmidt rank;
/// rank 1 detects a tensor product.
pub fn operator_schmidt_terms(m: &ComplexMatrix) -> Vec<f64> {
    assert_eq!((m.rows(), m.cols()), (4, 4));
    let r = reshuffle(m);
    let svd = r.to_nalgebra().svd(false, false);
    let mut w: Vec<f64> = svd.singular_values.iter().copied().collect();
    w.sort_by(|a, b| b.partial_cmp(a).unwrap());
    w
}

/// Subsystem reshuffling: R[(i,j),(k,l)] = M[(i,k),(j,l)] so a product
/// A⊗B becomes the outer product vec(A)·vec(B)^T.
pub fn reshuffle(m: &ComplexMatrix) -> ComplexMatrix {
    let mut r = ComplexMatrix::zeros(4, 4);
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    r[(2 * i + j, 2 * k + l)] = m[(2 * i + k, 2 * j + l)];
                }
            }
        }
    }
    r
}

/// Splits a 4×4 tensor product into its 2×2 factors, scaled so that
/// ‖A‖_F = ‖B‖_F. Absent when the operator Schmidt rank exceeds 1.
///
/// For a rank-1 reshuffle R = vec(A)·vec(B)^T the factors follow in closed
/// form from the cross of R through its largest entry; the residual check
/// doubles as the tensor-product test.
pub fn tensor_factors(m: &ComplexMatrix, tol: f64) -> Option<(ComplexMatrix, ComplexMatrix)> {
    let r = reshuffle(m);
    let (mut pi, mut pj, mut best) = (0usize, 0usize, 0.0f64);
    for i in 0..4 {
        for j in 0..4 {
            let mag = r[(i, j)].norm();
            if mag > best {
                best = mag;
                pi = i;
                pj = j;
            }
        }
    }
    let scale = m.frobenius_norm();
    if best <= f64::EPSILON * scale.max(1.0) {
        return None;
    }
    let pivot = r[(pi, pj)];
    let a_vec: Vec<C> = (0..4).map(|i| r[(i, pj)]).collect();
    let b_vec: Vec<C> = (0..4).map(|j| r[(pi, j)] / pivot).collect();
    let mut residual = 0.0f64;
    for i in 0..4 {
        for j in 0..4 {
            residual += (a_vec[i] * b_vec[j] - r[(i, j)]).norm_sqr();
        }
    }
    if residual.sqrt() > tol * scale.max(1.0) {
        return None;
    }
    let na: f64 = a_vec.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let nb: f64 = b_vec.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let sa = C::new((nb / na).sqrt(), 0.0);
    let sb = C::new((na / nb).sqrt(), 0.0);
    let a = ComplexMatrix::from_rows(&[
        &[a_vec[0] * sa, a_vec[1] * sa],
        &[a_vec[2] * sa, a_vec[3] * sa],
    ]);
    let b = ComplexMatrix::from_rows(&[
        &[b_vec[0] * sb, b_vec[1] * sb],
        &[b_vec[2] * sb, b_vec[3] * sb],
    ]);
    Some((a, b))
}

// Fixed gate constants.

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]])
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[&[C_ZERO, -IM], &[IM, C_ZERO]])
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]])
}

pub fn hadamard() -> ComplexMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_real_rows(&[&[h, h], &[h, -h]])
}

/// Phase gate S = diag(1, i).
pub fn phase_s() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[&[C_ONE, C_ZERO], &[C_ZERO, IM]])
}

/// Control-Z: 1 − 2|11⟩⟨11|.
pub fn cz() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[
        &[1.0, 0.0, 0.0, 0.0],
        &[0.0, 1.0, 0.0, 0.0],
        &[0.0, 0.0, 1.0, 0.0],
        &[0.0, 0.0, 0.0, -1.0],
    ])
}

/// Control-Z+SWAP: |00⟩⟨00| + |01⟩⟨10| + |10⟩⟨01| − |11⟩⟨11|.
pub fn cz_swap() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[
        &[1.0, 0.0, 0.0, 0.0],
        &[0.0, 0.0, 1.0, 0.0],
        &[0.0, 1.0, 0.0, 0.0],
        &[0.0, 0.0, 0.0, -1.0],
    ])
}

/// The reference interaction E = (H⊗H)·CZ.
pub fn coupling_e() -> ComplexMatrix {
    tensor(&hadamard(), &hadamard()).mul(&cz())
}

/// e^{iβX/2}.
pub fn x_rotation(beta: f64) -> ComplexMatrix {
    let c = C::new((beta / 2.0).cos(), 0.0);
    let s = C::new(0.0, (beta / 2.0).sin());
    ComplexMatrix::from_rows(&[&[c, s], &[s, c]])
}

/// e^{iβZ/2}.
pub fn z_rotation(beta: f64) -> ComplexMatrix {
    ComplexMatrix::from_rows(&[
        &[C::from_polar(1.0, beta / 2.0), C_ZERO],
        &[C_ZERO, C::from_polar(1.0, -beta / 2.0)],
    ])
}

/// Haar-random 2×2 unitary.
pub fn random_unitary_2x2<R: Rng>(rng: &mut R) -> ComplexMatrix {
    random_unitary(2, rng)
}

/// Haar-random n×n unitary via QR of a complex Gaussian matrix.
pub fn random_unitary<R: Rng>(n: usize, rng: &mut R) -> ComplexMatrix {
    let g = DMatrix::from_fn(n, n, |_, _| C::new(gaussian(rng), gaussian(rng)));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    // Fix the phase ambiguity so the distribution is Haar.
    for j in 0..n {
        let d = r[(j, j)];
        let ph = if d.norm() > 0.0 { d / d.norm() } else { C_ONE };
        for i in 0..n {
            q[(i, j)] *= ph.conj();
        }
    }
    ComplexMatrix::from_nalgebra(&q)
}
