//! Dense reference simulator for qubit and qudit circuits.
//!
//! Basis states are indexed little-endian: qudit (or qubit) 0 is the least
//! significant digit. Local operator matrices on several qudits order their
//! operands big-endian, so the first listed qudit is the most significant
//! digit of the local index (`A ⊗ B` acts with `A` on the first operand).

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::ir::{GateOp, QubitCircuit};
use crate::mapping::Mapping;
use crate::qudit::{QuditCircuit, QuditOp, QuditParams};

/// Default bound on the Hilbert-space dimension the oracle will handle.
pub const DEFAULT_CAP: usize = 1024;

pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };
pub const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<C64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for k in 0..n {
            m[(k, k)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m[(r, c)] = f(r, c);
            }
        }
        m
    }

    pub fn diag(entries: &[C64]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (k, e) in entries.iter().enumerate() {
            m[(k, k)] = *e;
        }
        m
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            data: self.data.iter().map(|x| x * s).collect(),
            ..self.clone()
        }
    }

    pub fn kron(&self, other: &Matrix) -> Matrix {
        Matrix::from_fn(self.rows * other.rows, self.cols * other.cols, |r, c| {
            self[(r / other.rows, c / other.cols)] * other[(r % other.rows, c % other.cols)]
        })
    }

    pub fn column(&self, c: usize) -> Vec<C64> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn set_column(&mut self, c: usize, v: &[C64]) {
        for (r, x) in v.iter().enumerate() {
            self[(r, c)] = *x;
        }
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.rows == self.cols && (&self.adjoint() * self).max_abs_diff(&Matrix::identity(self.rows)) < tol
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = C64;
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.cols + c]
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a == ZERO {
                    continue;
                }
                for c in 0..rhs.cols {
                    out.data[r * rhs.cols + c] += a * rhs[(k, c)];
                }
            }
        }
        out
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        Matrix {
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
            ..self.clone()
        }
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        Matrix {
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
            ..self.clone()
        }
    }
}

// ---------------------------------------------------------------------------
// Generalized Pauli matrices on a single d-level system.

/// `σx{ij} = |j⟩⟨i| + |i⟩⟨j|`
pub fn sigma_x(d: usize, i: usize, j: usize) -> Matrix {
    let mut m = Matrix::zeros(d, d);
    m[(j, i)] = ONE;
    m[(i, j)] = ONE;
    m
}

/// `σy{ij} = i|j⟩⟨i| - i|i⟩⟨j|`
pub fn sigma_y(d: usize, i: usize, j: usize) -> Matrix {
    let mut m = Matrix::zeros(d, d);
    m[(j, i)] = I;
    m[(i, j)] = -I;
    m
}

/// `σz{ij} = |i⟩⟨i| - |j⟩⟨j|`
pub fn sigma_z(d: usize, i: usize, j: usize) -> Matrix {
    let mut m = Matrix::zeros(d, d);
    m[(i, i)] = ONE;
    m[(j, j)] = -ONE;
    m
}

/// `cos φ σx{ij} + sin φ σy{ij}`
pub fn sigma_phi(d: usize, i: usize, j: usize, phi: f64) -> Matrix {
    &sigma_x(d, i, j).scale(C64::from(phi.cos())) + &sigma_y(d, i, j).scale(C64::from(phi.sin()))
}

/// Projector `1{ij} = |i⟩⟨i| + |j⟩⟨j|`.
pub fn one(d: usize, i: usize, j: usize) -> Matrix {
    let mut m = Matrix::zeros(d, d);
    m[(i, i)] = ONE;
    m[(j, j)] = ONE;
    m
}

/// Complementary projector `I - 1{ij}`.
pub fn one_bar(d: usize, i: usize, j: usize) -> Matrix {
    &Matrix::identity(d) - &one(d, i, j)
}

/// `Ph{i}(θ)` on one qudit.
pub fn ph_local(d: usize, level: usize, theta: f64) -> Matrix {
    let mut m = Matrix::identity(d);
    m[(level, level)] = C64::from_polar(1.0, theta);
    m
}

/// Half-angle rotation `exp(-i θ/2 σφ{ij})` on one qudit.
pub fn r_local(d: usize, i: usize, j: usize, theta: f64, phi: f64) -> Matrix {
    let c = C64::from((theta / 2.0).cos());
    let s = C64::from((theta / 2.0).sin());
    let rot = &one(d, i, j).scale(c) - &sigma_phi(d, i, j, phi).scale(I * s);
    &one_bar(d, i, j) + &rot
}

/// Full-angle rotation `exp(-i θ σφ{ij})`, the 2π-periodic convention used in
/// the algebraic identities.
pub fn r_full_angle(d: usize, i: usize, j: usize, theta: f64, phi: f64) -> Matrix {
    r_local(d, i, j, 2.0 * theta, phi)
}

/// `Rz{ij}(θ) = exp(-iθ σz{ij})`.
pub fn rz_local(d: usize, i: usize, j: usize, theta: f64) -> Matrix {
    let mut m = Matrix::identity(d);
    m[(i, i)] = C64::from_polar(1.0, -theta);
    m[(j, j)] = C64::from_polar(1.0, theta);
    m
}

/// Mølmer–Sørensen `exp(-iθ σx{ij} ⊗ σx{kl})` on two qudits (first operand
/// most significant).
pub fn xx_local(d: usize, (i, j): (usize, usize), (k, l): (usize, usize), theta: f64) -> Matrix {
    let a = sigma_x(d, i, j).kron(&sigma_x(d, k, l));
    let p = one(d, i, j).kron(&one(d, k, l));
    let id = Matrix::identity(d * d);
    let rest = &id - &p;
    let cos = &p.scale(C64::from(theta.cos())) - &a.scale(I * theta.sin());
    &rest + &cos
}

/// Two-qudit `CZ{i|j}`: `|i,j⟩ ↦ -|i,j⟩`, identity otherwise.
pub fn cz_levels(d: usize, i: usize, j: usize) -> Matrix {
    let mut m = Matrix::identity(d * d);
    m[(i * d + j, i * d + j)] = -ONE;
    m
}

/// Two-qudit `CX{i|jk}`: swaps `|i,j⟩` and `|i,k⟩`, identity otherwise.
pub fn cx_levels(d: usize, i: usize, j: usize, k: usize) -> Matrix {
    let mut m = Matrix::identity(d * d);
    let (a, b) = (i * d + j, i * d + k);
    m[(a, a)] = ZERO;
    m[(b, b)] = ZERO;
    m[(a, b)] = ONE;
    m[(b, a)] = ONE;
    m
}

// ---------------------------------------------------------------------------
// State-vector kernels.

/// Applies `local` (acting on `targets`, first target most significant) to a
/// state of `n` qudits with `d` levels each.
pub fn apply_local(state: &mut [C64], d: usize, targets: &[usize], local: &Matrix) {
    let k = targets.len();
    let dim = d.pow(k as u32);
    debug_assert_eq!(local.rows, dim);
    let strides: Vec<usize> = targets.iter().map(|&t| d.pow(t as u32)).collect();
    // Offsets of each local basis state relative to a base index.
    let offsets: Vec<usize> = (0..dim)
        .map(|mut idx| {
            let mut off = 0;
            for pos in (0..k).rev() {
                off += (idx % d) * strides[pos];
                idx /= d;
            }
            off
        })
        .collect();
    let mut buf = vec![ZERO; dim];
    for base in 0..state.len() {
        if strides.iter().any(|s| (base / s) % d != 0) {
            continue;
        }
        for (slot, off) in offsets.iter().enumerate() {
            buf[slot] = state[base + off];
        }
        for (r, off) in offsets.iter().enumerate() {
            let mut acc = ZERO;
            for (c, amp) in buf.iter().enumerate() {
                let m = local.data[r * dim + c];
                if m != ZERO {
                    acc += m * amp;
                }
            }
            state[base + off] = acc;
        }
    }
}

/// Local matrix and operand list for a qudit operation; `None` for barriers.
pub fn qudit_op_local(op: &QuditOp, d: usize) -> Option<(Vec<usize>, Matrix)> {
    match op {
        QuditOp::Ph { qudit, level, theta } => Some((vec![*qudit], ph_local(d, *level, *theta))),
        QuditOp::R {
            qudit,
            levels,
            theta,
            phi,
        } => Some((vec![*qudit], r_local(d, levels.0, levels.1, *theta, *phi))),
        QuditOp::XX { qudits, levels, theta } => {
            Some((vec![qudits.0, qudits.1], xx_local(d, levels.0, levels.1, *theta)))
        }
        QuditOp::Barrier { .. } => None,
    }
}

/// Matrix of a single qubit-level native gate, first operand most significant.
///
/// Supported: `rz`, `r`, `cz` and the multi-controlled-Z family (`ccz`,
/// `cccz`, `c4z`, …) of the intermediate runtime; `xx` of the ion runtime;
/// `U` and `cx` of the emulator runtime.
pub fn qubit_gate_local(g: &GateOp) -> Result<Matrix> {
    let p = |k: usize| g.params.get(k).copied().unwrap_or(f64::NAN);
    let expect = |params: usize, qubits: usize| -> Result<()> {
        if g.params.len() != params {
            return Err(Error::Arity {
                name: g.name.clone(),
                what: "parameters",
                expected: params,
                got: g.params.len(),
            });
        }
        if g.qubits.len() != qubits {
            return Err(Error::Arity {
                name: g.name.clone(),
                what: "qubits",
                expected: qubits,
                got: g.qubits.len(),
            });
        }
        Ok(())
    };
    match g.name.as_str() {
        "rz" => {
            expect(1, 1)?;
            Ok(ph_local(2, 1, p(0)))
        }
        "r" => {
            expect(2, 1)?;
            Ok(r_local(2, 0, 1, p(0), p(1)))
        }
        "xx" => {
            expect(1, 2)?;
            Ok(xx_local(2, (0, 1), (0, 1), p(0)))
        }
        "cx" => {
            expect(0, 2)?;
            Ok(cx_levels(2, 1, 0, 1))
        }
        "U" => {
            expect(3, 1)?;
            let (t, ph, l) = (p(0), p(1), p(2));
            let (c, s) = ((t / 2.0).cos(), (t / 2.0).sin());
            Ok(Matrix::from_fn(2, 2, |r, col| match (r, col) {
                (0, 0) => C64::from(c),
                (0, 1) => -C64::from_polar(s, l),
                (1, 0) => C64::from_polar(s, ph),
                _ => C64::from_polar(c, ph + l),
            }))
        }
        name => match mcz_arity(name) {
            Some(n) => {
                expect(0, n)?;
                let dim = 1 << n;
                let mut diag = vec![ONE; dim];
                diag[dim - 1] = -ONE;
                Ok(Matrix::diag(&diag))
            }
            None => Err(Error::UnknownGate(name.to_string())),
        },
    }
}

/// Arity of a multi-controlled-Z gate name: `cz` → 2, `ccz` → 3, `cccz` → 4,
/// `c4z` → 5, and so on.
pub fn mcz_arity(name: &str) -> Option<usize> {
    match name {
        "cz" => Some(2),
        "ccz" => Some(3),
        "cccz" => Some(4),
        _ => {
            let digits = name.strip_prefix('c')?.strip_suffix('z')?;
            let n: usize = digits.parse().ok()?;
            (n >= 1).then_some(n + 1)
        }
    }
}

/// Name of the multi-controlled-Z gate acting on `arity` qubits.
pub fn mcz_name(arity: usize) -> String {
    match arity {
        2 => "cz".into(),
        3 => "ccz".into(),
        4 => "cccz".into(),
        n => format!("c{}z", n - 1),
    }
}

fn check_cap(dim: usize, cap: usize) -> Result<()> {
    if dim > cap {
        Err(Error::DimensionCap { dim, cap })
    } else {
        Ok(())
    }
}

fn qudit_dim(d: usize, m: usize, cap: usize) -> Result<usize> {
    let dim = (d as u128).checked_pow(m as u32).unwrap_or(u128::MAX);
    if dim > cap as u128 {
        return Err(Error::DimensionCap {
            dim: dim.min(usize::MAX as u128) as usize,
            cap,
        });
    }
    Ok(dim as usize)
}

/// Applies a qudit circuit to a state vector in place.
pub fn run_qudit(circuit: &QuditCircuit, state: &mut [C64]) {
    for op in &circuit.ops {
        if let Some((targets, local)) = qudit_op_local(op, circuit.levels) {
            apply_local(state, circuit.levels, &targets, &local);
        }
    }
}

/// Applies the gates of a qubit circuit to a state vector in place.
/// Measurements and barriers are ignored.
pub fn run_qubit(circuit: &QubitCircuit, state: &mut [C64]) -> Result<()> {
    for g in circuit.gates() {
        let local = qubit_gate_local(g)?;
        apply_local(state, 2, &g.qubits, &local);
    }
    Ok(())
}

/// Full matrix of one qudit operation on `m` qudits.
pub fn gate_matrix(op: &QuditOp, d: usize, m: usize) -> Result<Matrix> {
    let circuit = QuditCircuit {
        qudits: m,
        levels: d,
        ops: vec![op.clone()],
    };
    qudit_unitary(&circuit, usize::MAX)
}

/// Unitary of a qudit circuit (left-to-right application order).
pub fn qudit_unitary(circuit: &QuditCircuit, cap: usize) -> Result<Matrix> {
    let dim = qudit_dim(circuit.levels, circuit.qudits, cap)?;
    let mut u = Matrix::zeros(dim, dim);
    let mut col = vec![ZERO; dim];
    for c in 0..dim {
        col.iter_mut().for_each(|x| *x = ZERO);
        col[c] = ONE;
        run_qudit(circuit, &mut col);
        u.set_column(c, &col);
    }
    Ok(u)
}

/// Unitary of the gate part of a qubit circuit.
pub fn qubit_unitary(circuit: &QubitCircuit, cap: usize) -> Result<Matrix> {
    let dim = qudit_dim(2, circuit.num_qubits, cap)?;
    let mut u = Matrix::zeros(dim, dim);
    let mut col = vec![ZERO; dim];
    for c in 0..dim {
        col.iter_mut().for_each(|x| *x = ZERO);
        col[c] = ONE;
        run_qubit(circuit, &mut col)?;
        u.set_column(c, &col);
    }
    Ok(u)
}

/// Index of the qudit basis state encoding qubit basis state `bits`.
pub fn embed_index(bits: usize, mapping: &Mapping, d: usize) -> usize {
    let mut digits = vec![0usize; mapping.qudits];
    for (n, slot) in mapping.slots.iter().enumerate() {
        if (bits >> n) & 1 == 1 {
            digits[slot.qudit] |= 1 << slot.slot;
        }
    }
    digits.iter().rev().fold(0, |acc, x| acc * d + x)
}

/// Embedding isometry `E` of shape `d^M × 2^N`.
pub fn embedding(mapping: &Mapping, params: QuditParams, cap: usize) -> Result<Matrix> {
    let rows = qudit_dim(params.d, mapping.qudits, cap)?;
    let n = mapping.slots.len();
    let cols = qudit_dim(2, n, cap)?;
    let mut e = Matrix::zeros(rows, cols);
    for x in 0..cols {
        e[(embed_index(x, mapping, params.d), x)] = ONE;
    }
    Ok(e)
}

/// `W·E` computed column by column without forming `W`.
pub fn embedded_action(circuit: &QuditCircuit, mapping: &Mapping, cap: usize) -> Result<Matrix> {
    let rows = qudit_dim(circuit.levels, circuit.qudits, cap)?;
    let n = mapping.slots.len();
    let cols = qudit_dim(2, n, cap)?;
    let mut out = Matrix::zeros(rows, cols);
    let mut state = vec![ZERO; rows];
    for x in 0..cols {
        state.iter_mut().for_each(|a| *a = ZERO);
        state[embed_index(x, mapping, circuit.levels)] = ONE;
        run_qudit(circuit, &mut state);
        out.set_column(x, &state);
    }
    Ok(out)
}

/// `E·V` for a qubit reference circuit.
pub fn embedded_reference(reference: &QubitCircuit, mapping: &Mapping, d: usize, cap: usize) -> Result<Matrix> {
    let v = qubit_unitary(reference, cap)?;
    let rows = qudit_dim(d, mapping.qudits, cap)?;
    let mut out = Matrix::zeros(rows, v.cols);
    for r in 0..v.rows {
        let target = embed_index(r, mapping, d);
        for c in 0..v.cols {
            out[(target, c)] = v[(r, c)];
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EquivalenceMode {
    /// `W·E = c·E·V` for one unit scalar `c`.
    GlobalPhase,
    /// `W·E = D·E·V` for a diagonal unitary `D`.
    DiagonalPhase,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Equivalence {
    pub equivalent: bool,
    pub max_deviation: f64,
}

pub const EQUIVALENCE_TOL: f64 = 1e-9;

/// Compares `W·E` with `E·V` (both `d^M × 2^N`) in the given mode.
pub fn compare_embedded(we: &Matrix, ev: &Matrix, mode: EquivalenceMode, tol: f64) -> Equivalence {
    assert_eq!((we.rows, we.cols), (ev.rows, ev.cols), "shape mismatch");
    match mode {
        EquivalenceMode::GlobalPhase => {
            let (k, _) =
                ev.data.iter().enumerate().fold(
                    (0, -1.0),
                    |best, (k, x)| if x.norm() > best.1 { (k, x.norm()) } else { best },
                );
            let reference = ev.data[k];
            if reference.norm() < tol {
                let dev = we.data.iter().map(|x| x.norm()).fold(0.0, f64::max);
                return Equivalence {
                    equivalent: dev < tol,
                    max_deviation: dev,
                };
            }
            let c = we.data[k] / reference;
            let mut dev = (c.norm() - 1.0).abs();
            for (a, b) in we.data.iter().zip(&ev.data) {
                dev = dev.max((a - c * b).norm());
            }
            Equivalence {
                equivalent: dev < tol,
                max_deviation: dev,
            }
        }
        EquivalenceMode::DiagonalPhase => {
            let mut dev: f64 = 0.0;
            for r in 0..ev.rows {
                let row_ev = &ev.data[r * ev.cols..(r + 1) * ev.cols];
                let row_we = &we.data[r * we.cols..(r + 1) * we.cols];
                let (k, mag) =
                    row_ev.iter().enumerate().fold(
                        (0, -1.0),
                        |best, (k, x)| if x.norm() > best.1 { (k, x.norm()) } else { best },
                    );
                if mag < tol {
                    for x in row_we {
                        dev = dev.max(x.norm());
                    }
                    continue;
                }
                let c = row_we[k] / row_ev[k];
                dev = dev.max((c.norm() - 1.0).abs());
                for (a, b) in row_we.iter().zip(row_ev) {
                    dev = dev.max((a - c * b).norm());
                }
            }
            Equivalence {
                equivalent: dev < tol,
                max_deviation: dev,
            }
        }
    }
}

/// Checks `W·E` against `E·V` given the full matrices.
pub fn check_equivalence(w: &Matrix, v: &Matrix, e: &Matrix, mode: EquivalenceMode) -> Equivalence {
    let we = w * e;
    let ev = e * v;
    compare_embedded(&we, &ev, mode, EQUIVALENCE_TOL)
}

/// Unitaries equal up to a global phase.
pub fn equal_up_to_phase(a: &Matrix, b: &Matrix, tol: f64) -> bool {
    compare_embedded(a, b, EquivalenceMode::GlobalPhase, tol).equivalent
}

/// Exact outcome probabilities of a qudit circuit run from basis state
/// `input` (one digit per qudit, qudit 0 first). Returned as `(digits, p)`
/// pairs for every outcome with nonzero probability.
pub fn simulate_qudit_probabilities(
    circuit: &QuditCircuit,
    input: &[usize],
    cap: usize,
) -> Result<Vec<(Vec<usize>, f64)>> {
    let d = circuit.levels;
    let dim = qudit_dim(d, circuit.qudits, cap)?;
    let mut state = vec![ZERO; dim];
    state[digits_to_index(input, d)] = ONE;
    run_qudit(circuit, &mut state);
    Ok(probabilities(&state, d, circuit.qudits))
}

/// Exact outcome probabilities of a qubit circuit from basis state `input`.
pub fn simulate_qubit_probabilities(
    circuit: &QubitCircuit,
    input: &[usize],
    cap: usize,
) -> Result<Vec<(Vec<usize>, f64)>> {
    let dim = qudit_dim(2, circuit.num_qubits, cap)?;
    check_cap(dim, cap)?;
    let mut state = vec![ZERO; dim];
    state[digits_to_index(input, 2)] = ONE;
    run_qubit(circuit, &mut state)?;
    Ok(probabilities(&state, 2, circuit.num_qubits))
}

pub fn digits_to_index(digits: &[usize], d: usize) -> usize {
    digits.iter().rev().fold(0, |acc, x| acc * d + x)
}

pub fn index_to_digits(mut index: usize, d: usize, n: usize) -> Vec<usize> {
    (0..n)
        .map(|_| {
            let x = index % d;
            index /= d;
            x
        })
        .collect()
}

fn probabilities(state: &[C64], d: usize, n: usize) -> Vec<(Vec<usize>, f64)> {
    state
        .iter()
        .enumerate()
        .filter(|(_, a)| a.norm_sqr() > 0.0)
        .map(|(k, a)| (index_to_digits(k, d, n), a.norm_sqr()))
        .collect()
}

/// Normalizes an angle into `(-period/2, period/2]`.
pub fn wrap_angle(theta: f64, period: f64) -> f64 {
    let half = period / 2.0;
    let mut t = theta - period * ((theta + half) / period).floor();
    if t <= -half {
        t += period;
    }
    if t > half {
        t -= period;
    }
    if t == 0.0 {
        0.0
    } else {
        t
    }
}

/// `θ ≡ 0 (mod period)` within `tol`.
pub fn is_multiple_of(theta: f64, period: f64, tol: f64) -> bool {
    wrap_angle(theta, period).abs() < tol
}
