//! Dense n-qubit states, the measurement distribution they induce, and the
//! matrices that generate quantum coin states.
//!
//! Basis index `k` corresponds to the bit string `a_{n-1} ... a_0` with
//! `k = sum a_j 2^j`. In a tensor product the left factor occupies the
//! high-order bits.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Normalization tolerance for state vectors.
pub const NORM_TOLERANCE: f64 = 1e-12;

/// Largest qubit count for which [`generalized_hadamard`] builds a matrix.
pub const MAX_HADAMARD_QUBITS: u32 = 10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense square complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        ComplexMatrix { dim, entries: vec![ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        ComplexMatrix::from_fn(dim, |i, j| if i == j { ONE } else { ZERO })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(f(i, j));
            }
        }
        ComplexMatrix { dim, entries }
    }

    /// Builds a matrix from row-major entries; fails unless square and finite.
    pub fn from_row_major(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::validation(format!(
                "{} entries do not form a {dim}x{dim} matrix",
                entries.len()
            )));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::validation("matrix entries must be finite"));
        }
        Ok(ComplexMatrix { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn column(&self, col: usize) -> Vec<Complex64> {
        (0..self.dim).map(|r| self.get(r, col)).collect()
    }

    /// Matrix product. Zero entries of `self` are skipped, which makes
    /// products with permutation-like matrices quadratic.
    pub fn mul(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = vec![ZERO; n * n];
        for i in 0..n {
            let row = &mut out[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a == ZERO {
                    continue;
                }
                let rhs = &other.entries[k * n..(k + 1) * n];
                for (o, b) in row.iter_mut().zip(rhs) {
                    *o += a * b;
                }
            }
        }
        ComplexMatrix { dim: n, entries: out }
    }

    pub fn add(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        ComplexMatrix { dim: self.dim, entries }
    }

    pub fn scale(&self, factor: Complex64) -> ComplexMatrix {
        let entries = self.entries.iter().map(|a| a * factor).collect();
        ComplexMatrix { dim: self.dim, entries }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.dim, |i, j| self.get(j, i).conj())
    }

    pub fn pow(&self, exp: u32) -> ComplexMatrix {
        (0..exp).fold(ComplexMatrix::identity(self.dim), |acc, _| self.mul(&acc))
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim, "dimension mismatch");
        (0..self.dim)
            .map(|i| {
                let row = &self.entries[i * self.dim..(i + 1) * self.dim];
                row.iter().zip(v).map(|(a, b)| a * b).sum()
            })
            .collect()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.entries.iter().zip(&other.entries).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// `max |U U^dagger - I|`.
    pub fn unitarity_residual(&self) -> f64 {
        self.mul(&self.adjoint()).max_abs_diff(&ComplexMatrix::identity(self.dim))
    }
}

/// Largest entrywise modulus of `a - b`.
pub fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len(), "length mismatch");
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// A normalized pure state on `qubit_count` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct NQubitState {
    qubit_count: u32,
    amplitudes: Vec<Complex64>,
}

impl NQubitState {
    /// Validates length `2^n` (n >= 1) and unit norm within [`NORM_TOLERANCE`].
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::validation(format!(
                "amplitude count {len} is not 2^n with n >= 1"
            )));
        }
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::validation("amplitudes must be finite"));
        }
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::validation(format!("state norm^2 = {norm}, expected 1")));
        }
        Ok(NQubitState { qubit_count: len.trailing_zeros(), amplitudes })
    }

    /// Rescales `amplitudes` to unit norm before validating.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::validation("cannot normalize a zero or non-finite vector"));
        }
        NQubitState::new(amplitudes.into_iter().map(|z| z / norm).collect())
    }

    /// Computational basis state `|k>` on `n` qubits.
    pub fn basis(n: u32, k: usize) -> Result<Self> {
        let dim = 1usize << n;
        if n == 0 || k >= dim {
            return Err(Error::validation(format!("basis index {k} outside 0..2^{n}")));
        }
        let mut amps = vec![ZERO; dim];
        amps[k] = ONE;
        NQubitState::new(amps)
    }

    pub fn qubit_count(&self) -> u32 {
        self.qubit_count
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Born-rule probabilities `|c_k|^2`.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|z| z.norm_sqr()).collect()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &NQubitState) -> Complex64 {
        self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum()
    }
}

/// Shannon entropy in bits of a probability vector; zero entries contribute 0.
pub fn entropy_bits(probabilities: &[f64]) -> f64 {
    -probabilities.iter().filter(|&&p| p > 0.0).map(|&p| p * p.log2()).sum::<f64>()
}

/// Shannon entropy (bits) of the computational-basis measurement of `state`.
pub fn shannon_entropy(state: &NQubitState) -> f64 {
    entropy_bits(&state.probabilities())
}

/// `a ⊗ b`, with `a` in the high-order bits.
pub fn tensor_product(a: &NQubitState, b: &NQubitState) -> NQubitState {
    let amplitudes = a
        .amplitudes
        .iter()
        .flat_map(|x| b.amplitudes.iter().map(move |y| x * y))
        .collect();
    NQubitState { qubit_count: a.qubit_count + b.qubit_count, amplitudes }
}

/// `S(state) - S(left) - S(right)` where `left` holds the first `split`
/// qubits and the marginals are of the measurement distribution.
///
/// A nonzero gap shows the state is not a product across the split; a zero
/// gap proves nothing.
pub fn entropy_additivity_gap(state: &NQubitState, split: u32) -> Result<f64> {
    let n = state.qubit_count;
    if split < 1 || split >= n {
        return Err(Error::validation(format!("split {split} outside 1..{n}")));
    }
    let right_dim = 1usize << (n - split);
    let left_dim = 1usize << split;
    let probs = state.probabilities();
    let mut left = vec![0.0; left_dim];
    let mut right = vec![0.0; right_dim];
    for (idx, p) in probs.iter().enumerate() {
        left[idx / right_dim] += p;
        right[idx % right_dim] += p;
    }
    Ok(entropy_bits(&probs) - entropy_bits(&left) - entropy_bits(&right))
}

/// `(|0> + e^{i phi_1}|1> + ... + e^{i phi_{2^n-1}}|2^n-1>) / sqrt(2^n)`.
pub fn maximally_random_state(n: u32, phases: &[f64]) -> Result<NQubitState> {
    if n == 0 || n > 30 {
        return Err(Error::validation(format!("qubit count {n} outside 1..=30")));
    }
    let dim = 1usize << n;
    if phases.len() != dim - 1 {
        return Err(Error::validation(format!(
            "{} phases given, {} expected",
            phases.len(),
            dim - 1
        )));
    }
    let amp = 1.0 / (dim as f64).sqrt();
    let amplitudes = std::iter::once(0.0)
        .chain(phases.iter().copied())
        .map(|phi| Complex64::from_polar(amp, phi))
        .collect();
    NQubitState::new(amplitudes)
}

/// `e^{-2 pi i j / d}` for `j` in `0..d`.
fn conjugate_roots(d: usize) -> Vec<Complex64> {
    (0..d).map(|j| Complex64::from_polar(1.0, -2.0 * PI * j as f64 / d as f64)).collect()
}

/// Hadamard gate in `2^n` dimensions: entry `(k, l)` is `qbar^{k l} / sqrt(2^n)`
/// with `q = e^{2 pi i / 2^n}` and `k l` the ordinary product.
pub fn generalized_hadamard(n: u32) -> Result<ComplexMatrix> {
    if n == 0 || n > MAX_HADAMARD_QUBITS {
        return Err(Error::Resource(format!(
            "Hadamard on {n} qubits outside 1..={MAX_HADAMARD_QUBITS}"
        )));
    }
    let d = 1usize << n;
    let roots = conjugate_roots(d);
    let norm = 1.0 / (d as f64).sqrt();
    Ok(ComplexMatrix::from_fn(d, |k, l| roots[(k * l) % d] * norm))
}

/// Cyclic shift `|k> -> |k+1 mod d>`.
pub fn sylvester_shift(d: usize) -> Result<ComplexMatrix> {
    if d < 2 {
        return Err(Error::validation(format!("shift dimension must be >= 2, got {d}")));
    }
    Ok(ComplexMatrix::from_fn(d, |row, col| if row == (col + 1) % d { ONE } else { ZERO }))
}

/// Matrix Q-number `I + Q + Q^2 + ... + Q^{d-1}` for a `d x d` matrix `Q`.
pub fn matrix_q_number(q: &ComplexMatrix) -> ComplexMatrix {
    let d = q.dim();
    let mut term = ComplexMatrix::identity(d);
    let mut sum = term.clone();
    for _ in 1..d {
        term = q.mul(&term);
        sum = sum.add(&term);
    }
    sum
}

/// `H|k>` rebuilt as `[d]_{qbar^k Σ_1} |0> / sqrt(d)`.
pub fn coin_state_via_q_number(n: u32, k: usize) -> Result<Vec<Complex64>> {
    let d = 1usize << n;
    if n == 0 || k >= d {
        return Err(Error::validation(format!("coin index {k} outside 0..2^{n}")));
    }
    let qk = conjugate_roots(d)[k];
    let sum = matrix_q_number(&sylvester_shift(d)?.scale(qk));
    let mut zero = vec![ZERO; d];
    zero[0] = ONE;
    let norm = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
    Ok(sum.apply(&zero).into_iter().map(|z| z * norm).collect())
}

/// The `2^n` columns `H|k>` of the generalized Hadamard.
pub fn coin_state_family(n: u32) -> Result<Vec<NQubitState>> {
    let h = generalized_hadamard(n)?;
    (0..h.dim()).map(|k| NQubitState::new(h.column(k))).collect()
}

/// `sum_{s in set} |c_s|^2`, the expectation of the projector onto the span
/// of the given basis states. Duplicate indices count once.
pub fn projector_probability(
    state: &NQubitState,
    basis_indices: impl IntoIterator<Item = usize>,
) -> Result<f64> {
    let set: BTreeSet<usize> = basis_indices.into_iter().collect();
    if let Some(&bad) = set.iter().find(|&&s| s >= state.dim()) {
        return Err(Error::validation(format!(
            "basis index {bad} outside 0..{}",
            state.dim()
        )));
    }
    Ok(set.iter().map(|&s| state.amplitudes[s].norm_sqr()).sum())
}

/// Phase-shift gate `diag(1, e^{i phi})`.
pub fn phase_shift(phi: f64) -> ComplexMatrix {
    ComplexMatrix::from_fn(2, |i, j| match (i, j) {
        (0, 0) => ONE,
        (1, 1) => Complex64::from_polar(1.0, phi),
        _ => ZERO,
    })
}

/// Single-qubit coin state `(|0> + e^{i phi}|1>) / sqrt 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumCoinState {
    phase: f64,
    state: NQubitState,
}

impl QuantumCoinState {
    /// Prepared as `R(phi) H |0>`.
    pub fn new(phase: f64) -> Self {
        let h = generalized_hadamard(1).expect("one qubit is within budget");
        let amps = phase_shift(phase).mul(&h).column(0);
        let state = NQubitState::new(amps).expect("unitary image of |0> is normalized");
        QuantumCoinState { phase, state }
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    pub fn state(&self) -> &NQubitState {
        &self.state
    }
}

/// `cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>`.
pub fn bloch_state(theta: f64, phi: f64) -> Result<NQubitState> {
    NQubitState::new(vec![
        Complex64::new((theta / 2.0).cos(), 0.0),
        Complex64::from_polar((theta / 2.0).sin(), phi),
    ])
}

/// Serialized state: `qubit_count` plus `(index, re, im)` for each nonzero
/// amplitude.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateRecord {
    pub qubit_count: u32,
    pub amplitudes: Vec<(usize, f64, f64)>,
}

impl From<&NQubitState> for StateRecord {
    fn from(s: &NQubitState) -> Self {
        StateRecord {
            qubit_count: s.qubit_count,
            amplitudes: s
                .amplitudes
                .iter()
                .enumerate()
                .filter(|(_, z)| **z != ZERO)
                .map(|(i, z)| (i, z.re, z.im))
                .collect(),
        }
    }
}

impl TryFrom<&StateRecord> for NQubitState {
    type Error = Error;

    fn try_from(r: &StateRecord) -> Result<Self> {
        if r.qubit_count == 0 || r.qubit_count > 30 {
            return Err(Error::validation(format!("qubit count {} outside 1..=30", r.qubit_count)));
        }
        let dim = 1usize << r.qubit_count;
        let mut amps = vec![ZERO; dim];
        for &(i, re, im) in &r.amplitudes {
            if i >= dim {
                return Err(Error::validation(format!("amplitude index {i} outside 0..{dim}")));
            }
            amps[i] = Complex64::new(re, im);
        }
        NQubitState::new(amps)
    }
}

/// Serialized matrix: dimension plus row-major `(re, im)` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixRecord {
    pub dimension: usize,
    pub entries: Vec<(f64, f64)>,
}

impl From<&ComplexMatrix> for MatrixRecord {
    fn from(m: &ComplexMatrix) -> Self {
        MatrixRecord { dimension: m.dim, entries: m.entries.iter().map(|z| (z.re, z.im)).collect() }
    }
}

impl TryFrom<&MatrixRecord> for ComplexMatrix {
    type Error = Error;

    fn try_from(r: &MatrixRecord) -> Result<Self> {
        let entries = r.entries.iter().map(|&(re, im)| Complex64::new(re, im)).collect();
        ComplexMatrix::from_row_major(r.dimension, entries)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn plus() -> NQubitState {
        NQubitState::new(vec![c(FRAC_1_SQRT_2, 0.0); 2]).unwrap()
    }

    #[test]
    fn state_validation() {
        assert!(NQubitState::new(vec![c(1.0, 0.0)]).is_err());
        assert!(NQubitState::new(vec![c(1.0, 0.0), ZERO, ZERO]).is_err());
        assert!(NQubitState::new(vec![c(1.0, 0.0), c(1.0, 0.0)]).is_err());
        assert!(NQubitState::new(vec![c(f64::NAN, 0.0), ZERO]).is_err());
        let s = NQubitState::normalized(vec![c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
        assert!((s.probabilities()[1] - 0.5).abs() < 1e-15);
        assert!(NQubitState::normalized(vec![ZERO, ZERO]).is_err());
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(shannon_entropy(&NQubitState::basis(1, 0).unwrap()), 0.0);
        assert!((shannon_entropy(&plus()) - 1.0).abs() < 1e-12);
        let m = maximally_random_state(3, &[0.3; 7]).unwrap();
        assert!((shannon_entropy(&m) - 3.0).abs() < 1e-10);
    }

    #[test]
    fn tensor_examples() {
        let zero = NQubitState::basis(1, 0).unwrap();
        let one = NQubitState::basis(1, 1).unwrap();
        assert_eq!(tensor_product(&zero, &one), NQubitState::basis(2, 1).unwrap());
        assert_eq!(tensor_product(&one, &zero), NQubitState::basis(2, 2).unwrap());
        let pp = tensor_product(&plus(), &plus());
        assert!(max_abs_diff(pp.amplitudes(), &[c(0.5, 0.0); 4]) < 1e-15);
        let gap = shannon_entropy(&pp) - 2.0 * shannon_entropy(&plus());
        assert!(gap.abs() < 1e-10);
    }

    #[test]
    fn additivity_gap_examples() {
        let s00 = NQubitState::basis(2, 0).unwrap();
        assert_eq!(entropy_additivity_gap(&s00, 1).unwrap(), 0.0);
        let bell = NQubitState::new(vec![c(FRAC_1_SQRT_2, 0.0), ZERO, ZERO, c(FRAC_1_SQRT_2, 0.0)]).unwrap();
        assert!((entropy_additivity_gap(&bell, 1).unwrap() + 1.0).abs() < 1e-10);
        let pp = tensor_product(&plus(), &plus());
        assert!(entropy_additivity_gap(&pp, 1).unwrap().abs() < 1e-12);
        assert!(entropy_additivity_gap(&pp, 0).is_err());
        assert!(entropy_additivity_gap(&pp, 2).is_err());
    }

    #[test]
    fn maximally_random_examples() {
        let s = maximally_random_state(1, &[0.0]).unwrap();
        assert!(max_abs_diff(s.amplitudes(), plus().amplitudes()) < 1e-15);
        let minus = maximally_random_state(1, &[PI]).unwrap();
        assert!(max_abs_diff(minus.amplitudes(), &[c(FRAC_1_SQRT_2, 0.0), c(-FRAC_1_SQRT_2, 0.0)]) < 1e-15);

        // H|1> in four dimensions has entries qbar^j / 2 with qbar = -i
        let h = generalized_hadamard(2).unwrap();
        let col1 = maximally_random_state(2, &[1.5 * PI, PI, 0.5 * PI]).unwrap();
        assert!(max_abs_diff(col1.amplitudes(), &h.column(1)) < 1e-15);
        let col3 = maximally_random_state(2, &[0.5 * PI, PI, 1.5 * PI]).unwrap();
        assert!(max_abs_diff(col3.amplitudes(), &h.column(3)) < 1e-15);

        assert!(maximally_random_state(2, &[0.0; 2]).is_err());
    }

    #[test]
    fn hadamard_examples() {
        let h1 = generalized_hadamard(1).unwrap();
        let r = FRAC_1_SQRT_2;
        let expect = ComplexMatrix::from_row_major(2, vec![c(r, 0.0), c(r, 0.0), c(r, 0.0), c(-r, 0.0)]).unwrap();
        assert!(h1.max_abs_diff(&expect) < 1e-15);
        let h2 = generalized_hadamard(2).unwrap();
        assert!((h2.get(1, 1) - c(0.0, -0.5)).norm() < 1e-15);
        for n in 1..=6 {
            assert!(generalized_hadamard(n).unwrap().unitarity_residual() < 1e-12);
        }
        assert!(matches!(generalized_hadamard(11), Err(Error::Resource(_))));
        assert!(generalized_hadamard(0).is_err());
    }

    #[test]
    fn shift_examples() {
        let x = sylvester_shift(2).unwrap();
        let flip = ComplexMatrix::from_row_major(2, vec![ZERO, ONE, ONE, ZERO]).unwrap();
        assert_eq!(x, flip);
        let s4 = sylvester_shift(4).unwrap();
        let zero = NQubitState::basis(2, 0).unwrap();
        for k in 0..4 {
            assert_eq!(s4.pow(k as u32).apply(zero.amplitudes()), NQubitState::basis(2, k).unwrap().amplitudes());
        }
        assert_eq!(s4.pow(4), ComplexMatrix::identity(4));
        assert!(sylvester_shift(1).is_err());
    }

    #[test]
    fn q_number_examples() {
        assert_eq!(matrix_q_number(&ComplexMatrix::zeros(3)), ComplexMatrix::identity(3));
        let x = sylvester_shift(2).unwrap();
        let qn = matrix_q_number(&x.scale(c(-1.0, 0.0)));
        let i_minus_x = ComplexMatrix::identity(2).add(&x.scale(c(-1.0, 0.0)));
        assert_eq!(qn, i_minus_x);
        let minus = coin_state_via_q_number(1, 1).unwrap();
        assert!(max_abs_diff(&minus, &[c(FRAC_1_SQRT_2, 0.0), c(-FRAC_1_SQRT_2, 0.0)]) < 1e-15);
        let h = generalized_hadamard(2).unwrap();
        assert!(max_abs_diff(&coin_state_via_q_number(2, 1).unwrap(), &h.column(1)) < 1e-12);
    }

    #[test]
    fn coin_family_orthonormal_complete() {
        let fam = coin_state_family(1).unwrap();
        assert!(max_abs_diff(fam[0].amplitudes(), plus().amplitudes()) < 1e-15);
        for n in 1..=4 {
            let fam = coin_state_family(n).unwrap();
            let d = fam.len();
            let mut completeness = ComplexMatrix::zeros(d);
            for (k, a) in fam.iter().enumerate() {
                assert!((shannon_entropy(a) - n as f64).abs() < 1e-10);
                for (l, b) in fam.iter().enumerate() {
                    let expect = if k == l { ONE } else { ZERO };
                    assert!((a.inner(b) - expect).norm() < 1e-12);
                }
                let outer = ComplexMatrix::from_fn(d, |i, j| a.amplitudes()[i] * a.amplitudes()[j].conj());
                completeness = completeness.add(&outer);
            }
            assert!(completeness.max_abs_diff(&ComplexMatrix::identity(d)) < 1e-12);
        }
    }

    #[test]
    fn projector_examples() {
        let m = maximally_random_state(3, &[1.0; 7]).unwrap();
        assert!((projector_probability(&m, [2, 3, 4]).unwrap() - 3.0 / 8.0).abs() < 1e-12);
        assert!((projector_probability(&m, [2, 2, 3]).unwrap() - 2.0 / 8.0).abs() < 1e-12);
        assert!((projector_probability(&plus(), 0..2).unwrap() - 1.0).abs() < 1e-12);
        assert!(projector_probability(&m, [8]).is_err());
    }

    #[test]
    fn coin_state_preparation() {
        for phase in [0.0, 0.4, PI, 5.0] {
            let coin = QuantumCoinState::new(phase);
            let expect = [c(FRAC_1_SQRT_2, 0.0), Complex64::from_polar(FRAC_1_SQRT_2, phase)];
            assert!(max_abs_diff(coin.state().amplitudes(), &expect) < 1e-15);
            assert!((shannon_entropy(coin.state()) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn records_round_trip() {
        let s = maximally_random_state(2, &[0.1, 0.2, 0.3]).unwrap();
        let r = StateRecord::from(&s);
        assert_eq!(NQubitState::try_from(&r).unwrap(), s);
        let bad = StateRecord { qubit_count: 1, amplitudes: vec![(2, 1.0, 0.0)] };
        assert!(NQubitState::try_from(&bad).is_err());
        let h = generalized_hadamard(2).unwrap();
        assert_eq!(ComplexMatrix::try_from(&MatrixRecord::from(&h)).unwrap(), h);
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.starts_with("{\"qubit_count\":2,\"amplitudes\":[[0,"));
    }
}
