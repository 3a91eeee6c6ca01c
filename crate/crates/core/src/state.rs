//! Dense pure states, density matrices and unitaries over `n` qubits.
//!
//! Basis index `x` is read MSB-first: qubit 1 is the most significant bit of
//! `x` and the leftmost factor of every tensor product.

use nalgebra::{DMatrix, DVector, Matrix2};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance on structural invariants (normalization, hermiticity, trace).
pub const STRUCTURE_TOL: f64 = 1e-12;
/// Tolerance on unitarity, eigenvalue signs and mixedness.
pub const UNITARY_TOL: f64 = 1e-10;

pub(crate) fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub(crate) fn qubits_for_dim(dim: usize) -> Result<usize> {
    if dim == 0 || !dim.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(dim));
    }
    Ok(dim.trailing_zeros() as usize)
}

/// Bit position of a 1-based qubit label inside an `n`-qubit basis index.
#[inline]
pub(crate) fn bit_of(label: usize, n_qubits: usize) -> usize {
    n_qubits - label
}

pub(crate) fn frobenius(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// A normalized amplitude vector of length `2^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: DVector<Complex64>,
}

impl StateVector {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let n_qubits = qubits_for_dim(amplitudes.len())?;
        let amplitudes = DVector::from_vec(amplitudes);
        let norm = amplitudes.norm_squared();
        if (norm - 1.0).abs() > STRUCTURE_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(StateVector {
            n_qubits,
            amplitudes,
        })
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::new(amplitudes.iter().map(|&a| c(a, 0.0)).collect())
    }

    /// Computational basis state `|index>`.
    pub fn basis(n_qubits: usize, index: usize) -> Self {
        let dim = 1usize << n_qubits;
        assert!(
            index < dim,
            "basis index {index} out of range for {n_qubits} qubits"
        );
        let mut amplitudes = DVector::zeros(dim);
        amplitudes[index] = c(1.0, 0.0);
        StateVector {
            n_qubits,
            amplitudes,
        }
    }

    pub(crate) fn from_raw(n_qubits: usize, amplitudes: DVector<Complex64>) -> Self {
        debug_assert_eq!(amplitudes.len(), 1 << n_qubits);
        StateVector {
            n_qubits,
            amplitudes,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        self.amplitudes.as_slice()
    }

    pub fn as_vector(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    pub fn norm_squared(&self) -> f64 {
        self.amplitudes.norm_squared()
    }

    /// Applies a 2x2 gate to one qubit (1-based label) without building the
    /// full `2^n` operator.
    pub fn apply_single_qubit(&self, gate: &Matrix2<Complex64>, qubit: usize) -> Result<Self> {
        if qubit == 0 || qubit > self.n_qubits {
            return Err(Error::LabelOutOfRange {
                label: qubit,
                n_qubits: self.n_qubits,
            });
        }
        let mask = 1usize << bit_of(qubit, self.n_qubits);
        let mut out = self.amplitudes.clone();
        for i in (0..self.dim()).filter(|i| i & mask == 0) {
            let a0 = self.amplitudes[i];
            let a1 = self.amplitudes[i | mask];
            out[i] = gate[(0, 0)] * a0 + gate[(0, 1)] * a1;
            out[i | mask] = gate[(1, 0)] * a0 + gate[(1, 1)] * a1;
        }
        Ok(StateVector::from_raw(self.n_qubits, out))
    }
}

/// A square unitary of power-of-two dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix {
    n_qubits: usize,
    entries: DMatrix<Complex64>,
}

impl UnitaryMatrix {
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self> {
        if !entries.is_square() {
            return Err(Error::DimensionMismatch {
                expected: entries.nrows(),
                found: entries.ncols(),
            });
        }
        let n_qubits = qubits_for_dim(entries.nrows())?;
        let defect = frobenius(
            &(entries.adjoint() * &entries - DMatrix::identity(entries.nrows(), entries.ncols())),
        );
        if defect > UNITARY_TOL {
            return Err(Error::NotUnitary(defect));
        }
        Ok(UnitaryMatrix { n_qubits, entries })
    }

    pub fn identity(n_qubits: usize) -> Self {
        let dim = 1usize << n_qubits;
        UnitaryMatrix {
            n_qubits,
            entries: DMatrix::identity(dim, dim),
        }
    }

    pub fn from_matrix2(m: Matrix2<Complex64>) -> Result<Self> {
        Self::new(DMatrix::from_iterator(2, 2, m.iter().copied()))
    }

    pub(crate) fn from_raw(entries: DMatrix<Complex64>) -> Self {
        let n_qubits = entries.nrows().trailing_zeros() as usize;
        debug_assert_eq!(entries.nrows(), 1 << n_qubits);
        UnitaryMatrix { n_qubits, entries }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn adjoint(&self) -> Self {
        UnitaryMatrix::from_raw(self.entries.adjoint())
    }

    /// Matrix product `self · other`.
    pub fn compose(&self, other: &UnitaryMatrix) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(UnitaryMatrix::from_raw(&self.entries * &other.entries))
    }

    pub fn frobenius_distance(&self, other: &UnitaryMatrix) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        frobenius(&(&self.entries - &other.entries))
    }

    pub fn frobenius_norm(&self) -> f64 {
        frobenius(&self.entries)
    }
}

/// Hermitian, positive semidefinite, unit-trace matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    entries: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self> {
        if !entries.is_square() {
            return Err(Error::NotDensityMatrix("not square"));
        }
        let n_qubits = qubits_for_dim(entries.nrows())?;
        if frobenius(&(&entries - entries.adjoint())) > STRUCTURE_TOL {
            return Err(Error::NotDensityMatrix("not Hermitian"));
        }
        if (entries.trace() - c(1.0, 0.0)).norm() > STRUCTURE_TOL {
            return Err(Error::NotDensityMatrix("trace is not 1"));
        }
        let min_eig = entries
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        if min_eig < -UNITARY_TOL {
            return Err(Error::NotDensityMatrix("negative eigenvalue"));
        }
        Ok(DensityMatrix { n_qubits, entries })
    }

    pub(crate) fn from_raw(n_qubits: usize, entries: DMatrix<Complex64>) -> Self {
        DensityMatrix { n_qubits, entries }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.trace()
    }
}

/// Kronecker product with the left operand's indices most significant.
pub trait Tensor: Sized {
    fn tensor(&self, other: &Self) -> Self;
}

impl Tensor for StateVector {
    fn tensor(&self, other: &Self) -> Self {
        StateVector::from_raw(
            self.n_qubits + other.n_qubits,
            self.amplitudes.kronecker(&other.amplitudes),
        )
    }
}

impl Tensor for UnitaryMatrix {
    fn tensor(&self, other: &Self) -> Self {
        UnitaryMatrix::from_raw(self.entries.kronecker(&other.entries))
    }
}

impl Tensor for DensityMatrix {
    fn tensor(&self, other: &Self) -> Self {
        DensityMatrix::from_raw(
            self.n_qubits + other.n_qubits,
            self.entries.kronecker(&other.entries),
        )
    }
}

pub fn tensor<T: Tensor>(a: &T, b: &T) -> T {
    a.tensor(b)
}

/// Left-to-right tensor product of all items; `None` for an empty slice.
pub fn tensor_all<T: Tensor + Clone>(items: &[T]) -> Option<T> {
    let (first, rest) = items.split_first()?;
    Some(rest.iter().fold(first.clone(), |acc, x| acc.tensor(x)))
}

pub fn apply(u: &UnitaryMatrix, s: &StateVector) -> Result<StateVector> {
    if u.dim() != s.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.dim(),
            found: s.dim(),
        });
    }
    Ok(StateVector::from_raw(
        s.n_qubits,
        &u.entries * &s.amplitudes,
    ))
}

/// Pure-state projector `|s><s|`.
pub fn to_density(s: &StateVector) -> DensityMatrix {
    DensityMatrix::from_raw(s.n_qubits, &s.amplitudes * s.amplitudes.adjoint())
}

fn validate_labels(labels: &[usize], n_qubits: usize) -> Result<()> {
    let mut seen = vec![false; n_qubits + 1];
    for &label in labels {
        if label == 0 || label > n_qubits {
            return Err(Error::LabelOutOfRange { label, n_qubits });
        }
        if seen[label] {
            return Err(Error::DuplicateLabel(label));
        }
        seen[label] = true;
    }
    Ok(())
}

/// Spreads the bits of `value` (MSB-first over `labels`) into an `n`-qubit index.
fn scatter(value: usize, labels: &[usize], n_qubits: usize) -> usize {
    let m = labels.len();
    labels.iter().enumerate().fold(0, |acc, (pos, &label)| {
        let bit = (value >> (m - 1 - pos)) & 1;
        acc | (bit << bit_of(label, n_qubits))
    })
}

/// Reduced density matrix on `keep` (1-based labels), ordered as given.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    if keep.is_empty() {
        return Err(Error::EmptyKeep);
    }
    let n = rho.n_qubits;
    validate_labels(keep, n)?;
    let traced: Vec<usize> = (1..=n).filter(|q| !keep.contains(q)).collect();
    let kept_dim = 1usize << keep.len();
    let traced_dim = 1usize << traced.len();

    let mut out = DMatrix::zeros(kept_dim, kept_dim);
    for r in 0..kept_dim {
        let row_base = scatter(r, keep, n);
        for col in 0..kept_dim {
            let col_base = scatter(col, keep, n);
            let mut acc = c(0.0, 0.0);
            for t in 0..traced_dim {
                let env = scatter(t, &traced, n);
                acc += rho.entries[(row_base | env, col_base | env)];
            }
            out[(r, col)] = acc;
        }
    }
    Ok(DensityMatrix::from_raw(keep.len(), out))
}

/// `tr(ρ²)`.
pub fn purity(rho: &DensityMatrix) -> f64 {
    let e = &rho.entries;
    let mut acc = 0.0;
    for i in 0..e.nrows() {
        for j in 0..e.ncols() {
            acc += (e[(i, j)] * e[(j, i)]).re;
        }
    }
    acc
}

/// Mixedness criterion: purity below `1 - 1e-10`.
pub fn is_mixed(rho: &DensityMatrix) -> bool {
    purity(rho) < 1.0 - UNITARY_TOL
}
