//! Tensor-factorizability of oracles and pure states.
//!
//! A phase oracle is a product of single-qubit gates exactly when its
//! function is affine over GF(2). The operator Schmidt decomposition
//! (singular values of the realigned operator) is kept as an independent
//! check, and pure-state entanglement is witnessed through the purity of a
//! reduced density matrix.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::dj::{
    build_phase_oracle, classify_function, is_affine, AffineForm, BooleanFunction, PhaseOracle,
    PromiseClass,
};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::state::{
    bit_of, c, partial_trace, purity, tensor_all, to_density, StateVector, UnitaryMatrix,
    UNITARY_TOL,
};

/// Singular values at or below this are treated as zero.
pub const RANK_TOL: f64 = 1e-10;

/// Split of qubits `1..=n` into two nonempty, disjoint, covering parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bipartition {
    left: Vec<usize>,
    right: Vec<usize>,
}

impl Bipartition {
    pub fn new(left: Vec<usize>, right: Vec<usize>, n_qubits: usize) -> Result<Self> {
        if left.is_empty() || right.is_empty() {
            return Err(Error::InvalidBipartition("both parts must be nonempty"));
        }
        let mut seen = vec![false; n_qubits + 1];
        for &q in left.iter().chain(&right) {
            if q == 0 || q > n_qubits {
                return Err(Error::LabelOutOfRange { label: q, n_qubits });
            }
            if seen[q] {
                return Err(Error::InvalidBipartition("parts overlap or repeat a label"));
            }
            seen[q] = true;
        }
        if left.len() + right.len() != n_qubits {
            return Err(Error::InvalidBipartition("parts do not cover every qubit"));
        }
        Ok(Bipartition { left, right })
    }

    /// The cut `{1..k} | {k+1..n}`.
    pub fn adjacent(k: usize, n_qubits: usize) -> Result<Self> {
        Self::new((1..=k).collect(), (k + 1..=n_qubits).collect(), n_qubits)
    }

    /// All cuts `{1..k} | {k+1..n}` for `k = 1..n-1`.
    pub fn all_adjacent(n_qubits: usize) -> Vec<Self> {
        (1..n_qubits)
            .map(|k| Self::adjacent(k, n_qubits).expect("valid adjacent cut"))
            .collect()
    }

    /// Every unordered bipartition, listed once with qubit 1 on the left.
    pub fn all(n_qubits: usize) -> Vec<Self> {
        if n_qubits < 2 {
            return Vec::new();
        }
        (0..1usize << (n_qubits - 1))
            .filter_map(|mask| {
                let (left, right): (Vec<usize>, Vec<usize>) =
                    (1..=n_qubits).partition(|&q| q == 1 || mask >> (q - 2) & 1 == 1);
                Bipartition::new(left, right, n_qubits).ok()
            })
            .collect()
    }

    pub fn left(&self) -> &[usize] {
        &self.left
    }

    pub fn right(&self) -> &[usize] {
        &self.right
    }

    pub fn n_qubits(&self) -> usize {
        self.left.len() + self.right.len()
    }
}

/// Collects the bits of `x` at `labels` into a value, MSB-first.
fn gather(x: usize, labels: &[usize], n_qubits: usize) -> usize {
    labels
        .iter()
        .fold(0, |acc, &q| (acc << 1) | ((x >> bit_of(q, n_qubits)) & 1))
}

/// Realigned operator `M[(i,i'),(j,j')] = U[(i,j),(i',j')]`, where `i`, `i'`
/// index the left part and `j`, `j'` the right part.
pub fn realign(u: &UnitaryMatrix, cut: &Bipartition) -> Result<DMatrix<Complex64>> {
    let n = u.n_qubits();
    if cut.n_qubits() != n {
        return Err(Error::DimensionMismatch {
            expected: 1 << cut.n_qubits(),
            found: u.dim(),
        });
    }
    let left_dim = 1usize << cut.left.len();
    let right_dim = 1usize << cut.right.len();
    let mut m = DMatrix::zeros(left_dim * left_dim, right_dim * right_dim);
    let e = u.entries();
    for row in 0..u.dim() {
        let (i, j) = (gather(row, &cut.left, n), gather(row, &cut.right, n));
        for col in 0..u.dim() {
            let (ip, jp) = (gather(col, &cut.left, n), gather(col, &cut.right, n));
            m[(i * left_dim + ip, j * right_dim + jp)] = e[(row, col)];
        }
    }
    Ok(m)
}

fn sorted_singular_values(m: DMatrix<Complex64>) -> Vec<f64> {
    let mut values: Vec<f64> = m.singular_values().iter().copied().collect();
    values.sort_by(|a, b| b.total_cmp(a));
    values
}

/// Operator Schmidt coefficients of `u` across `cut`, nonincreasing.
pub fn operator_schmidt(u: &UnitaryMatrix, cut: &Bipartition) -> Result<Vec<f64>> {
    Ok(sorted_singular_values(realign(u, cut)?))
}

pub fn schmidt_rank(values: &[f64]) -> usize {
    values.iter().filter(|&&v| v > RANK_TOL).count()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FactorStatus {
    Product,
    Entangling,
}

impl std::fmt::Display for FactorStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            FactorStatus::Product => "product",
            FactorStatus::Entangling => "entangling",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FactorizationResult {
    pub status: FactorStatus,
    /// One 2x2 factor per qubit, qubit 1 first. Present iff `Product`.
    pub factors: Option<Vec<UnitaryMatrix>>,
    pub global_phase: Option<Complex64>,
    /// Operator Schmidt values across `{1} | {2..n}`. For a single qubit
    /// there is no cut and this is `[‖U‖_F]`.
    pub schmidt_values: Vec<f64>,
    pub affine: Option<AffineForm>,
}

impl FactorizationResult {
    /// `global_phase · (factor_1 ⊗ … ⊗ factor_n)`, when factors exist.
    pub fn reconstruct(&self) -> Option<UnitaryMatrix> {
        let factors = self.factors.as_ref()?;
        let phase = self.global_phase?;
        let product = tensor_all(factors)?;
        Some(UnitaryMatrix::from_raw(product.entries() * phase))
    }
}

fn diag_sign(negative: bool) -> UnitaryMatrix {
    let d = if negative { -1.0 } else { 1.0 };
    UnitaryMatrix::from_raw(DMatrix::from_row_slice(
        2,
        2,
        &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(d, 0.0)],
    ))
}

/// Splits a phase oracle into `±diag(1, (-1)^{a_1}) ⊗ … ⊗ diag(1, (-1)^{a_n})`
/// when its function is affine.
pub fn factorize_oracle(oracle: &PhaseOracle) -> FactorizationResult {
    let n = oracle.n_qubits();
    let u = oracle.to_unitary();
    let schmidt_values = if n >= 2 {
        let cut = Bipartition::adjacent(1, n).expect("n >= 2");
        operator_schmidt(&u, &cut).expect("cut matches oracle")
    } else {
        vec![u.frobenius_norm()]
    };
    let affine = is_affine(&oracle.function());
    match &affine {
        Some(form) => FactorizationResult {
            status: FactorStatus::Product,
            factors: Some(form.linear.iter().map(|&a| diag_sign(a)).collect()),
            global_phase: Some(c(if form.offset { -1.0 } else { 1.0 }, 0.0)),
            schmidt_values,
            affine,
        },
        None => FactorizationResult {
            status: FactorStatus::Entangling,
            factors: None,
            global_phase: None,
            schmidt_values,
            affine,
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntanglementWitness {
    pub entangled: bool,
    /// Purity of the reduced state on the right part of the cut.
    pub purity: f64,
}

/// Pure-state entanglement across `cut`, witnessed by a mixed reduced state.
pub fn state_is_entangled(s: &StateVector, cut: &Bipartition) -> Result<EntanglementWitness> {
    if cut.n_qubits() != s.n_qubits() {
        return Err(Error::InvalidBipartition(
            "cut does not match the state size",
        ));
    }
    let reduced = partial_trace(&to_density(s), &cut.right)?;
    let p = purity(&reduced);
    Ok(EntanglementWitness {
        entangled: p < 1.0 - UNITARY_TOL,
        purity: p,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleRecord {
    pub function: BooleanFunction,
    pub class: PromiseClass,
    pub factorization: FactorizationResult,
    /// Operator Schmidt rank on each cut `{1..k} | {k+1..n}`, `k = 1..n-1`.
    pub adjacent_ranks: Vec<usize>,
    /// Frobenius error of the product reconstruction, when `Product`.
    pub reconstruction_error: Option<f64>,
    /// Affinity, Schmidt ranks and reconstruction all tell the same story.
    pub checks_agree: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleClassification {
    pub n_bits: usize,
    pub product: usize,
    pub entangling: usize,
    /// Sorted by truth table.
    pub records: Vec<OracleRecord>,
}

impl OracleClassification {
    pub fn total(&self) -> usize {
        self.product + self.entangling
    }

    pub fn all_checks_agree(&self) -> bool {
        self.records.iter().all(|r| r.checks_agree)
    }
}

pub fn classify_oracle(f: &BooleanFunction) -> OracleRecord {
    let oracle = build_phase_oracle(f);
    let u = oracle.to_unitary();
    let factorization = factorize_oracle(&oracle);
    let adjacent_ranks: Vec<usize> = Bipartition::all_adjacent(f.n_bits())
        .iter()
        .map(|cut| schmidt_rank(&operator_schmidt(&u, cut).expect("cut matches oracle")))
        .collect();
    let reconstruction_error = factorization
        .reconstruct()
        .map(|r| r.frobenius_distance(&u));

    let is_product = factorization.status == FactorStatus::Product;
    let ranks_say_product = adjacent_ranks.iter().all(|&r| r == 1);
    let reconstruction_ok = reconstruction_error.is_some_and(|e| e < UNITARY_TOL);
    let checks_agree = is_product == ranks_say_product && is_product == reconstruction_ok;

    OracleRecord {
        function: f.clone(),
        class: classify_function(f),
        factorization,
        adjacent_ranks,
        reconstruction_error,
        checks_agree,
    }
}

/// Factorizes the oracle of every promise function on `n` bits.
pub fn classify_all_oracles(n: usize) -> Result<OracleClassification> {
    Limits::default().classify_all_oracles(n)
}

impl Limits {
    pub fn classify_all_oracles(&self, n: usize) -> Result<OracleClassification> {
        let mut records: Vec<OracleRecord> = self
            .enumerate_promise_functions(n)?
            .iter()
            .map(classify_oracle)
            .collect();
        records.sort_by(|a, b| a.function.table().cmp(b.function.table()));
        let product = records
            .iter()
            .filter(|r| r.factorization.status == FactorStatus::Product)
            .count();
        Ok(OracleClassification {
            n_bits: n,
            product,
            entangling: records.len() - product,
            records,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dj::hadamard_n;
    use crate::state::apply;

    fn bf(s: &str) -> BooleanFunction {
        s.parse().unwrap()
    }

    fn oracle_unitary(s: &str) -> UnitaryMatrix {
        build_phase_oracle(&bf(s)).to_unitary()
    }

    #[test]
    fn bipartition_validation() {
        assert!(Bipartition::new(vec![1], vec![2, 3], 3).is_ok());
        assert!(Bipartition::new(vec![], vec![1, 2], 2).is_err());
        assert!(Bipartition::new(vec![1], vec![1, 2], 2).is_err());
        assert!(Bipartition::new(vec![1], vec![2], 3).is_err());
        assert!(Bipartition::new(vec![1], vec![4], 2).is_err());
        assert_eq!(Bipartition::all(3).len(), 3);
        assert_eq!(Bipartition::all(4).len(), 7);
        assert!(Bipartition::all(1).is_empty());
        assert_eq!(Bipartition::all_adjacent(3).len(), 2);
    }

    #[test]
    fn hadamard_has_rank_one_on_every_cut() {
        let h = hadamard_n(2).unwrap();
        let cut = Bipartition::adjacent(1, 2).unwrap();
        let values = operator_schmidt(&h, &cut).unwrap();
        assert_eq!(schmidt_rank(&values), 1);
        assert!((values[0] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn controlled_z_has_two_equal_values() {
        let u = oracle_unitary("0001");
        let cut = Bipartition::adjacent(1, 2).unwrap();
        let values = operator_schmidt(&u, &cut).unwrap();
        assert_eq!(schmidt_rank(&values), 2);
        assert!((values[0] - 2f64.sqrt()).abs() < 1e-12);
        assert!((values[1] - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn mismatched_cut_is_rejected() {
        let u = oracle_unitary("0110");
        let cut = Bipartition::adjacent(1, 3).unwrap();
        assert!(operator_schmidt(&u, &cut).is_err());
    }

    #[test]
    fn two_bit_factorizations() {
        let r = factorize_oracle(&build_phase_oracle(&bf("0101")));
        assert_eq!(r.status, FactorStatus::Product);
        let factors = r.factors.as_ref().unwrap();
        assert_eq!(factors[0], diag_sign(false));
        assert_eq!(factors[1], diag_sign(true));
        assert_eq!(r.global_phase, Some(c(1.0, 0.0)));

        let r = factorize_oracle(&build_phase_oracle(&bf("0110")));
        let factors = r.factors.as_ref().unwrap();
        assert_eq!(factors[0], diag_sign(true));
        assert_eq!(factors[1], diag_sign(true));
    }

    #[test]
    fn entangling_three_bit_oracle() {
        let r = factorize_oracle(&build_phase_oracle(&bf("01001110")));
        assert_eq!(r.status, FactorStatus::Entangling);
        assert!(r.factors.is_none());
        assert!(schmidt_rank(&r.schmidt_values) > 1);
    }

    #[test]
    fn single_qubit_oracles_are_products() {
        for t in ["00", "11", "01", "10"] {
            let r = factorize_oracle(&build_phase_oracle(&bf(t)));
            assert_eq!(r.status, FactorStatus::Product);
            assert_eq!(r.schmidt_values.len(), 1);
        }
    }

    #[test]
    fn witness_on_worked_example_state() {
        let s = StateVector::from_real(
            &[1.0, 1.0, -1.0, 1.0, -1.0, -1.0, -1.0, 1.0].map(|v| v / (2.0 * 2f64.sqrt())),
        )
        .unwrap();
        let cut = Bipartition::new(vec![1], vec![2, 3], 3).unwrap();
        let w = state_is_entangled(&s, &cut).unwrap();
        assert!(w.entangled);
        assert!((w.purity - 0.5).abs() < 1e-12);

        let product = hadamard_n(3)
            .map(|h| apply(&h, &StateVector::basis(3, 0)).unwrap())
            .unwrap();
        let w = state_is_entangled(&product, &cut).unwrap();
        assert!(!w.entangled);
        assert!((w.purity - 1.0).abs() < 1e-12);

        let bad = Bipartition::adjacent(1, 2).unwrap();
        assert!(state_is_entangled(&s, &bad).is_err());
    }

    #[test]
    fn classification_small_n() {
        let c1 = classify_all_oracles(1).unwrap();
        assert_eq!((c1.product, c1.entangling), (4, 0));
        let c2 = classify_all_oracles(2).unwrap();
        assert_eq!((c2.product, c2.entangling), (8, 0));
        assert!(c2.all_checks_agree());
        let tables: Vec<String> = c2.records.iter().map(|r| r.function.to_string()).collect();
        let mut sorted = tables.clone();
        sorted.sort();
        assert_eq!(tables, sorted);
    }
}
