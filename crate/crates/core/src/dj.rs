//! Boolean functions under the Deutsch promise, phase oracles, Hadamard
//! transforms and the ancilla-free Deutsch-Jozsa circuit `H^n U_f H^n`.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::state::{c, StateVector, UnitaryMatrix, STRUCTURE_TOL};

/// Threshold on `|amplitude|²` separating the two promise verdicts.
pub const VERDICT_TOL: f64 = 1e-9;

/// Truth table of `f: {0,1}^n -> {0,1}`, indexed MSB-first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BooleanFunction {
    n_bits: usize,
    table: Vec<bool>,
}

impl BooleanFunction {
    pub fn new(table: Vec<bool>) -> Result<Self> {
        let len = table.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::MalformedTable(format!(
                "length {len} is not a power of two of at least 2"
            )));
        }
        Ok(BooleanFunction {
            n_bits: len.trailing_zeros() as usize,
            table,
        })
    }

    pub fn from_fn(n_bits: usize, f: impl Fn(usize) -> bool) -> Self {
        assert!(n_bits > 0);
        BooleanFunction {
            n_bits,
            table: (0..1usize << n_bits).map(f).collect(),
        }
    }

    pub fn constant(n_bits: usize, value: bool) -> Self {
        Self::from_fn(n_bits, |_| value)
    }

    pub fn n_bits(&self) -> usize {
        self.n_bits
    }

    pub fn table(&self) -> &[bool] {
        &self.table
    }

    pub fn eval(&self, x: usize) -> bool {
        self.table[x]
    }

    pub fn ones(&self) -> usize {
        self.table.iter().filter(|&&b| b).count()
    }

    pub fn complement(&self) -> Self {
        BooleanFunction {
            n_bits: self.n_bits,
            table: self.table.iter().map(|b| !b).collect(),
        }
    }
}

impl FromStr for BooleanFunction {
    type Err = Error;

    /// Parses a string of `0`/`1`, leftmost character is `f(0…0)`.
    fn from_str(s: &str) -> Result<Self> {
        let table = s
            .chars()
            .map(|ch| match ch {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::MalformedTable(format!(
                    "unexpected character {other:?}"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(table)
    }
}

impl fmt::Display for BooleanFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.table {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PromiseClass {
    Constant,
    Balanced,
    Neither,
}

impl fmt::Display for PromiseClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PromiseClass::Constant => "constant",
            PromiseClass::Balanced => "balanced",
            PromiseClass::Neither => "neither",
        })
    }
}

pub fn classify_function(f: &BooleanFunction) -> PromiseClass {
    let ones = f.ones();
    let size = f.table.len();
    if ones == 0 || ones == size {
        PromiseClass::Constant
    } else if 2 * ones == size {
        PromiseClass::Balanced
    } else {
        PromiseClass::Neither
    }
}

/// Number of promise functions on `n` bits, `C(2^n, 2^(n-1)) + 2`.
pub fn promise_function_count(n: usize) -> u128 {
    let big = 1u128 << n;
    let half = big / 2;
    let mut binom: u128 = 1;
    for i in 0..half {
        binom = binom * (big - i) / (i + 1);
    }
    binom + 2
}

/// Every constant and balanced function on `n` bits: all-zeros, all-ones,
/// then the balanced tables in increasing order read as binary numbers.
pub fn enumerate_promise_functions(n: usize) -> Result<Vec<BooleanFunction>> {
    Limits::default().enumerate_promise_functions(n)
}

impl Limits {
    pub fn enumerate_promise_functions(&self, n: usize) -> Result<Vec<BooleanFunction>> {
        if n == 0 {
            return Err(Error::MalformedTable(
                "functions need at least one input bit".into(),
            ));
        }
        self.check_enumeration(n)?;
        let size = 1usize << n;
        // Gosper's hack walks fixed-popcount words in increasing order.
        assert!(
            size <= 64,
            "enumeration beyond 6 bits does not fit a machine word"
        );
        let to_function =
            |word: u64| BooleanFunction::from_fn(n, |x| (word >> (size - 1 - x)) & 1 == 1);

        let mut out = vec![
            BooleanFunction::constant(n, false),
            BooleanFunction::constant(n, true),
        ];
        let limit: u128 = 1u128 << size;
        let mut word: u64 = (1u64 << (size / 2)) - 1;
        while (word as u128) < limit {
            out.push(to_function(word));
            let lowest = word & word.wrapping_neg();
            let ripple = word as u128 + lowest as u128;
            if ripple >= limit {
                break;
            }
            let ripple = ripple as u64;
            word = (((ripple ^ word) >> 2) / lowest) | ripple;
        }
        Ok(out)
    }

    pub fn hadamard_n(&self, n: usize) -> Result<UnitaryMatrix> {
        self.check_qubits(n)?;
        let dim = 1usize << n;
        let scale = (dim as f64).sqrt().recip();
        let m = DMatrix::from_fn(dim, dim, |y, x| {
            let sign = if (x & y).count_ones() % 2 == 0 {
                1.0
            } else {
                -1.0
            };
            c(sign * scale, 0.0)
        });
        Ok(UnitaryMatrix::from_raw(m))
    }
}

/// Diagonal `±1` unitary with `diagonal[x] = (-1)^f(x)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhaseOracle {
    n_qubits: usize,
    diagonal: Vec<i8>,
}

impl PhaseOracle {
    pub fn from_diagonal(diagonal: Vec<i8>) -> Result<Self> {
        let len = diagonal.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(len));
        }
        if let Some(i) = diagonal.iter().position(|&d| d != 1 && d != -1) {
            return Err(Error::NotPhase(i));
        }
        Ok(PhaseOracle {
            n_qubits: len.trailing_zeros() as usize,
            diagonal,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn diagonal(&self) -> &[i8] {
        &self.diagonal
    }

    /// The Boolean function whose phases this oracle encodes.
    pub fn function(&self) -> BooleanFunction {
        BooleanFunction {
            n_bits: self.n_qubits,
            table: self.diagonal.iter().map(|&d| d == -1).collect(),
        }
    }

    pub fn to_unitary(&self) -> UnitaryMatrix {
        let dim = self.diagonal.len();
        let mut m = DMatrix::zeros(dim, dim);
        for (i, &d) in self.diagonal.iter().enumerate() {
            m[(i, i)] = c(d as f64, 0.0);
        }
        UnitaryMatrix::from_raw(m)
    }

    /// Multiplies amplitudes by the diagonal.
    pub fn apply(&self, s: &StateVector) -> Result<StateVector> {
        if s.dim() != self.diagonal.len() {
            return Err(Error::DimensionMismatch {
                expected: self.diagonal.len(),
                found: s.dim(),
            });
        }
        let v = s
            .as_vector()
            .iter()
            .zip(&self.diagonal)
            .map(|(a, &d)| a * d as f64)
            .collect::<Vec<_>>();
        Ok(StateVector::from_raw(
            s.n_qubits(),
            nalgebra::DVector::from_vec(v),
        ))
    }
}

pub fn build_phase_oracle(f: &BooleanFunction) -> PhaseOracle {
    PhaseOracle {
        n_qubits: f.n_bits,
        diagonal: f.table.iter().map(|&b| if b { -1 } else { 1 }).collect(),
    }
}

pub fn hadamard_1() -> Matrix2<Complex64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Matrix2::new(c(s, 0.0), c(s, 0.0), c(s, 0.0), c(-s, 0.0))
}

/// `H^{⊗n}` with entry `(y, x) = 2^{-n/2} (-1)^{x·y}`.
pub fn hadamard_n(n: usize) -> Result<UnitaryMatrix> {
    Limits::default().hadamard_n(n)
}

/// Applies `H` to every qubit of `s`.
pub fn hadamard_all(s: &StateVector) -> StateVector {
    let h = hadamard_1();
    (1..=s.n_qubits()).fold(s.clone(), |acc, q| {
        acc.apply_single_qubit(&h, q).expect("qubit label in range")
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Constant,
    Balanced,
    PromiseViolated,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Constant => "Constant",
            Verdict::Balanced => "Balanced",
            Verdict::PromiseViolated => "PromiseViolated",
        })
    }
}

impl Verdict {
    /// Verdict implied by the promise class, for promise functions.
    pub fn expected_for(class: PromiseClass) -> Verdict {
        match class {
            PromiseClass::Constant => Verdict::Constant,
            PromiseClass::Balanced => Verdict::Balanced,
            PromiseClass::Neither => Verdict::PromiseViolated,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DjOutcome {
    pub amplitude_at_zero: Complex64,
    pub verdict: Verdict,
}

impl DjOutcome {
    pub fn from_amplitude(amplitude_at_zero: Complex64) -> Self {
        debug_assert!(amplitude_at_zero.norm() <= 1.0 + STRUCTURE_TOL);
        let p = amplitude_at_zero.norm_sqr();
        let verdict = if p >= 1.0 - VERDICT_TOL {
            Verdict::Constant
        } else if p <= VERDICT_TOL {
            Verdict::Balanced
        } else {
            Verdict::PromiseViolated
        };
        DjOutcome {
            amplitude_at_zero,
            verdict,
        }
    }

    pub fn probability_at_zero(&self) -> f64 {
        self.amplitude_at_zero.norm_sqr()
    }
}

/// Runs `|0…0> -> H^n -> U_f -> H^n` and reads the amplitude of `|0…0>`.
pub fn run_dj(f: &BooleanFunction) -> DjOutcome {
    let n = f.n_bits;
    let oracle = build_phase_oracle(f);
    let spread = hadamard_all(&StateVector::basis(n, 0));
    let marked = oracle.apply(&spread).expect("oracle matches register size");
    let out = hadamard_all(&marked);
    DjOutcome::from_amplitude(out.amplitudes()[0])
}

/// Worst-case deterministic classical queries, `2^(n-1) + 1`.
pub fn classical_query_bound(n: u32) -> u64 {
    assert!((1..=64).contains(&n), "bound defined for 1 <= n <= 64");
    (1u64 << (n - 1)) + 1
}

/// `f(x) = a·x ⊕ b` over GF(2); `linear[j]` is the coefficient of qubit `j+1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffineForm {
    pub linear: Vec<bool>,
    pub offset: bool,
}

impl AffineForm {
    pub fn eval(&self, x: usize) -> bool {
        let n = self.linear.len();
        let dot = self
            .linear
            .iter()
            .enumerate()
            .filter(|&(j, &a)| a && (x >> (n - 1 - j)) & 1 == 1)
            .count();
        (dot % 2 == 1) ^ self.offset
    }
}

/// Recovers the affine form from `f(0)` and `f(e_j)`, then checks it on every
/// input.
pub fn is_affine(f: &BooleanFunction) -> Option<AffineForm> {
    let n = f.n_bits;
    let offset = f.eval(0);
    let linear = (0..n).map(|j| f.eval(1 << (n - 1 - j)) ^ offset).collect();
    let form = AffineForm { linear, offset };
    (0..f.table.len())
        .all(|x| form.eval(x) == f.eval(x))
        .then_some(form)
}
