//! Deutsch-Jozsa simulation with entanglement analysis of its phase oracles
//! and compilation of the non-entangling cases to polarization optics.
//!
//! * [`state`]: dense pure states, density matrices, partial trace, purity.
//! * [`dj`]: promise functions, phase oracles, Hadamard transforms, the
//!   ancilla-free DJ circuit.
//! * [`separability`]: operator Schmidt decomposition, oracle factorization,
//!   reduced-purity entanglement witness.
//! * [`optics`]: Jones-calculus waveplates, Q-H-Q synthesis, DJ circuit
//!   compilation and intensity-level simulation.

pub mod dj;
pub mod error;
pub mod limits;
pub mod optics;
pub mod separability;
pub mod state;

pub use dj::{
    build_phase_oracle, classical_query_bound, classify_function, enumerate_promise_functions,
    hadamard_1, hadamard_n, is_affine, run_dj, AffineForm, BooleanFunction, DjOutcome, PhaseOracle,
    PromiseClass, Verdict,
};
pub use error::{Error, Result};
pub use limits::Limits;
pub use optics::{
    compile_dj_circuit, encode, qhq_synthesize, simulate_circuit, waveplate_unitary, JonesMatrix,
    JonesVector, OpticalCircuit, OpticalOutcome, OpticalVerdict, QhqAngles, WaveplateElement,
};
pub use separability::{
    classify_all_oracles, factorize_oracle, operator_schmidt, state_is_entangled, Bipartition,
    FactorStatus, FactorizationResult, OracleClassification, OracleRecord,
};
pub use state::{
    apply, partial_trace, purity, tensor, tensor_all, to_density, DensityMatrix, StateVector,
    Tensor, UnitaryMatrix,
};
