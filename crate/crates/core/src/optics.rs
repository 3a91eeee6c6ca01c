//! Jones-calculus model of polarization "classical qubits".
//!
//! Jones vectors are `(E_x, E_y)`. Logical `0` is y-polarized light and
//! logical `1` is x-polarized light. All matrices in this module act on the
//! `(E_x, E_y)` components.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_8, PI};
use std::fmt;

use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::dj::{build_phase_oracle, BooleanFunction, VERDICT_TOL};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::separability::{factorize_oracle, FactorStatus};
use crate::state::{c, STRUCTURE_TOL, UNITARY_TOL};

pub type JonesMatrix = Matrix2<Complex64>;

/// Axis angle of the half-wave plate that acts as a Hadamard (22.5°).
pub const HADAMARD_AXIS: f64 = FRAC_PI_8;

/// An ideal optical element. Waveplate axes are slow-axis angles measured
/// from the x axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WaveplateElement {
    QuarterWave { axis: f64 },
    HalfWave { axis: f64 },
    Retarder { retardance: f64, axis: f64 },
    Rotator { angle: f64 },
}

impl WaveplateElement {
    pub fn retardance(&self) -> Option<f64> {
        match *self {
            WaveplateElement::QuarterWave { .. } => Some(FRAC_PI_2),
            WaveplateElement::HalfWave { .. } => Some(PI),
            WaveplateElement::Retarder { retardance, .. } => Some(retardance),
            WaveplateElement::Rotator { .. } => None,
        }
    }

    /// Slow-axis angle for waveplates, rotation angle for rotators.
    pub fn axis_angle(&self) -> f64 {
        match *self {
            WaveplateElement::QuarterWave { axis }
            | WaveplateElement::HalfWave { axis }
            | WaveplateElement::Retarder { axis, .. } => axis,
            WaveplateElement::Rotator { angle } => angle,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            WaveplateElement::QuarterWave { .. } => "QWP",
            WaveplateElement::HalfWave { .. } => "HWP",
            WaveplateElement::Retarder { .. } => "RET",
            WaveplateElement::Rotator { .. } => "ROT",
        }
    }

    pub fn unitary(&self) -> JonesMatrix {
        waveplate_unitary(self)
    }
}

impl fmt::Display for WaveplateElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let deg = format_degrees(self.axis_angle());
        match self {
            WaveplateElement::Retarder { retardance, .. } => {
                write!(f, "RET({})@{deg}", format_degrees(*retardance))
            }
            other => write!(f, "{}@{deg}", other.kind()),
        }
    }
}

/// Degrees with six decimals, never printing a negative zero.
pub fn format_degrees(radians: f64) -> String {
    let deg = radians.to_degrees();
    let deg = if deg.abs() < 5e-7 { 0.0 } else { deg };
    format!("{deg:.6}")
}

fn rotation(angle: f64) -> JonesMatrix {
    let (s, co) = angle.sin_cos();
    Matrix2::new(c(co, 0.0), c(-s, 0.0), c(s, 0.0), c(co, 0.0))
}

/// `R(φ) · diag(e^{iη/2}, e^{-iη/2}) · R(-φ)` for waveplates, `R(θ)` for
/// rotators. Both have unit determinant.
pub fn waveplate_unitary(element: &WaveplateElement) -> JonesMatrix {
    match element.retardance() {
        Some(eta) => {
            let phi = element.axis_angle();
            let retard = Matrix2::new(
                Complex64::from_polar(1.0, eta / 2.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                Complex64::from_polar(1.0, -eta / 2.0),
            );
            rotation(phi) * retard * rotation(-phi)
        }
        None => rotation(element.axis_angle()),
    }
}

/// Unit-intensity Jones vector `(E_x, E_y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JonesVector {
    components: Vector2<Complex64>,
}

impl JonesVector {
    pub fn new(ex: Complex64, ey: Complex64) -> Result<Self> {
        let intensity = ex.norm_sqr() + ey.norm_sqr();
        if (intensity - 1.0).abs() > STRUCTURE_TOL {
            return Err(Error::NotNormalized(intensity));
        }
        Ok(JonesVector {
            components: Vector2::new(ex, ey),
        })
    }

    pub fn ex(&self) -> Complex64 {
        self.components[0]
    }

    pub fn ey(&self) -> Complex64 {
        self.components[1]
    }

    pub fn intensity(&self) -> f64 {
        self.components.norm_squared()
    }

    /// Intensity transmitted by a y-oriented polarizer.
    pub fn y_intensity(&self) -> f64 {
        self.ey().norm_sqr()
    }

    pub fn transform(&self, m: &JonesMatrix) -> JonesVector {
        JonesVector {
            components: m * self.components,
        }
    }
}

/// Logical bit to polarization: `0 -> y`, `1 -> x`.
pub fn encode(bit: bool) -> JonesVector {
    let (ex, ey) = if bit { (1.0, 0.0) } else { (0.0, 1.0) };
    JonesVector {
        components: Vector2::new(c(ex, 0.0), c(ey, 0.0)),
    }
}

/// Slow-axis angles of a quarter-half-quarter sandwich, all in `[0, π)`.
/// The realized matrix is `Q(first) · H(half) · Q(last)`, so `last` is the
/// plate the beam meets first.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QhqAngles {
    pub first: f64,
    pub half: f64,
    pub last: f64,
}

impl QhqAngles {
    pub fn elements(&self) -> [WaveplateElement; 3] {
        [
            WaveplateElement::QuarterWave { axis: self.first },
            WaveplateElement::HalfWave { axis: self.half },
            WaveplateElement::QuarterWave { axis: self.last },
        ]
    }

    pub fn unitary(&self) -> JonesMatrix {
        self.elements()
            .iter()
            .map(waveplate_unitary)
            .fold(JonesMatrix::identity(), |acc, m| acc * m)
    }
}

fn reduce_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(PI);
    // rem_euclid can round up to exactly π.
    if r >= PI {
        0.0
    } else {
        r
    }
}

fn frobenius2(m: &JonesMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Frobenius distance between `a` and `e^{iθ} b` with the best `θ`.
pub fn phase_aligned_distance(a: &JonesMatrix, b: &JonesMatrix) -> f64 {
    let overlap = (b.adjoint() * a).trace();
    let phase = if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        c(1.0, 0.0)
    };
    frobenius2(&(a - b * phase))
}

/// Checks unitarity and unit determinant within `tol`.
pub fn check_special_unitary(u: &JonesMatrix, tol: f64) -> Result<()> {
    let defect = frobenius2(&(u.adjoint() * u - JonesMatrix::identity()));
    if !defect.is_finite() || defect > tol {
        return Err(Error::NotUnitary(defect));
    }
    let det_err = (u.determinant() - c(1.0, 0.0)).norm();
    if det_err > tol {
        return Err(Error::NotSpecialUnitary(det_err));
    }
    Ok(())
}

/// Angles of a Q-H-Q sandwich realizing `u` up to global phase.
pub fn qhq_synthesize(u: &JonesMatrix) -> Result<QhqAngles> {
    qhq_synthesize_with_tolerance(u, UNITARY_TOL)
}

pub fn qhq_synthesize_with_tolerance(u: &JonesMatrix, tol: f64) -> Result<QhqAngles> {
    check_special_unitary(u, tol)?;
    // u = w·I + i(x·σx + y·σy + z·σz) in the (x, y) basis.
    let w = (u[(0, 0)] + u[(1, 1)]).re / 2.0;
    let z = (u[(0, 0)] - u[(1, 1)]).im / 2.0;
    let x = (u[(0, 1)] + u[(1, 0)]).im / 2.0;
    let y = (u[(0, 1)] - u[(1, 0)]).re / 2.0;

    // With a, b, c twice the plate angles, p = a - b and q = b - c:
    //   w = -cos(s)cos(d), y = sin(s)cos(d),
    //   z = sin(d)sin(b + d), x = -sin(d)cos(b + d),
    // where s = (p + q)/2 and d = (p - q)/2.
    let cos_d = w.hypot(y);
    let sin_d = x.hypot(z);
    let d = sin_d.atan2(cos_d);
    let s = if cos_d > 0.0 { y.atan2(-w) } else { 0.0 };
    let b_plus_d = if sin_d > 0.0 { z.atan2(-x) } else { 0.0 };

    let b = b_plus_d - d;
    let (p, q) = (s + d, s - d);
    let a = p + b;
    let cc = b - q;
    Ok(QhqAngles {
        first: reduce_angle(a / 2.0),
        half: reduce_angle(b / 2.0),
        last: reduce_angle(cc / 2.0),
    })
}

/// Haar-distributed element of SU(2), from a normalized Gaussian 4-vector.
pub fn random_special_unitary<R: Rng + ?Sized>(rng: &mut R) -> JonesMatrix {
    loop {
        let v: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm < 1e-9 {
            continue;
        }
        let [w, x, y, z] = v.map(|a| a / norm);
        return Matrix2::new(c(w, z), c(y, x), c(-y, x), c(w, -z));
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StageRole {
    FirstHadamard,
    Oracle,
    SecondHadamard,
}

impl StageRole {
    pub fn name(&self) -> &'static str {
        match self {
            StageRole::FirstHadamard => "hadamard_in",
            StageRole::Oracle => "oracle",
            StageRole::SecondHadamard => "hadamard_out",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Stage {
    pub role: StageRole,
    /// Applied in order of appearance.
    pub elements: Vec<WaveplateElement>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Beam {
    pub input: JonesVector,
    pub stages: Vec<Stage>,
}

/// Independent beams, each ending in a y-polarizer and an intensity detector.
#[derive(Debug, Clone, PartialEq)]
pub struct OpticalCircuit {
    beams: Vec<Beam>,
}

impl OpticalCircuit {
    pub fn new(beams: Vec<Beam>) -> Result<Self> {
        let first = beams
            .first()
            .ok_or(Error::MalformedCircuit("a circuit needs at least one beam"))?;
        let roles: Vec<StageRole> = first.stages.iter().map(|s| s.role).collect();
        if beams
            .iter()
            .any(|b| b.stages.iter().map(|s| s.role).ne(roles.iter().copied()))
        {
            return Err(Error::MalformedCircuit(
                "beams carry different stage layouts",
            ));
        }
        Ok(OpticalCircuit { beams })
    }

    pub fn beams(&self) -> &[Beam] {
        &self.beams
    }

    pub fn n_beams(&self) -> usize {
        self.beams.len()
    }
}

impl fmt::Display for OpticalCircuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, beam) in self.beams.iter().enumerate() {
            let k = k + 1;
            for stage in &beam.stages {
                if stage.elements.is_empty() {
                    writeln!(f, "beam {k}: --")?;
                } else {
                    let parts: Vec<String> = stage.elements.iter().map(|e| e.to_string()).collect();
                    writeln!(f, "beam {k}: {}", parts.join(" "))?;
                }
            }
            writeln!(f, "beam {k}: POL@y -> detector")?;
        }
        Ok(())
    }
}

/// Compiles the DJ circuit for `f` into one beam per input bit.
pub fn compile_dj_circuit(f: &BooleanFunction) -> Result<OpticalCircuit> {
    Limits::default().compile_dj_circuit(f)
}

impl Limits {
    pub fn compile_dj_circuit(&self, f: &BooleanFunction) -> Result<OpticalCircuit> {
        self.check_qubits(f.n_bits())?;
        let factorization = factorize_oracle(&build_phase_oracle(f));
        let form = match (factorization.status, factorization.affine) {
            (FactorStatus::Product, Some(form)) => form,
            _ => return Err(Error::NotFactorizable),
        };
        let hadamard = || {
            vec![WaveplateElement::HalfWave {
                axis: HADAMARD_AXIS,
            }]
        };
        let beams = form
            .linear
            .iter()
            .map(|&flip| Beam {
                input: encode(false),
                stages: vec![
                    Stage {
                        role: StageRole::FirstHadamard,
                        elements: hadamard(),
                    },
                    Stage {
                        role: StageRole::Oracle,
                        // diag(1,-1) on (|0>,|1>) is diag(-1,1) on (E_x,E_y),
                        // which is HWP@0 up to phase.
                        elements: if flip {
                            vec![WaveplateElement::HalfWave { axis: 0.0 }]
                        } else {
                            Vec::new()
                        },
                    },
                    Stage {
                        role: StageRole::SecondHadamard,
                        elements: hadamard(),
                    },
                ],
            })
            .collect();
        OpticalCircuit::new(beams)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OpticalOutcome {
    Constant,
    Balanced,
    /// Some intensity is neither dark nor full; only possible for circuits
    /// not produced by [`compile_dj_circuit`].
    Inconclusive,
}

impl fmt::Display for OpticalOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OpticalOutcome::Constant => "Constant",
            OpticalOutcome::Balanced => "Balanced",
            OpticalOutcome::Inconclusive => "Inconclusive",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OpticalVerdict {
    /// Detected intensity behind each beam's y-polarizer.
    pub intensities: Vec<f64>,
    pub verdict: OpticalOutcome,
    /// Largest deviation of total beam intensity from 1 seen after any stage.
    pub max_intensity_drift: f64,
}

pub fn simulate_circuit(circuit: &OpticalCircuit) -> OpticalVerdict {
    let mut drift: f64 = 0.0;
    let intensities: Vec<f64> = circuit
        .beams
        .iter()
        .map(|beam| {
            let mut v = beam.input;
            for stage in &beam.stages {
                for element in &stage.elements {
                    v = v.transform(&waveplate_unitary(element));
                }
                drift = drift.max((v.intensity() - 1.0).abs());
            }
            v.y_intensity()
        })
        .collect();

    let verdict = if intensities.iter().all(|&i| i >= 1.0 - VERDICT_TOL) {
        OpticalOutcome::Constant
    } else if intensities.iter().any(|&i| i <= VERDICT_TOL) {
        OpticalOutcome::Balanced
    } else {
        OpticalOutcome::Inconclusive
    };
    OpticalVerdict {
        intensities,
        verdict,
        max_intensity_drift: drift,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

    fn close(a: &JonesMatrix, b: &JonesMatrix, tol: f64) -> bool {
        frobenius2(&(a - b)) < tol
    }

    #[test]
    fn half_wave_at_zero() {
        let m = waveplate_unitary(&WaveplateElement::HalfWave { axis: 0.0 });
        let expected = Matrix2::new(c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, -1.0));
        assert!(close(&m, &expected, 1e-15));
    }

    #[test]
    fn quarter_wave_at_zero() {
        let m = waveplate_unitary(&WaveplateElement::QuarterWave { axis: 0.0 });
        let expected = Matrix2::new(
            Complex64::from_polar(1.0, FRAC_PI_4),
            c(0.0, 0.0),
            c(0.0, 0.0),
            Complex64::from_polar(1.0, -FRAC_PI_4),
        );
        assert!(close(&m, &expected, 1e-15));
    }

    #[test]
    fn half_wave_at_22_5_is_hadamard_times_i() {
        let m = waveplate_unitary(&WaveplateElement::HalfWave { axis: FRAC_PI_8 });
        let s = FRAC_1_SQRT_2;
        let expected = Matrix2::new(c(0.0, s), c(0.0, s), c(0.0, s), c(0.0, -s));
        assert!(close(&m, &expected, 1e-15));
    }

    #[test]
    fn rotator_is_rotation() {
        let m = waveplate_unitary(&WaveplateElement::Rotator { angle: FRAC_PI_4 });
        let v = encode(true).transform(&m);
        assert!((v.ex().re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((v.ey().re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((m.determinant() - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn encoding() {
        assert_eq!(encode(false).ex(), c(0.0, 0.0));
        assert_eq!(encode(false).ey(), c(1.0, 0.0));
        assert_eq!(encode(true).ex(), c(1.0, 0.0));
        assert_eq!(encode(false).y_intensity(), 1.0);
        assert_eq!(encode(true).y_intensity(), 0.0);
        assert!(JonesVector::new(c(1.0, 0.0), c(1.0, 0.0)).is_err());
    }

    #[test]
    fn qhq_known_targets() {
        let h = waveplate_unitary(&WaveplateElement::HalfWave { axis: FRAC_PI_8 });
        let angles = qhq_synthesize(&h).unwrap();
        assert!(phase_aligned_distance(&angles.unitary(), &h) < 1e-10);

        let id = JonesMatrix::identity();
        let angles = qhq_synthesize(&id).unwrap();
        assert!(phase_aligned_distance(&angles.unitary(), &id) < 1e-10);
        for a in [angles.first, angles.half, angles.last] {
            assert!((0.0..PI).contains(&a));
        }
    }

    #[test]
    fn qhq_rejects_non_special() {
        let z = Matrix2::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0));
        assert!(matches!(
            qhq_synthesize(&z),
            Err(Error::NotSpecialUnitary(_))
        ));
        let m = Matrix2::new(c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0));
        assert!(matches!(qhq_synthesize(&m), Err(Error::NotUnitary(_))));
    }

    #[test]
    fn compile_constant_one_bit() {
        let f: BooleanFunction = "00".parse().unwrap();
        let circuit = compile_dj_circuit(&f).unwrap();
        assert_eq!(circuit.n_beams(), 1);
        let stages = &circuit.beams()[0].stages;
        assert_eq!(
            stages[0].elements,
            vec![WaveplateElement::HalfWave { axis: FRAC_PI_8 }]
        );
        assert!(stages[1].elements.is_empty());
        assert_eq!(
            stages[2].elements,
            vec![WaveplateElement::HalfWave { axis: FRAC_PI_8 }]
        );
        assert_eq!(
            circuit.to_string(),
            "beam 1: HWP@22.500000\nbeam 1: --\nbeam 1: HWP@22.500000\nbeam 1: POL@y -> detector\n"
        );
        let v = simulate_circuit(&circuit);
        assert!((v.intensities[0] - 1.0).abs() < 1e-12);
        assert_eq!(v.verdict, OpticalOutcome::Constant);
    }

    #[test]
    fn compile_parity_two_bit() {
        let f: BooleanFunction = "0110".parse().unwrap();
        let circuit = compile_dj_circuit(&f).unwrap();
        for beam in circuit.beams() {
            assert_eq!(
                beam.stages[1].elements,
                vec![WaveplateElement::HalfWave { axis: 0.0 }]
            );
        }
    }

    #[test]
    fn simulate_balanced_two_bit() {
        let f: BooleanFunction = "0101".parse().unwrap();
        let circuit = compile_dj_circuit(&f).unwrap();
        assert!(circuit.beams()[0].stages[1].elements.is_empty());
        let v = simulate_circuit(&circuit);
        assert!((v.intensities[0] - 1.0).abs() < 1e-12);
        assert!(v.intensities[1] < 1e-12);
        assert_eq!(v.verdict, OpticalOutcome::Balanced);
        assert!(v.max_intensity_drift < 1e-12);
    }

    #[test]
    fn entangling_oracle_does_not_compile() {
        let f: BooleanFunction = "01001110".parse().unwrap();
        assert_eq!(compile_dj_circuit(&f), Err(Error::NotFactorizable));
    }

    #[test]
    fn ragged_circuit_rejected() {
        let beam = |stages| Beam {
            input: encode(false),
            stages,
        };
        let stage = Stage {
            role: StageRole::Oracle,
            elements: Vec::new(),
        };
        assert!(OpticalCircuit::new(vec![]).is_err());
        assert!(OpticalCircuit::new(vec![beam(vec![stage.clone()]), beam(vec![])]).is_err());
    }

    #[test]
    fn partial_intensity_is_inconclusive() {
        let circuit = OpticalCircuit::new(vec![Beam {
            input: encode(false),
            stages: vec![Stage {
                role: StageRole::Oracle,
                elements: vec![WaveplateElement::Rotator { angle: FRAC_PI_4 }],
            }],
        }])
        .unwrap();
        let v = simulate_circuit(&circuit);
        assert!((v.intensities[0] - 0.5).abs() < 1e-12);
        assert_eq!(v.verdict, OpticalOutcome::Inconclusive);
    }

    #[test]
    fn degree_formatting() {
        assert_eq!(format_degrees(0.0), "0.000000");
        assert_eq!(format_degrees(-1e-12), "0.000000");
        assert_eq!(format_degrees(FRAC_PI_8), "22.500000");
    }
}
