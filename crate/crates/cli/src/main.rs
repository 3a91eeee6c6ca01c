//! `djsim`: run, enumerate, classify and compile Deutsch-Jozsa oracles.
//!
//! Exit codes: 0 success, 1 bad input, 2 promise violated (`run`),
//! 3 entangling oracle (`optics`).

mod report;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use djsim::optics::{
    format_degrees, phase_aligned_distance, qhq_synthesize_with_tolerance, random_special_unitary,
};
use djsim::{
    classify_function, run_dj, simulate_circuit, BooleanFunction, Error, JonesMatrix, Limits,
    Verdict,
};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use report::{
    circuit_value, complex, num, optical_fields, oracle_record, outcome_record, text,
    ReportEnvelope,
};

const QHQ_INPUT_TOL: f64 = 1e-8;

#[derive(Parser)]
#[command(
    name = "djsim",
    version,
    about = "Deutsch-Jozsa simulation and polarization-optics compilation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run H^n U_f H^n on |0…0> and report the amplitude of |0…0>.
    Run {
        /// Truth table, leftmost character is f(0…0).
        table: String,
        /// Emit a JSON report instead of text.
        #[arg(long)]
        json: bool,
    },
    /// List every constant and balanced function on n bits.
    Enumerate {
        /// Number of input bits.
        n: String,
        /// Also factorize each phase oracle.
        #[arg(long)]
        classify: bool,
        /// Emit a JSON report instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Compile the DJ circuit to per-beam waveplates.
    Optics {
        /// Truth table, leftmost character is f(0…0).
        table: String,
        /// Also simulate the circuit and report detector intensities.
        #[arg(long)]
        simulate: bool,
        /// Emit a JSON report instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Quarter-half-quarter waveplate angles for a 2x2 special unitary.
    Qhq {
        /// Entries u00 u01 u10 u11 as re im pairs (8 numbers).
        #[arg(allow_negative_numbers = true, num_args = 0..)]
        entries: Vec<f64>,
        /// Synthesize a random special unitary drawn from this seed instead.
        #[arg(long, conflicts_with = "entries")]
        seed: Option<u64>,
        /// Emit a JSON report instead of text.
        #[arg(long)]
        json: bool,
    },
}

enum Failure {
    Input(String),
    Code(u8, String),
}

type Outcome = std::result::Result<u8, Failure>;

fn parse_table(table: &str, limits: &Limits) -> std::result::Result<BooleanFunction, Failure> {
    let f: BooleanFunction = table
        .parse()
        .map_err(|e: Error| Failure::Input(e.to_string()))?;
    limits
        .check_qubits(f.n_bits())
        .map_err(|e| Failure::Input(e.to_string()))?;
    Ok(f)
}

fn cmd_run(table: &str, as_json: bool, limits: &Limits) -> Outcome {
    let f = parse_table(table, limits)?;
    let outcome = run_dj(&f);
    if as_json {
        let mut env = ReportEnvelope::new("run")
            .param("table", table)
            .summary("verdict", outcome.verdict.to_string());
        env.records.push(outcome_record(table, &outcome));
        println!("{}", env.to_json());
    } else {
        let a = outcome.amplitude_at_zero;
        println!("table: {f}");
        println!("qubits: {}", f.n_bits());
        println!("amplitude: ({}, {})", text(a.re), text(a.im));
        println!("probability: {}", text(outcome.probability_at_zero()));
        println!("verdict: {}", outcome.verdict);
    }
    Ok(if outcome.verdict == Verdict::PromiseViolated {
        2
    } else {
        0
    })
}

fn cmd_enumerate(n: &str, classify: bool, as_json: bool, limits: &Limits) -> Outcome {
    let n: usize = n
        .trim()
        .parse()
        .map_err(|_| Failure::Input(format!("n must be a positive integer, got {n:?}")))?;
    if n == 0 {
        return Err(Failure::Input("n must be at least 1".into()));
    }

    let mut env = ReportEnvelope::new("enumerate")
        .param("n", n)
        .param("classify", classify);
    let mut lines = Vec::new();
    if classify {
        let report = limits
            .classify_all_oracles(n)
            .map_err(|e| Failure::Input(e.to_string()))?;
        for r in &report.records {
            env.records.push(oracle_record(r));
            lines.push(format!(
                "{} {} {}",
                r.function, r.class, r.factorization.status
            ));
        }
        env = env
            .summary("total", report.total())
            .summary("product", report.product)
            .summary("entangling", report.entangling)
            .summary("checks_agree", report.all_checks_agree());
    } else {
        let functions = limits
            .enumerate_promise_functions(n)
            .map_err(|e| Failure::Input(e.to_string()))?;
        for f in &functions {
            env.records.push(
                json!({ "truth_table": f.to_string(), "class": classify_function(f).to_string() }),
            );
            lines.push(format!("{f} {}", classify_function(f)));
        }
        env = env.summary("total", functions.len());
    }
    env.sort_records();
    lines.sort();

    if as_json {
        println!("{}", env.to_json());
    } else {
        for line in lines {
            println!("{line}");
        }
        for (k, v) in &env.summary {
            println!("{k}: {v}");
        }
    }
    Ok(0)
}

fn cmd_optics(table: &str, simulate: bool, as_json: bool, limits: &Limits) -> Outcome {
    let f = parse_table(table, limits)?;
    let circuit = match limits.compile_dj_circuit(&f) {
        Ok(c) => c,
        Err(Error::NotFactorizable) => {
            return Err(Failure::Code(
                3,
                format!(
                    "oracle for {f} is entangling: its phase oracle is not a product of \
                     single-qubit factors, so it has no per-beam waveplate realization"
                ),
            ))
        }
        Err(e) => return Err(Failure::Input(e.to_string())),
    };
    let verdict = simulate.then(|| simulate_circuit(&circuit));

    if as_json {
        let mut record =
            json!({ "truth_table": f.to_string(), "circuit": circuit_value(&circuit) });
        let mut env = ReportEnvelope::new("optics")
            .param("table", table)
            .param("simulate", simulate)
            .summary("beams", circuit.n_beams());
        if let Some(v) = &verdict {
            optical_fields(&mut record, v);
            env = env.summary("verdict", v.verdict.to_string());
        }
        env.records.push(record);
        println!("{}", env.to_json());
    } else {
        print!("{circuit}");
        if let Some(v) = &verdict {
            for (k, i) in v.intensities.iter().enumerate() {
                println!("beam {} intensity: {}", k + 1, text(*i));
            }
            println!("verdict: {}", v.verdict);
        }
    }
    Ok(0)
}

fn cmd_qhq(entries: &[f64], seed: Option<u64>, as_json: bool) -> Outcome {
    let u: JonesMatrix = match seed {
        Some(seed) => random_special_unitary(&mut ChaCha8Rng::seed_from_u64(seed)),
        None => {
            if entries.len() != 8 {
                return Err(Failure::Input(format!(
                    "expected 8 numbers (re im of u00 u01 u10 u11), got {}",
                    entries.len()
                )));
            }
            let z = |k: usize| Complex64::new(entries[2 * k], entries[2 * k + 1]);
            JonesMatrix::new(z(0), z(1), z(2), z(3))
        }
    };
    let angles = qhq_synthesize_with_tolerance(&u, QHQ_INPUT_TOL)
        .map_err(|e| Failure::Input(e.to_string()))?;
    let error = phase_aligned_distance(&angles.unitary(), &u);

    if as_json {
        let mut env = ReportEnvelope::new("qhq").summary("reconstruction_error", num(error));
        if let Some(seed) = seed {
            env = env.param("seed", seed);
        }
        env.parameters.insert(
            "matrix".into(),
            json!([
                [complex(u[(0, 0)]), complex(u[(0, 1)])],
                [complex(u[(1, 0)]), complex(u[(1, 1)])]
            ]),
        );
        let deg = |r: f64| num(format_degrees(r).parse().expect("numeric"));
        env.records.push(json!({
            "qwp_1_deg": deg(angles.first),
            "hwp_deg": deg(angles.half),
            "qwp_2_deg": deg(angles.last),
        }));
        println!("{}", env.to_json());
    } else {
        println!("product: QWP(phi1) * HWP(phi2) * QWP(phi3)");
        println!("phi1: {}", format_degrees(angles.first));
        println!("phi2: {}", format_degrees(angles.half));
        println!("phi3: {}", format_degrees(angles.last));
        println!("reconstruction_error: {error:.6e}");
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let limits = Limits::from_env();
    let result = match &cli.command {
        Command::Run { table, json } => cmd_run(table, *json, &limits),
        Command::Enumerate { n, classify, json } => cmd_enumerate(n, *classify, *json, &limits),
        Command::Optics {
            table,
            simulate,
            json,
        } => cmd_optics(table, *simulate, *json, &limits),
        Command::Qhq {
            entries,
            seed,
            json,
        } => cmd_qhq(entries, *seed, *json),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Code(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
