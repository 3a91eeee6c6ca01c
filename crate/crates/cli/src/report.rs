//! JSON report shapes shared by every command.

use djsim::optics::format_degrees;
use djsim::separability::OracleRecord;
use djsim::{DjOutcome, OpticalCircuit, OpticalVerdict, UnitaryMatrix};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Map, Value};

#[derive(Debug, Serialize)]
pub struct ReportEnvelope {
    pub command: String,
    pub parameters: Map<String, Value>,
    pub records: Vec<Value>,
    pub summary: Map<String, Value>,
}

impl ReportEnvelope {
    pub fn new(command: &str) -> Self {
        ReportEnvelope {
            command: command.to_string(),
            parameters: Map::new(),
            records: Vec::new(),
            summary: Map::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.parameters.insert(key.to_string(), value.into());
        self
    }

    pub fn summary(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.summary.insert(key.to_string(), value.into());
        self
    }

    /// Sorts records by their `truth_table` field.
    pub fn sort_records(&mut self) {
        self.records.sort_by(|a, b| {
            let key = |v: &Value| {
                v.get("truth_table")
                    .and_then(Value::as_str)
                    .unwrap_or("")
                    .to_string()
            };
            key(a).cmp(&key(b))
        });
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Rounds to 12 significant digits; negative zero becomes zero.
pub fn num(v: f64) -> Value {
    if v == 0.0 {
        return json!(0.0);
    }
    if !v.is_finite() {
        return Value::Null;
    }
    let rounded: f64 = format!("{v:.11e}").parse().expect("float round-trips");
    json!(rounded)
}

pub fn complex(z: Complex64) -> Value {
    json!([num(z.re), num(z.im)])
}

fn matrix2(u: &UnitaryMatrix) -> Value {
    let e = u.entries();
    json!([
        [complex(e[(0, 0)]), complex(e[(0, 1)])],
        [complex(e[(1, 0)]), complex(e[(1, 1)])]
    ])
}

/// Six decimals, with anything that rounds to zero printed as `0.000000`.
pub fn text(v: f64) -> String {
    if v.abs() < 5e-7 {
        "0.000000".to_string()
    } else {
        format!("{v:.6}")
    }
}

pub fn outcome_record(table: &str, outcome: &DjOutcome) -> Value {
    json!({
        "truth_table": table,
        "amplitude": complex(outcome.amplitude_at_zero),
        "probability": num(outcome.probability_at_zero()),
        "verdict": outcome.verdict.to_string(),
    })
}

pub fn oracle_record(record: &OracleRecord) -> Value {
    let f = &record.factorization;
    let mut v = json!({
        "truth_table": record.function.to_string(),
        "class": record.class.to_string(),
        "status": f.status.to_string(),
        "schmidt_values": f.schmidt_values.iter().map(|&s| num(s)).collect::<Vec<_>>(),
    });
    if let (Some(factors), Some(phase)) = (&f.factors, f.global_phase) {
        v["factors"] = Value::Array(factors.iter().map(matrix2).collect());
        v["global_phase"] = complex(phase);
    }
    v
}

pub fn circuit_value(circuit: &OpticalCircuit) -> Value {
    let beams: Vec<Value> = circuit
        .beams()
        .iter()
        .map(|beam| {
            let elements: Vec<Value> = beam
                .stages
                .iter()
                .flat_map(|stage| {
                    stage.elements.iter().map(move |e| {
                        let deg: f64 = format_degrees(e.axis_angle()).parse().expect("numeric");
                        json!({ "stage": stage.role.name(), "kind": e.kind(), "axis_deg": num(deg) })
                    })
                })
                .collect();
            json!({ "elements": elements, "terminal": "POL@y" })
        })
        .collect();
    json!({ "beams": beams })
}

pub fn optical_fields(record: &mut Value, verdict: &OpticalVerdict) {
    record["intensities"] = Value::Array(verdict.intensities.iter().map(|&i| num(i)).collect());
    record["verdict"] = json!(verdict.verdict.to_string());
}
