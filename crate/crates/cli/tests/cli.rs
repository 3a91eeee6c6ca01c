use std::process::{Command, Output};

use serde_json::Value;

fn djsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_djsim"))
        .args(args)
        .env_remove("DJSIM_QUBIT_CAP")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_of(args: &[&str]) -> Value {
    let out = djsim(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_str(&stdout(&out)).expect("valid JSON")
}

#[test]
fn run_exit_codes() {
    let out = djsim(&["run", "00"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("verdict: Constant"));

    let out = djsim(&["run", "01001110"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("verdict: Balanced"));

    let out = djsim(&["run", "0001"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("probability: 0.250000"));
    assert!(stdout(&out).contains("verdict: PromiseViolated"));

    for bad in ["011", "0a", "", "0"] {
        let out = djsim(&["run", bad]);
        assert_eq!(out.status.code(), Some(1), "table {bad:?}");
        assert!(!out.stderr.is_empty());
    }
    assert_eq!(djsim(&["run"]).status.code(), Some(1));
}

#[test]
fn run_json_amplitude() {
    let v = json_of(&["run", "0110", "--json"]);
    assert_eq!(v["command"], "run");
    assert_eq!(v["summary"]["verdict"], "Balanced");
    assert_eq!(v["records"][0]["probability"], 0.0);
}

#[test]
fn enumerate_counts() {
    let v = json_of(&["enumerate", "2", "--classify", "--json"]);
    assert_eq!(v["summary"]["total"], 8);
    assert_eq!(v["summary"]["product"], 8);
    assert_eq!(v["summary"]["entangling"], 0);

    let v = json_of(&["enumerate", "3", "--classify", "--json"]);
    assert_eq!(v["summary"]["total"], 72);
    assert_eq!(v["summary"]["product"], 16);
    assert_eq!(v["summary"]["entangling"], 56);
    assert_eq!(v["summary"]["checks_agree"], true);

    let v = json_of(&["enumerate", "1", "--json"]);
    assert_eq!(v["records"].as_array().unwrap().len(), 4);

    let out = djsim(&["enumerate", "1"]);
    assert_eq!(
        stdout(&out)
            .lines()
            .filter(|l| l.ends_with("constant") || l.ends_with("balanced"))
            .count(),
        4
    );

    for bad in ["0", "5", "x", "-1"] {
        assert_eq!(
            djsim(&["enumerate", bad]).status.code(),
            Some(1),
            "n = {bad}"
        );
    }
}

#[test]
fn oracle_records_follow_schema_and_sort_order() {
    let v = json_of(&["enumerate", "3", "--classify", "--json"]);
    let records = v["records"].as_array().unwrap();
    let tables: Vec<&str> = records
        .iter()
        .map(|r| r["truth_table"].as_str().unwrap())
        .collect();
    let mut sorted = tables.clone();
    sorted.sort();
    assert_eq!(tables, sorted);

    let parity = records
        .iter()
        .find(|r| r["truth_table"] == "01101001")
        .unwrap();
    assert_eq!(parity["status"], "product");
    assert_eq!(parity["class"], "balanced");
    let factors = parity["factors"].as_array().unwrap();
    assert_eq!(factors.len(), 3);
    for f in factors {
        assert_eq!(
            f,
            &serde_json::json!([[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [-1.0, 0.0]]])
        );
    }
    assert_eq!(parity["schmidt_values"].as_array().unwrap().len(), 4);

    let entangling = records
        .iter()
        .find(|r| r["truth_table"] == "01001110")
        .unwrap();
    assert_eq!(entangling["status"], "entangling");
    assert!(entangling.get("factors").is_none());

    // Round trip through the parser is lossless.
    let again: Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
    assert_eq!(again, v);
}

#[test]
fn optics_listing_and_simulation() {
    let out = djsim(&["optics", "0101"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out),
        "beam 1: HWP@22.500000\nbeam 1: --\nbeam 1: HWP@22.500000\nbeam 1: POL@y -> detector\n\
         beam 2: HWP@22.500000\nbeam 2: HWP@0.000000\nbeam 2: HWP@22.500000\nbeam 2: POL@y -> detector\n"
    );

    let out = djsim(&["optics", "01001110"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("entangling"));
    assert!(out.stdout.is_empty());

    let out = djsim(&["optics", "00", "--simulate"]);
    assert_eq!(out.status.code(), Some(0));
    let s = stdout(&out);
    assert!(s.contains("beam 1 intensity: 1.000000"));
    assert!(s.contains("verdict: Constant"));

    assert_eq!(djsim(&["optics", "012"]).status.code(), Some(1));
}

#[test]
fn optics_json_shape() {
    let v = json_of(&["optics", "0110", "--simulate", "--json"]);
    let record = &v["records"][0];
    let beams = record["circuit"]["beams"].as_array().unwrap();
    assert_eq!(beams.len(), 2);
    for beam in beams {
        let kinds: Vec<(&str, f64)> = beam["elements"]
            .as_array()
            .unwrap()
            .iter()
            .map(|e| (e["kind"].as_str().unwrap(), e["axis_deg"].as_f64().unwrap()))
            .collect();
        assert_eq!(kinds, [("HWP", 22.5), ("HWP", 0.0), ("HWP", 22.5)]);
    }
    assert_eq!(record["verdict"], "Balanced");
    for i in record["intensities"].as_array().unwrap() {
        assert!(i.as_f64().unwrap().abs() < 1e-9);
    }
}

#[test]
fn qhq_reports_small_error() {
    let parse_error = |s: &str| -> f64 {
        s.lines()
            .find_map(|l| l.strip_prefix("reconstruction_error: "))
            .unwrap()
            .parse()
            .unwrap()
    };
    let out = djsim(&["qhq", "1", "0", "0", "0", "0", "0", "1", "0"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(parse_error(&stdout(&out)) < 1e-10);

    // -i·H has unit determinant.
    let h = std::f64::consts::FRAC_1_SQRT_2.to_string();
    let mh = format!("-{h}");
    let args = ["qhq", "0", &mh, "0", &mh, "0", &mh, "0", &h];
    let out = djsim(&args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(parse_error(&stdout(&out)) < 1e-10);

    let out = djsim(&["qhq", "--seed", "42"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(parse_error(&stdout(&out)) < 1e-10);

    assert_eq!(
        djsim(&["qhq", "1", "0", "1", "0", "0", "0", "1", "0"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        djsim(&["qhq", "1", "0", "0", "0", "0", "0", "-1", "0"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(djsim(&["qhq", "1", "0"]).status.code(), Some(1));
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["enumerate", "3", "--classify", "--json"],
        vec!["optics", "01101001", "--simulate", "--json"],
        vec!["qhq", "--seed", "42", "--json"],
        vec!["run", "10100101"],
    ] {
        let a = djsim(&args);
        let b = djsim(&args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.status.code(), b.status.code());
    }
}

#[test]
fn qubit_cap_from_environment() {
    let run = |cap: &str, args: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_djsim"))
            .args(args)
            .env("DJSIM_QUBIT_CAP", cap)
            .output()
            .unwrap()
    };
    assert_eq!(run("2", &["run", "01001110"]).status.code(), Some(1));
    assert_eq!(run("2", &["enumerate", "3"]).status.code(), Some(1));
    assert_eq!(run("3", &["run", "01001110"]).status.code(), Some(0));
    let big = "0".repeat(1 << 11);
    assert_eq!(djsim(&["run", &big]).status.code(), Some(1));
    assert_eq!(run("11", &["run", &big]).status.code(), Some(0));
}
