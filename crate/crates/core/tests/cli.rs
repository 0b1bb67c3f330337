// Copyright 2026 squid-cphase Contributors
// SPDX-License-Identifier: Apache-2.0

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_squid-cphase"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stderr))
    })
}

fn amplitude(state: &Value, label: &str) -> [f64; 2] {
    let entry = state["support"]
        .as_array()
        .unwrap()
        .iter()
        .find(|e| e["label"] == label)
        .unwrap_or_else(|| panic!("{label} not in {state}"));
    [entry["amplitude"][0].as_f64().unwrap(), entry["amplitude"][1].as_f64().unwrap()]
}

#[test]
fn simulate_single_inputs() {
    let out = run(&["simulate", "--n", "3", "--input", "111"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json_of(&out);
    assert_eq!(doc["final"]["support"].as_array().unwrap().len(), 1);
    let [re, im] = amplitude(&doc["final"], "111|0");
    assert!((re + 1.0).abs() < 1e-12 && im.abs() < 1e-12);

    let doc = json_of(&run(&["simulate", "--n", "3", "--input", "000"]));
    for step in doc["steps"].as_array().unwrap() {
        assert_eq!(amplitude(&step["state"], "000|0"), [1.0, 0.0]);
    }
}

#[test]
fn simulate_all_gives_the_two_qubit_gate() {
    let out = run(&["simulate", "--n", "2", "--input", "all"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json_of(&out);
    let gate = doc["gate"].as_array().unwrap();
    let expected = [1.0, 1.0, 1.0, -1.0];
    for (r, row) in gate.iter().enumerate() {
        for (c, z) in row.as_array().unwrap().iter().enumerate() {
            let want = if r == c { expected[r] } else { 0.0 };
            assert!((z[0].as_f64().unwrap() - want).abs() < 1e-10);
            assert!(z[1].as_f64().unwrap().abs() < 1e-10);
        }
    }
    assert_eq!(doc["truth_table"]["pass"], true);
}

#[test]
fn verify_default_broken_and_four_qubits() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["verify", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("trace.csv")).unwrap();
    assert!(csv.starts_with("input,step,expected,simulated,abs_delta\n"));
    assert_eq!(csv.lines().count(), 57);
    let report: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("verify_report.json")).unwrap()).unwrap();
    assert_eq!(report["trace"]["matched"], 54);
    assert_eq!(report["trace"]["unexplained"], 0);

    let out = run(&["verify", "--target-scale", "0.5"]);
    assert_eq!(out.status.code(), Some(1));
    let doc = json_of(&out);
    assert!(doc["fidelity"].as_f64().unwrap() < 1.0);

    let out = run(&["verify", "--n", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["truth_table"]["pass"], true);
}

#[test]
fn spectrum_reports() {
    let out = run(&["spectrum"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json_of(&out);
    let nu_02 = doc["nu_02"].as_f64().unwrap();
    assert!((nu_02 / 11.4e9 - 1.0).abs() < 0.05);

    let out = run(&["spectrum", "--beta-l", "0"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["harmonic_check"]["pass"], true);

    let coarse = json_of(&run(&["spectrum", "--grid", "2048"]));
    let fine = json_of(&run(&["spectrum", "--grid", "4096"]));
    let shift = (coarse["nu_02"].as_f64().unwrap() / fine["nu_02"].as_f64().unwrap() - 1.0).abs();
    assert!(shift < 1e-3, "{shift}");
    let stderr = String::from_utf8_lossy(&run(&["spectrum", "--grid", "4096"]).stderr).into_owned();
    assert!(stderr.contains("max relative shift"), "{stderr}");
}

#[test]
fn spectrum_writes_potential_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["spectrum", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("potential.csv")).unwrap();
    assert!(csv.lines().count() > 100);
    assert!(dir.path().join("spectrum.json").exists());
}

#[test]
fn feasibility_cases() {
    let out = run(&["feasibility"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json_of(&out);
    assert_eq!(doc["verdict"]["pass"], true);
    let kappa_inv = doc["kappa_inv"]["value"].as_f64().unwrap();
    assert!((kappa_inv / 41.7e-9 - 1.0).abs() < 0.02);

    assert_eq!(run(&["feasibility", "--q", "30"]).status.code(), Some(1));

    let doc = json_of(&run(&["feasibility", "--mutual-m", "0"]));
    assert_eq!(doc["zeta"]["value"], 0.0);
}

#[test]
fn budget_command() {
    let out = run(&["budget", "--g", "7.5e9rad/s"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json_of(&out);
    let total = doc["budget"]["tau_total"].as_f64().unwrap();
    assert!((total / 2.8e-9 - 1.0).abs() < 0.1, "{total}");
    assert_eq!(doc["step_counts"]["conventional_steps"], 28);
}

#[test]
fn outputs_are_deterministic() {
    for args in [
        &["simulate", "--input", "all"][..],
        &["verify"][..],
        &["feasibility"][..],
        &["simulate", "--input", "101"][..],
    ] {
        let a = run(args);
        let b = run(args);
        assert!(!a.stdout.is_empty());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn schedule_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let first = run(&["simulate", "--input", "110", "--out", d]);
    assert_eq!(first.status.code(), Some(0));
    let written = std::fs::read_to_string(dir.path().join("trajectory_110.json")).unwrap();
    let schedule = dir.path().join("schedule.json");

    let again = tempfile::tempdir().unwrap();
    let out = run(&[
        "simulate",
        "--input",
        "110",
        "--schedule",
        schedule.to_str().unwrap(),
        "--out",
        again.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let reread = std::fs::read_to_string(again.path().join("trajectory_110.json")).unwrap();
    assert_eq!(written, reread);
}

fn write_config(dir: &Path, edit: impl FnOnce(&mut Value)) -> String {
    let mut value: Value =
        serde_json::from_str(squid_cphase::config::RunConfig::table1_json()).unwrap();
    edit(&mut value);
    let path = dir.join("config.json");
    std::fs::write(&path, value.to_string()).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn configuration_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let unknown = write_config(dir.path(), |v| v["mystery"] = 1.into());
    let out = run(&["verify", "--config", &unknown]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("mystery"));

    let incomplete = write_config(dir.path(), |v| {
        v["device"]["resonator"].as_object_mut().unwrap().remove("quality_factor");
    });
    let out = run(&["feasibility", "--config", &incomplete]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("device.resonator.quality_factor"));

    assert_eq!(run(&["simulate", "--input", "12"]).status.code(), Some(2));
    assert_eq!(run(&["simulate", "--config", "/no/such/file.json"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn truncation_is_reported_with_the_step() {
    // Each SQUID in turn is driven to |2> and emits; after two emissions
    // SQUID 3 sits in |2> with n_max = 2 photons before its exchange.
    let g = 7.5e9_f64;
    let mw = |squid: usize| {
        serde_json::json!({"kind": "microwave_pi", "squid": squid, "duration_s": std::f64::consts::PI / (2.0 * g),
                           "phase_rad": -std::f64::consts::FRAC_PI_2, "label": format!("mw on {squid}")})
    };
    let jc = |squid: usize| {
        serde_json::json!({"kind": "jc_half", "squid": squid, "duration_s": std::f64::consts::FRAC_PI_2 / g,
                           "label": format!("exchange on {squid}")})
    };
    let schedule = serde_json::json!({
        "n": 3, "gate": "controlled_phase", "couplings": [g, g, g], "rabi_rad_s": 2.0 * g, "retune_time_s": 0.0,
        "steps": [mw(1), jc(1), mw(2), jc(2), mw(3), jc(3)],
    });
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.json");
    std::fs::write(&path, schedule.to_string()).unwrap();
    let out = run(&["simulate", "--input", "111", "--n-max", "2", "--schedule", path.to_str().unwrap()]);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert_eq!(out.status.code(), Some(1), "{stderr}");
    assert!(stderr.contains("step 6") && stderr.contains("truncation"), "{stderr}");
}
