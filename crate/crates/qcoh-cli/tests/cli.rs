//! End-to-end tests of the `qcoh` binary: output shapes, exit codes, and
//! file round-trips.

use std::process::{Command, Output};

fn qcoh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcoh"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn measure_bell_coherence_and_discord() {
    let out = qcoh(&[
        "measure", "--state", "bell", "--measure", "C,Q", "--starts", "8", "--seed", "1",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["state"], "bell");
    let c = v["measures"]["C"]["value"].as_f64().unwrap();
    let q = v["measures"]["Q"]["value"].as_f64().unwrap();
    assert!((c - 1.0).abs() < 1e-9);
    assert!((q - 1.0).abs() < 1e-6);
}

#[test]
fn measure_werner_closed_form() {
    let out = qcoh(&[
        "measure", "--state", "werner", "--p", "0.5", "--measure", "C",
    ]);
    let v = stdout_json(&out);
    let c = v["measures"]["C"]["value"].as_f64().unwrap();
    // S(dephased) - S(rho) for the half-mixed Bell mixture.
    assert!((c - 0.2624831837637347).abs() < 1e-9);
}

#[test]
fn measure_rejects_invalid_state_file_with_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    // Hermitian, trace 1, but not positive semidefinite.
    std::fs::write(
        &path,
        "{\"dims\":[2],\"matrix\":[[[1.5,0.0],[0.0,0.0]],[[0.0,0.0],[-0.5,0.0]]]}",
    )
    .unwrap();
    let out = qcoh(&[
        "measure", "--file", path.to_str().unwrap(), "--measure", "C",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("positive"), "stderr: {stderr}");
}

#[test]
fn measure_rejects_malformed_json_with_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("garbage.json");
    std::fs::write(&path, "not json at all").unwrap();
    let out = qcoh(&[
        "measure", "--file", path.to_str().unwrap(), "--measure", "C",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn measure_requires_exactly_one_input_source() {
    let out = qcoh(&["measure", "--measure", "C"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_small_ensemble_exits_zero_and_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let base = dir.path().join("run");
    let out = qcoh(&[
        "verify", "--theorem", "2", "--ensemble", "haar_pure", "--count", "6", "--seed", "7",
        "--starts", "6", "--out", base.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));

    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(base.with_extension("json")).unwrap())
            .unwrap();
    assert_eq!(summary["trials"], 6);
    assert_eq!(summary["passes"], 6);

    let jsonl = std::fs::read_to_string(base.with_extension("jsonl")).unwrap();
    assert_eq!(jsonl.lines().count(), 6);

    let csv = std::fs::read_to_string(base.with_extension("csv")).unwrap();
    assert!(csv.starts_with("theorem_id,trials,passes,min_slack"));
}

#[test]
fn verify_unknown_theorem_exits_2() {
    let out = qcoh(&["verify", "--theorem", "99", "--count", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown theorem"));
}

#[test]
fn verify_tripartite_distribution_with_channel() {
    let out = qcoh(&[
        "verify", "--theorem", "6", "--count", "4", "--seed", "3", "--starts", "4",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("4/4 passed"), "stdout: {stdout}");
}

#[test]
fn reference_single_row_filter() {
    let out = qcoh(&["reference", "--rows", "datta", "--starts", "8", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("datta.C"));
    assert!(stdout.contains("datta.theta"));
    assert!(!stdout.contains("bell.C"));
}

#[test]
fn sweep_endpoint_values() {
    let out = qcoh(&[
        "sweep", "--p-start", "0", "--p-stop", "1", "--steps", "3", "--starts", "6", "--seed", "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&out.stdout);
    let mut lines = stdout.lines();
    assert_eq!(lines.next().unwrap(), "p,C,theta_ab,theta,equality_gap");
    let first: Vec<f64> = lines.next().unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    let last: Vec<f64> = lines.last().unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    // p = 0 is maximally mixed (all measures 0); p = 1 is the Bell state.
    for v in &first[1..] {
        assert!(v.abs() < 1e-6);
    }
    assert!((last[1] - 1.0).abs() < 1e-6);
    assert!(last[4].abs() < 1e-3);
}

#[test]
fn sweep_rejects_bad_range() {
    let out = qcoh(&["sweep", "--p-start", "0.5", "--p-stop", "1.5"]);
    assert_eq!(out.status.code(), Some(2));
    let out = qcoh(&["sweep", "--steps", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn state_written_by_library_round_trips_through_cli() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("datta.json");
    let rho = qcoh::ensembles::named_state(&qcoh::ensembles::NamedState::Datta).unwrap();
    std::fs::write(&path, qcoh::io::state_to_json(&rho)).unwrap();

    let from_file = qcoh(&[
        "measure", "--file", path.to_str().unwrap(), "--measure", "C,mutual_info",
    ]);
    let from_name = qcoh(&["measure", "--state", "datta", "--measure", "C,mutual_info"]);
    let a = stdout_json(&from_file);
    let b = stdout_json(&from_name);
    for key in ["C", "mutual_info"] {
        let x = a["measures"][key]["value"].as_f64().unwrap();
        let y = b["measures"][key]["value"].as_f64().unwrap();
        assert!((x - y).abs() < 1e-12, "{key}: {x} vs {y}");
    }
}
