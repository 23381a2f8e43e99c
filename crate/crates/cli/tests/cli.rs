//! Command-level tests: exit codes, file outputs, determinism of reruns.

use std::path::Path;
use std::process::Command;

use tempfile::tempdir;

fn epitv() -> Command {
    Command::new(env!("CARGO_BIN_EXE_epitv"))
}

fn read(path: &Path) -> Vec<u8> {
    std::fs::read(path).unwrap_or_else(|e| panic!("reading {}: {e}", path.display()))
}

#[test]
fn unknown_scenario_exits_with_usage_code() {
    let dir = tempdir().unwrap();
    let output = epitv()
        .args(["simulate", "--scenario", "zombie-outbreak", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("unknown scenario"), "stderr: {stderr}");
}

#[test]
fn missing_required_flag_exits_with_usage_code() {
    let output = epitv().args(["simulate"]).output().unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn simulate_writes_four_files_and_reruns_identically() {
    let dir_a = tempdir().unwrap();
    let dir_b = tempdir().unwrap();
    for dir in [&dir_a, &dir_b] {
        let output = epitv()
            .args(["simulate", "--scenario", "constant-sirq", "--seed", "7", "--out"])
            .arg(dir.path())
            .output()
            .unwrap();
        assert!(output.status.success());
        let stdout = String::from_utf8_lossy(&output.stdout);
        assert!(stdout.contains("R0 uncontrolled=10.000"), "stdout: {stdout}");
        assert!(stdout.contains("controlled=3.000"), "stdout: {stdout}");
    }
    let names = ["dataset.csv", "truth_params.csv", "trajectory.csv", "provenance.json"];
    for name in names {
        assert_eq!(
            read(&dir_a.path().join(name)),
            read(&dir_b.path().join(name)),
            "{name} differs between identical runs"
        );
    }
}

fn write_fit_fixture(dir: &Path, dataset: &str, lambda: f64) -> std::path::PathBuf {
    std::fs::write(dir.join("dataset.csv"), dataset).unwrap();
    let config = format!(
        r#"{{
  "model": "sirq",
  "grid": {{ "t0": 0.0, "horizon": 100.0, "n_steps": 100, "substeps_per_step": 10 }},
  "initial_state": {{ "s": 990.0, "i": 10.0, "r": 0.0, "q": 0.0 }},
  "dataset": "dataset.csv",
  "parameters": [
    {{ "name": "beta", "time_varying": true,
       "regularizer": {{ "kind": "tv", "weight": {lambda} }} }},
    {{ "name": "gamma" }},
    {{ "name": "delta" }}
  ],
  "seed": 5,
  "starts": 2,
  "optimizer": {{ "max_restarts": 4, "max_evals": 1500,
                  "restart_improvement_tol": 1e-6,
                  "x_tol": 1e-8, "f_tol": 1e-10, "initial_step": 0.4 }}
}}"#
    );
    let path = dir.join("fit.json");
    std::fs::write(&path, config).unwrap();
    path
}

#[test]
fn fit_writes_outputs_and_warm_restart_never_worsens() {
    let dir = tempdir().unwrap();
    // synthesize a dataset via the CLI itself
    let synth = dir.path().join("synth");
    assert!(epitv()
        .args(["simulate", "--scenario", "constant-sirq", "--seed", "16", "--out"])
        .arg(&synth)
        .status()
        .unwrap()
        .success());
    let dataset = std::fs::read_to_string(synth.join("dataset.csv")).unwrap();
    let config = write_fit_fixture(dir.path(), &dataset, 2.0);

    let out1 = dir.path().join("fit1");
    assert!(epitv()
        .args(["fit", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&out1)
        .status()
        .unwrap()
        .success());
    for name in ["fitted_params.csv", "fitted_trajectory.csv", "trace.csv", "report.json"] {
        assert!(out1.join(name).exists(), "{name} missing");
    }
    let report1: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out1.join("report.json")).unwrap()).unwrap();
    let loss1 = report1["loss"].as_f64().unwrap();

    // identical rerun is byte-identical
    let out1b = dir.path().join("fit1b");
    assert!(epitv()
        .args(["fit", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&out1b)
        .status()
        .unwrap()
        .success());
    for name in ["fitted_params.csv", "fitted_trajectory.csv", "trace.csv", "report.json"] {
        assert_eq!(read(&out1.join(name)), read(&out1b.join(name)), "{name} differs");
    }

    // a warm restart from the previous answer can only match or improve
    let warm_config = {
        let mut doc: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(&config).unwrap()).unwrap();
        doc["warm_start"] = serde_json::Value::String(
            out1.join("fitted_params.csv").to_string_lossy().into_owned(),
        );
        let path = dir.path().join("fit_warm.json");
        std::fs::write(&path, serde_json::to_string_pretty(&doc).unwrap()).unwrap();
        path
    };
    let out2 = dir.path().join("fit2");
    assert!(epitv()
        .args(["fit", "--config"])
        .arg(&warm_config)
        .arg("--out")
        .arg(&out2)
        .status()
        .unwrap()
        .success());
    let report2: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out2.join("report.json")).unwrap()).unwrap();
    let loss2 = report2["loss"].as_f64().unwrap();
    assert!(loss2 <= loss1, "warm refit worsened: {loss2} > {loss1}");
}

#[test]
fn fit_with_empty_dataset_reports_under_determination() {
    let dir = tempdir().unwrap();
    let config = write_fit_fixture(dir.path(), "kind,t,m,k\n", 3.0);
    let out = dir.path().join("fit");
    let output = epitv()
        .args(["fit", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert!(output.status.success());
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    let warnings = report["warnings"].as_array().unwrap();
    assert!(
        warnings.iter().any(|w| w.as_str().unwrap().contains("under-determined")),
        "warnings: {warnings:?}"
    );
    // constant paths attain the penalty-only minimum of zero
    assert_eq!(report["loss"].as_f64().unwrap(), 0.0);
}

#[test]
fn malformed_fit_config_exits_with_usage_code() {
    let dir = tempdir().unwrap();
    let config = dir.path().join("bad.json");
    std::fs::write(&config, "{ not json").unwrap();
    let output = epitv()
        .args(["fit", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(dir.path().join("out"))
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn lambda_sweep_rejects_bad_grids() {
    let dir = tempdir().unwrap();
    for grid in ["8,2", "0,1,2", "-1,2"] {
        let output = epitv()
            .args(["lambda-sweep", "--scenario", "tv-sir", "--lambda", grid, "--out"])
            .arg(dir.path())
            .output()
            .unwrap();
        assert_eq!(output.status.code(), Some(2), "grid {grid} should be rejected");
    }
}

#[test]
fn lambda_sweep_rejects_scenarios_without_time_varying_rates() {
    let dir = tempdir().unwrap();
    let output = epitv()
        .args(["lambda-sweep", "--scenario", "constant-sirq", "--lambda", "1,2", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn reproduce_constant_sirq_passes_and_reruns_identically() {
    let dir_a = tempdir().unwrap();
    let dir_b = tempdir().unwrap();
    for dir in [&dir_a, &dir_b] {
        let output = epitv()
            .args(["reproduce", "constant-sirq", "--out"])
            .arg(dir.path())
            .output()
            .unwrap();
        assert!(output.status.success());
        let stdout = String::from_utf8_lossy(&output.stdout);
        assert!(stdout.contains("verdict: PASS"), "stdout: {stdout}");
    }
    let verdict: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir_a.path().join("verdict.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(verdict["pass"], serde_json::Value::Bool(true));
    for name in [
        "verdict.json",
        "report.json",
        "fitted_params.csv",
        "trace.csv",
        "fit_config.json",
        "synthetic/dataset.csv",
    ] {
        assert_eq!(
            read(&dir_a.path().join(name)),
            read(&dir_b.path().join(name)),
            "{name} differs between identical runs"
        );
    }
}
