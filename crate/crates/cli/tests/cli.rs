//! End-to-end tests of the `blockade` binary: exit codes, file outputs, and
//! output determinism, all through real subprocesses.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn blockade(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_blockade"))
        .args(args)
        .output()
        .expect("binary should spawn")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

#[test]
fn help_succeeds_and_lists_subcommands() {
    let output = blockade(&["--help"]);
    assert_eq!(output.status.code(), Some(0));
    let text = stdout(&output);
    for subcommand in ["sweep", "single", "verify"] {
        assert!(text.contains(subcommand), "help is missing `{subcommand}`");
    }
}

#[test]
fn sweep_requires_exactly_one_source() {
    let neither = blockade(&["sweep"]);
    assert_eq!(neither.status.code(), Some(1));
    let both = blockade(&["sweep", "--preset", "fig3b", "--config", "x.toml"]);
    assert_eq!(both.status.code(), Some(1));
}

#[test]
fn unknown_preset_is_a_config_error() {
    let output = blockade(&["sweep", "--preset", "fig99"]);
    assert_eq!(output.status.code(), Some(1));
    assert!(stderr(&output).contains("fig99"));
}

#[test]
fn unreadable_config_is_a_config_error() {
    let output = blockade(&["sweep", "--config", "/nonexistent/sweep.toml"]);
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn malformed_config_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    fs::write(&path, "axis1 = \"not a table\"").unwrap();
    let output = blockade(&["sweep", "--config", path.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn preset_sweep_writes_csv_json_svg_per_curve() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let output = blockade(&["sweep", "--preset", "fig3b", "--dims", "3,2,2", "--out", out]);
    assert_eq!(output.status.code(), Some(0), "stderr: {}", stderr(&output));

    let csv_path = dir.path().join("fig3b_main.csv");
    let csv = fs::read_to_string(&csv_path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "axis1,axis2,mean_n_a,g2,g3,regime,converged,residual"
    );
    assert_eq!(lines.count(), 61, "one row per grid point");

    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("fig3b_main.json")).unwrap())
            .unwrap();
    assert_eq!(json["points"].as_array().unwrap().len(), 61);
    assert_eq!(json["config"]["truncation"], serde_json::json!([3, 2, 2]));

    let svg = fs::read_to_string(dir.path().join("fig3b_main.svg")).unwrap();
    assert!(svg.starts_with("<svg"));
}

#[test]
fn multi_curve_preset_uses_curve_id_suffixes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let output = blockade(&["sweep", "--preset", "fig8b", "--dims", "2,2,2", "--out", out]);
    assert_eq!(output.status.code(), Some(0), "stderr: {}", stderr(&output));
    for id in ["nth_0", "nth_0.01", "nth_0.05"] {
        let path = dir.path().join(format!("fig8b_{id}.csv"));
        assert!(path.exists(), "missing {}", path.display());
    }
}

fn write_config(dir: &Path, name: &str, workers: usize, csv: &Path) -> String {
    let text = format!(
        "truncation = [3, 2, 2]\n\
         parallel_workers = {workers}\n\n\
         [base]\n\
         delta_b = 2.0\n\
         delta_c = -2.0\n\
         g = 2.0\n\
         f_a = 0.05\n\n\
         [axis1]\n\
         param = \"delta_a\"\n\
         start = -2.0\n\
         stop = 2.0\n\
         count = 5\n\n\
         [outputs]\n\
         csv = \"{}\"\n",
        csv.display()
    );
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn csv_output_is_identical_across_worker_counts() {
    let dir = tempfile::tempdir().unwrap();
    let csv_serial = dir.path().join("serial.csv");
    let csv_threaded = dir.path().join("threaded.csv");
    let serial_cfg = write_config(dir.path(), "serial.toml", 1, &csv_serial);
    let threaded_cfg = write_config(dir.path(), "threaded.toml", 3, &csv_threaded);

    let serial = blockade(&["sweep", "--config", &serial_cfg]);
    assert_eq!(serial.status.code(), Some(0), "stderr: {}", stderr(&serial));
    let threaded = blockade(&["sweep", "--config", &threaded_cfg]);
    assert_eq!(threaded.status.code(), Some(0), "stderr: {}", stderr(&threaded));

    let serial_bytes = fs::read(&csv_serial).unwrap();
    let threaded_bytes = fs::read(&csv_threaded).unwrap();
    assert!(!serial_bytes.is_empty());
    assert_eq!(serial_bytes, threaded_bytes);
}

#[test]
fn config_sweep_without_outputs_prints_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("stdout.toml");
    fs::write(
        &path,
        "truncation = [3, 2, 2]\n\n[base]\nf_a = 0.05\n\n[axis1]\nparam = \"delta_a\"\nstart = -1.0\nstop = 1.0\ncount = 3\n",
    )
    .unwrap();
    let output = blockade(&["sweep", "--config", path.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(0));
    let text = stdout(&output);
    assert!(text.starts_with("axis1,axis2,"));
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn all_points_failing_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("starved.toml");
    // Zero iterations starve the iterative solver, so every point fails.
    fs::write(
        &path,
        "truncation = [3, 2, 2]\n\n[base]\nf_a = 0.05\n\n[axis1]\nparam = \"delta_a\"\nstart = -1.0\nstop = 1.0\ncount = 3\n\n[solver]\nmethod = \"iterative\"\nmax_iterations = 0\n",
    )
    .unwrap();
    let output = blockade(&["sweep", "--config", path.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(2), "stderr: {}", stderr(&output));
}

#[test]
fn single_solves_the_linear_cavity() {
    let output = blockade(&["single", "--f_a", "0.2", "--dims", "12,1,1"]);
    assert_eq!(output.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    let mean = json["observables"]["mean_n_a"].as_f64().unwrap();
    let g2 = json["observables"]["g2"].as_f64().unwrap();
    assert!((mean - 0.16).abs() < 1e-9, "mean_n_a = {mean}");
    assert!((g2 - 1.0).abs() < 1e-6, "g2 = {g2}");
}

#[test]
fn single_on_vacuum_reports_undefined_correlations() {
    let output = blockade(&["single", "--dims", "3,2,2"]);
    assert_eq!(output.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert!(json["observables"]["g2"].is_null());
    assert!(json["observables"]["g3"].is_null());
    assert_eq!(json["observables"]["mean_n_a"].as_f64().unwrap(), 0.0);
}

#[test]
fn single_accepts_complex_pair_drive() {
    let output = blockade(&["single", "--e", "0.01,-0.02", "--dims", "2,2,2"]);
    assert_eq!(output.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(json["params"]["e"], serde_json::json!([0.01, -0.02]));
}

#[test]
fn single_rejects_invalid_model_parameters() {
    let output = blockade(&["single", "--kappa_a", "-1.0", "--dims", "2,2,2"]);
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn verify_green_subset_exits_zero() {
    let output = blockade(&["verify", "--suite", "acceptance", "--criteria", "11,13"]);
    assert_eq!(output.status.code(), Some(0), "stderr: {}", stderr(&output));
    let text = stdout(&output);
    assert!(text.contains("criterion 11"));
    assert!(text.contains("2 of 2 criteria passed"));
}

#[test]
fn verify_red_criterion_exits_three() {
    // Criterion 4 is a documented red: the measured sweep contradicts the
    // idealized washout claim, and verify must report that honestly.
    let output = blockade(&["verify", "--suite", "acceptance", "--criteria", "4"]);
    assert_eq!(output.status.code(), Some(3), "stderr: {}", stderr(&output));
    let text = stdout(&output);
    assert!(text.contains("FAIL"));
    assert!(text.contains("0 of 1 criteria passed"));
}

#[test]
fn verify_rejects_unknown_suite_and_bad_numbers() {
    let suite = blockade(&["verify", "--suite", "everything"]);
    assert_eq!(suite.status.code(), Some(1));
    let numbers = blockade(&["verify", "--suite", "acceptance", "--criteria", "99"]);
    assert_eq!(numbers.status.code(), Some(1));
}
