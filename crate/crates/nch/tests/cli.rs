//! End-to-end checks of the command-line interface contract: exit codes,
//! the machine-readable error line on stderr, and artifact writing.

use std::path::Path;
use std::process::{Command, Output};

fn nch(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nch"))
        .args(args)
        .output()
        .expect("spawn nch")
}

fn write_cfg(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

fn tiny_config(csv: &str) -> String {
    format!(
        r#"{{
            "mesh_n": 4,
            "tau": 1e-3,
            "t_final": 3e-3,
            "potential": {{"a": 0.01, "b": 1.0, "d": 1.0, "theta_c": 3.0, "gamma": 1e-3}},
            "onsager": {{"mobility": 1e-2, "conductivity": 5e-2, "cross_coupling": 1e-4}},
            "initial_data": {{"type": "constant", "phi": 0.55, "theta": 2.0}},
            "output": {{"csv": {csv:?}}}
        }}"#
    )
}

#[test]
fn run_writes_csv_and_exits_zero() {
    let dir = tempdir();
    let csv = dir.join("diag.csv");
    let cfg = write_cfg(&dir, "run.json", &tiny_config(&csv.to_string_lossy()));
    let out = nch(&["run", &cfg]);
    assert!(out.status.success(), "stderr: {}", text(&out.stderr));
    assert!(text(&out.stdout).contains("steps completed:     3"));
    let csv_text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = csv_text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "step,time,mass,energy,entropy,production,energy_increment,theta_min,\
         theta_max,newton_iterations,final_residual"
    );
    assert_eq!(lines.count(), 4, "3 steps + initial record");
}

#[test]
fn check_passes_on_a_valid_run() {
    let dir = tempdir();
    let cfg = write_cfg(
        &dir,
        "check.json",
        &tiny_config(&dir.join("d.csv").to_string_lossy()),
    );
    let out = nch(&["check", &cfg]);
    assert!(out.status.success(), "stderr: {}", text(&out.stderr));
    let stdout = text(&out.stdout);
    assert!(stdout.contains("PASS mass conservation"), "{stdout}");
    assert!(!stdout.contains("FAIL"), "{stdout}");
}

#[test]
fn unknown_config_key_yields_json_error_and_nonzero_exit() {
    let dir = tempdir();
    let cfg = write_cfg(&dir, "bad.json", r#"{"mesh_n": 4, "bogus": true}"#);
    for sub in ["run", "check", "converge-space", "converge-time"] {
        let out = nch(&[sub, &cfg]);
        assert!(!out.status.success(), "{sub} accepted a bad config");
        let err: serde_json::Value =
            serde_json::from_str(text(&out.stderr).trim()).expect("stderr is one JSON object");
        assert_eq!(err["error"]["kind"], "config", "{sub}: {err}");
        assert!(err["error"]["message"].is_string());
    }
}

#[test]
fn missing_config_file_reports_io_error() {
    let out = nch(&["run", "/nonexistent/nope.json"]);
    assert!(!out.status.success());
    let err: serde_json::Value = serde_json::from_str(text(&out.stderr).trim()).unwrap();
    assert_eq!(err["error"]["kind"], "io");
}

#[test]
fn converge_time_prints_a_table() {
    let dir = tempdir();
    let body = r#"{
        "mesh_n": 4,
        "tau": 3.125e-3,
        "t_final": 6.25e-3,
        "potential": {"a": 0.01, "b": 1.0, "d": 1.0, "theta_c": 3.0, "gamma": 1e-3},
        "onsager": {"mobility": 1e-2, "conductivity": 5e-2, "cross_coupling": 1e-4},
        "initial_data": {"type": "convergence", "theta_center": [0.5, 0.5]},
        "time_levels": {"k_min": 5, "k_max": 6}
    }"#;
    let cfg = write_cfg(&dir, "ct.json", body);
    let out = nch(&["converge-time", &cfg]);
    assert!(out.status.success(), "stderr: {}", text(&out.stderr));
    let stdout = text(&out.stdout);
    assert!(stdout.contains("level"), "{stdout}");
    assert!(stdout.contains("err(grad phi)"), "{stdout}");
}

fn text(bytes: &[u8]) -> String {
    String::from_utf8_lossy(bytes).into_owned()
}

fn tempdir() -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!(
        "nch-cli-test-{}-{}",
        std::process::id(),
        std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .unwrap()
            .as_nanos()
    ));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
