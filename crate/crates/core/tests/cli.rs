//! End-to-end checks of the command-line front end.

use std::io::Write as _;
use std::process::{Command, Output, Stdio};

const BIN: &str = env!("CARGO_BIN_EXE_frame-forge");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("spawn")
}

fn run_with_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(BIN)
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn");
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().expect("wait")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

#[test]
fn verify_wavelet_psi0_passes() {
    let out = run(&["verify-wavelet", "psi0"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["ff-schema"], 1);
    assert_eq!(v["calderon"]["max_dev"], 0.0);
    assert_eq!(v["parseval"], true);
}

#[test]
fn verify_wavelet_psi1_norm_check() {
    let out = run(&["verify-wavelet", "psi1", "--norm-check"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["norm_sq"], 0.5);
    assert_eq!(v["parseval"], true);
}

#[test]
fn maximalize_pipes_into_verify_scaling() {
    let bundle = run(&["maximalize", "--scaling", "phi_quarter"]);
    assert_eq!(bundle.status.code(), Some(0));
    let out = run_with_stdin(
        &["verify-scaling", "-"],
        std::str::from_utf8(&bundle.stdout).unwrap(),
    );
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["verdicts"]["is_scaling_function"], true);
    assert_eq!(v["verdicts"]["is_maximal"]["pass"], true);
}

#[test]
fn synthesize_then_verify_reports_telescoping() {
    let bundle = run(&["synthesize", "--scaling", "shannon"]);
    assert_eq!(bundle.status.code(), Some(0));
    let out = run_with_stdin(
        &["verify-wavelet", "-"],
        std::str::from_utf8(&bundle.stdout).unwrap(),
    );
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["telescoping_max_dev"], 0.0);
}

#[test]
fn unknown_input_exits_2() {
    let out = run(&["catalog", "nope"]);
    assert_eq!(out.status.code(), Some(2));
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("shannon"), "{msg}");
}

#[test]
fn non_annular_input_exits_2() {
    let out = run(&["verify-wavelet", "shannon"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn export_plot_csv_header() {
    let out = run(&["export-plot", "psi1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("xi_num,xi_exp,re,im,abs"));
    assert_eq!(lines.next(), Some("-1,1,1,0,1"));
}

#[test]
fn reports_are_byte_identical() {
    let a = run(&["verify-wavelet", "psi1", "--tq-range", "5"]);
    let b = run(&["verify-wavelet", "psi1", "--tq-range", "5"]);
    assert_eq!(a.stdout, b.stdout);

    let g1 = run(&["synthesize", "--scaling", "phi_quarter"]);
    let g2 = run(&["synthesize", "--scaling", "phi_quarter"]);
    assert_eq!(g1.stdout, g2.stdout);
}

#[test]
fn check_projection_reports_conditions() {
    let set = r#"{"intervals":[{"a":{"num":0,"exp":0},"b":{"num":1,"exp":2}},{"a":{"num":3,"exp":2},"b":{"num":1,"exp":0}}]}"#;
    let dir = std::env::temp_dir().join("ff-cli-test-set.json");
    std::fs::write(&dir, set).unwrap();
    let out = run(&[
        "check-projection",
        "--scaling",
        "shannon",
        "--set",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["verdicts"]["all_pass"], true);
    assert_eq!(v["undecided"], 0);
}

#[test]
fn gauge_preserves_parseval_verdict() {
    let bundle = run(&["synthesize", "--scaling", "shannon"]);
    let gauged = run_with_stdin(
        &["gauge", "--wavelet", "-", "--seed", "42"],
        std::str::from_utf8(&bundle.stdout).unwrap(),
    );
    assert_eq!(gauged.status.code(), Some(0));
    let out = run_with_stdin(
        &["verify-wavelet", "-"],
        std::str::from_utf8(&gauged.stdout).unwrap(),
    );
    assert_eq!(out.status.code(), Some(0));
}
