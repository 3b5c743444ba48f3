//! Process-level behavior of the CLI binary: exit codes, output plumbing,
//! and byte determinism across separate invocations.

use std::process::{Command, Output};

use holonomic::loewner::VerificationReport;
use holonomic::winding::RegionMap;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_holonomic")).args(args).output().expect("binary runs")
}

#[test]
fn clean_sweep_exits_zero_with_parseable_json() {
    let out = run(&[
        "verify", "--trials", "4", "--n-max", "2", "--f-degree", "3", "--grid", "6", "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: VerificationReport = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report.trials, 4);
    assert_eq!(report.elapsed_ms, 0, "timing must be normalized out of the JSON");
    assert!(report.violations.is_empty());
    // Real timing goes to stderr instead.
    assert!(String::from_utf8_lossy(&out.stderr).contains("completed in"));
}

#[test]
fn stdout_is_byte_deterministic_across_runs() {
    let args =
        ["claim1", "--trials", "3", "--f-degree", "4", "--grid", "6", "--format", "json"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(run(&["no-such-command"]).status.code(), Some(64));
    assert_eq!(run(&["verify", "--grid", "1"]).status.code(), Some(64));
    assert_eq!(run(&["divide", "--a", "0,1", "--b", "7"]).status.code(), Some(64));
    assert_eq!(run(&["deform", "--n-max", "1"]).status.code(), Some(64));
}

#[test]
fn help_exits_zero() {
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("Usage"));
}

#[test]
fn degenerate_instances_exit_two() {
    // An amplitude this small cannot produce an immersed curve, so every
    // trial exhausts its retries.
    let out = run(&["verify", "--trials", "2", "--f-degree", "3", "--grid", "6", "--amplitude", "1e-300"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stdout).contains("verdict: UNRESOLVED"));
}

#[test]
fn output_flag_writes_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = run(&[
        "verify", "--trials", "2", "--n-max", "2", "--f-degree", "3", "--grid", "5", "--format",
        "json", "-o",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let report: VerificationReport = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report.trials, 2);
}

#[test]
fn unwritable_output_exits_74() {
    let out = run(&[
        "verify", "--trials", "1", "--f-degree", "3", "--grid", "5", "-o",
        "/no-such-directory/report.json",
    ]);
    assert_eq!(out.status.code(), Some(74));
}

#[test]
fn divide_reports_the_chain_as_json() {
    let out = run(&["divide", "--a", "-1,0,1", "--b", "-0.5,0.5", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["stages"].as_array().unwrap().len(), 2);
    assert_eq!(v["stages"][0]["scale"], 0.75);
}

#[test]
fn plot_emits_svg_and_grid_json() {
    let svg = run(&["plot", "--grid", "12", "--f-degree", "3"]);
    assert_eq!(svg.status.code(), Some(0));
    let text = String::from_utf8(svg.stdout).unwrap();
    assert!(text.starts_with("<svg "));
    assert!(text.trim_end().ends_with("</svg>"));

    let json = run(&["plot", "--grid", "12", "--f-degree", "3", "--format", "json"]);
    let map: RegionMap = serde_json::from_slice(&json.stdout).unwrap();
    assert_eq!(map.values.len(), 144);
    assert!(map.values.iter().all(|v| *v == map.sentinel || *v >= 0));
}
