use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stabperf"))
        .args(args)
        .env_remove("STABPERF_THREADS")
        .output()
        .unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().unwrap()
}

#[test]
fn lists_codes() {
    let text = stdout(&["codes"]);
    assert!(text.contains("surface-3x3 [[13,1,3]]"));
    assert!(text.contains("surface-3x5 [[23,1,3/5]]"));
    assert_eq!(text.lines().count(), 8);
}

#[test]
fn steane_enumerators() {
    let text = stdout(&["we", "steane"]);
    assert!(text.contains("L(z) = 21z^3 + 126z^5 + 45z^7"), "{text}");
    assert!(text.contains("distance: 3"));
    let csv = stdout(&["we", "steane", "--format", "csv"]);
    assert!(csv.lines().any(|l| l == "5,0,126,126"), "{csv}");
}

#[test]
fn enumeration_cap_exits_three() {
    let out = run(&["we", "surface-5x5"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("2^40"));
}

#[test]
fn steane_beta_rows() {
    let csv = stdout(&["beta", "steane", "--decoder", "ml", "--jmax", "2", "--bias", "1"]);
    let row = csv
        .lines()
        .find(|l| l.starts_with("beta,steane,1,2,"))
        .unwrap_or_else(|| panic!("{csv}"));
    let f: Vec<&str> = row.split(',').collect();
    assert_eq!(f[10], "7/9");
    assert_eq!(f[11], "2/9");
    assert_eq!(f[13], "exhaustive");
}

#[test]
fn empty_sweep_is_fine() {
    let csv = stdout(&["beta", "steane", "--decoder", "ml", "--jmax", "0"]);
    assert_eq!(csv.lines().count(), 1);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&["beta", "steane", "--decoder", "foo"]), 2);
    assert_eq!(code(&["we", "no-such-code"]), 2);
    assert_eq!(code(&["curve", "--n", "7", "--rho-grid", "0.5:0.1:3"]), 2);
    assert_eq!(code(&["frobnicate"]), 2);
}

#[test]
fn bd_profile_rows() {
    let csv = stdout(&["beta", "surface-3x5", "--decoder", "bd:1,1", "--jmax", "2", "--bias", "1"]);
    let row = csv.lines().find(|l| l.starts_with("beta,surface-3x5,1,2,")).unwrap();
    assert!(row.ends_with(",analytic-bd"), "{row}");
}

#[test]
fn sweep_budget_exits_three() {
    assert_eq!(code(&["beta", "surface-5x5", "--decoder", "mwpm", "--jmax", "8"]), 3);
}

#[test]
fn wrong_profile_length_exits_four() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("p.json");
    let p = p.to_str().unwrap();
    stdout(&["beta", "steane", "--decoder", "ml", "--jmax", "2", "--bias", "1", "--profile-out", p]);
    assert_eq!(code(&["curve", "shor", "--mode", "complete", "--beta-file", p]), 4);
    let csv = stdout(&["curve", "steane", "--mode", "complete,upper", "--beta-file", p, "--rho-grid", "1e-3,1e-2"]);
    assert_eq!(csv.lines().count(), 5);
}

#[test]
fn threshold_text() {
    let text = stdout(&["threshold", "steane", "--decoder", "ml", "--gamma", "1"]);
    assert!(text.contains("approx threshold: 0.0061"), "{text}");
}

#[test]
fn simulation_is_reproducible() {
    let args = ["simulate", "surface-3x3", "--decoder", "mwpm", "--rho", "0.05", "--trials", "20000", "--seed", "3"];
    let one = stdout(&["--threads", "1"].iter().chain(&args).copied().collect::<Vec<_>>());
    let two = stdout(&["--threads", "2"].iter().chain(&args).copied().collect::<Vec<_>>());
    assert_eq!(one, two);
    assert!(one.contains("\"trials\": 20000"));
}

fn replay_matches(args: &[&str]) {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first.out");
    let second = dir.path().join("second.out");
    let mut full = vec!["--out", first.to_str().unwrap()];
    full.extend_from_slice(args);
    stdout(&full);
    let manifest = dir.path().join("first.out.manifest.json");
    assert!(manifest.exists());
    stdout(&["--out", second.to_str().unwrap(), "replay", manifest.to_str().unwrap()]);
    assert_eq!(std::fs::read(&first).unwrap(), std::fs::read(&second).unwrap(), "{args:?}");
}

#[test]
fn replay_is_byte_identical() {
    replay_matches(&["simulate", "steane", "--decoder", "ml", "--rho", "0.05,0.1", "--trials", "5000", "--seed", "11", "--format", "csv"]);
    replay_matches(&["beta", "surface-3x3", "--decoder", "mwpm", "--jmax", "2"]);
    replay_matches(&["curve", "surface-3x5", "--mode", "bd,bd-asym", "--channel", "biased:10"]);
    replay_matches(&["we", "five-qubit", "--format", "json"]);
}

#[test]
fn replay_rejects_changed_code() {
    let dir = tempfile::tempdir().unwrap();
    let stab = dir.path().join("rep.stab");
    std::fs::write(&stab, "3 1 rep\nG ZZI\nG IZZ\nLX XXX\nLZ ZII\n").unwrap();
    let out = dir.path().join("we.csv");
    stdout(&["--out", out.to_str().unwrap(), "we", stab.to_str().unwrap(), "--format", "csv"]);
    std::fs::write(&stab, "3 1 rep\nG ZZI\nG ZIZ\nLX XXX\nLZ ZII\n").unwrap();
    let manifest = Path::new(out.to_str().unwrap()).with_extension("csv.manifest.json");
    assert_eq!(code(&["replay", manifest.to_str().unwrap()]), 4);
}
