//! Golden-file and exit-code tests for the `circorth` binary.
//! Set `UPDATE_GOLDEN=1` to rewrite the expected outputs.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_circorth"))
        .args(args)
        .env_remove("CIRCORTH_MAX_WORKERS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn golden(name: &str, args: &[&str], code: i32) {
    let out = run(args);
    assert_eq!(out.status.code(), Some(code), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    let path = golden_dir().join(name);
    let got = stdout(&out);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &got).unwrap();
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing {}", path.display()));
    assert_eq!(got, want, "{name}");
}

fn sample() -> String {
    golden_dir().join("sample.txt").to_string_lossy().into_owned()
}

#[test]
fn audit_kmax_7() {
    golden("audit_kmax7.txt", &["audit", "--kmax", "7"], 0);
}

#[test]
fn audit_cases_records() {
    golden("audit_cases.jsonl", &["--records", "audit", "--kmax", "13", "--cases"], 0);
}

#[test]
fn construct_12() {
    golden("construct12.txt", &["construct", "12"], 0);
}

#[test]
fn verify_sample() {
    golden("verify_sample.txt", &["verify", &sample()], 1);
}

#[test]
fn verify_sample_records() {
    let out = run(&["--records", "verify", &sample()]);
    assert_eq!(out.status.code(), Some(1));
    for line in stdout(&out).lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(v["kind"].is_string());
    }
}

#[test]
fn barker_codes() {
    golden("barker.txt", &["barker"], 0);
}

#[test]
fn conjecture_20() {
    golden("conjecture20.txt", &["conjecture", "--nmax", "20"], 0);
}

#[test]
fn search_counts() {
    let out = run(&["search", "4", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("4 solutions"));

    let out = run(&["search", "16", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("0 solutions"));

    let out = run(&["search", "6", "2", "--symmetric-only"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("2 solutions"));

    let out = run(&["search", "12", "5", "--workers", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("4 solutions"));
}

#[test]
fn inadmissible_pair_needs_force() {
    let out = run(&["search", "16", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["search", "16", "2", "--force"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("0 solutions"));
}

#[test]
fn budget_exceeded_exits_3() {
    let out = run(&["search", "28", "3", "--basic", "--budget", "100"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn verify_edge_cases() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.txt");
    std::fs::write(&empty, "").unwrap();
    assert_eq!(run(&["verify", empty.to_str().unwrap()]).status.code(), Some(0));

    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "4 2 ++-\n4 2 ++x\n").unwrap();
    let out = run(&["verify", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("bad.txt:2:"), "{err}");
}

#[test]
fn autocorr_profile() {
    let out = run(&["autocorr", "4", "2", "++-"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("autocorrelation x2: [8, 0, 0, 0]"));
    assert_eq!(run(&["autocorr", "4", "2", "+--"]).status.code(), Some(1));
}
