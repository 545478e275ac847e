//! End-to-end checks of the `rpu` binary: determinism, record schema,
//! and exit codes.

use std::process::Command;

use rpu_cli::records::{MetricRecord, SCHEMA_VERSION};

fn rpu() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rpu"))
}

fn parse_records(bytes: &[u8]) -> Vec<MetricRecord> {
    String::from_utf8(bytes.to_vec())
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).expect("record line parses"))
        .collect()
}

#[test]
fn identical_invocations_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.jsonl");
    let b = dir.path().join("b.jsonl");
    for path in [&a, &b] {
        let status = rpu()
            .args(["run", "--class", "rect", "--dim", "2", "--epsilon", "0.1"])
            .args(["--trials", "4", "--seed", "42", "--out"])
            .arg(path)
            .status()
            .unwrap();
        assert!(status.success());
    }
    let bytes_a = std::fs::read(&a).unwrap();
    assert!(!bytes_a.is_empty());
    assert_eq!(bytes_a, std::fs::read(&b).unwrap());
}

#[test]
fn sweep_emits_one_record_per_trial_per_epsilon() {
    let out = rpu()
        .args(["sweep", "--class", "halfspace2d", "--epsilon", "0.1,0.05"])
        .args(["--trials", "3", "--seed", "5"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let records = parse_records(&out.stdout);
    assert_eq!(records.len(), 6);
    for r in &records {
        assert_eq!(r.schema_version, SCHEMA_VERSION);
        assert_eq!(r.class, "halfspace2d");
        assert!(!r.failed);
        assert_eq!(r.mislabel_count, 0);
    }
    let per_eps = records.iter().filter(|r| r.epsilon == 0.1).count();
    assert_eq!(per_eps, 3);
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        vec!["run", "--class", "bogus", "--epsilon", "0.1"],
        vec!["run", "--class", "rect", "--epsilon", "2.0"],
        vec!["run", "--class", "rect", "--epsilon", "0.1", "--mode", "doubling"],
        vec!["frobnicate"],
    ] {
        let out = rpu().args(&args).output().unwrap();
        assert_eq!(out.status.code(), Some(1), "args {args:?}");
    }
}

#[test]
fn certify_small_suites_exit_zero() {
    for class in ["rect", "tree", "halfspace2d"] {
        let out = rpu()
            .args(["certify", "--class", class, "--pairs", "10", "--probes", "20"])
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0), "class {class}");
        assert!(String::from_utf8_lossy(&out.stdout).contains("-> ok"));
    }
}

#[test]
fn constants_override_changes_output_and_stays_deterministic() {
    let base = rpu()
        .args(["run", "--class", "rect", "--epsilon", "0.1", "--trials", "2", "--seed", "3"])
        .output()
        .unwrap();
    let tweaked = rpu()
        .args(["run", "--class", "rect", "--epsilon", "0.1", "--trials", "2", "--seed", "3"])
        .args(["--constants", "c2=3"])
        .output()
        .unwrap();
    assert!(base.status.success() && tweaked.status.success());
    let rb = parse_records(&base.stdout);
    let rt = parse_records(&tweaked.stdout);
    assert!(rt[0].samples_total < rb[0].samples_total);
    assert_eq!(rt[0].peak_points, rb[0].peak_points);
}
