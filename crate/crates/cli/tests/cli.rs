//! End-to-end behaviour of the binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use biharmlab::output::parse_csv;

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn run(args: &[&str], config: &Path, out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_biharmlab"))
        .args(args)
        .arg(config)
        .arg("--out-dir")
        .arg(out)
        .output()
        .unwrap()
}

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let p = dir.join("cfg.toml");
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn clamped_plate_solution_file() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(&["solve"], &configs().join("clamped_plate.toml"), tmp.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let (header, rows) = parse_csv(&std::fs::read_to_string(tmp.path().join("solution.csv")).unwrap()).unwrap();
    assert_eq!(header[..2], ["r", "u"]);
    assert_eq!(rows[0][0], 0.0);
    assert!((rows[0][1] - 1.0).abs() <= 1e-6);
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(tmp.path().join("run.json")).unwrap()).unwrap();
    assert_eq!(manifest["command"], "solve");
    assert_eq!(manifest["status"], "passed");
    assert!(manifest["wall_seconds"].as_f64().unwrap() >= 0.0);
}

#[test]
fn reversed_branch_range_is_a_config_error() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "[branch]\nm_start = 5.0\nm_end = 1.0\n");
    let out = run(&["branch"], &cfg, &tmp.path().join("out"));
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("m_start"));
}

#[test]
fn unknown_key_names_its_line() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "[solver]\nnodes = 129\nbogus = 1\n");
    let out = run(&["solve"], &cfg, &tmp.path().join("out"));
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 3") && err.contains("bogus"), "{err}");
}

#[test]
fn undersized_kernel_sample_is_a_config_error() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "[green]\nsamples = 10\n");
    assert_eq!(run(&["green"], &cfg, &tmp.path().join("out")).status.code(), Some(2));
}

#[test]
fn missing_config_is_a_config_error() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(&["solve"], &tmp.path().join("absent.toml"), tmp.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "[green]\nsamples = 1000\n[counterexample]\nsamples = 50\n[solver]\nnodes = 129\n",
    );
    for cmd in ["solve", "pohozaev", "green", "counterexample"] {
        let a = tmp.path().join(format!("{cmd}-a"));
        let b = tmp.path().join(format!("{cmd}-b"));
        assert_eq!(run(&[cmd], &cfg, &a).status.code(), Some(0));
        assert_eq!(run(&[cmd], &cfg, &b).status.code(), Some(0));
        let mut names: Vec<_> = std::fs::read_dir(&a).unwrap().map(|e| e.unwrap().file_name()).collect();
        names.sort();
        for n in names.iter().filter(|n| *n != "run.json") {
            assert_eq!(std::fs::read(a.join(n)).unwrap(), std::fs::read(b.join(n)).unwrap(), "{cmd}: {n:?}");
        }
    }
}

#[test]
fn seed_changes_only_sampled_payloads() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "[green]\nsamples = 1000\n");
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    assert_eq!(run(&["green"], &cfg, &a).status.code(), Some(0));
    let out = Command::new(env!("CARGO_BIN_EXE_biharmlab"))
        .args(["green", cfg.to_str().unwrap(), "--seed", "7", "--out-dir", b.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_ne!(
        std::fs::read(a.join("green_samples.csv")).unwrap(),
        std::fs::read(b.join("green_samples.csv")).unwrap()
    );
}

#[test]
fn json_only_output() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "[output]\nformats = [\"json\"]\n[solver]\nnodes = 129\n");
    let out = tmp.path().join("out");
    assert_eq!(run(&["solve"], &cfg, &out).status.code(), Some(0));
    assert!(out.join("solution.json").exists());
    assert!(!out.join("solution.csv").exists());
}
