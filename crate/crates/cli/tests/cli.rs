//! End-to-end runs of the command-line binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_safesynth"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn gen_file(dir: &tempfile::TempDir, family: &str, k: &str, unreal: bool) -> PathBuf {
    let path = dir.path().join(format!("{family}_{k}{}.aag", if unreal { "u" } else { "" }));
    let mut args = vec![
        "gen",
        "--family",
        family,
        "--k",
        k,
        "-o",
        path.to_str().unwrap(),
    ];
    if unreal {
        args.push("--unrealizable");
    }
    let out = run(&args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    path
}

#[test]
fn gen_writes_parsable_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = gen_file(&dir, "cnt", "4", false);
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("aag "));
    assert!(text.contains("controllable_reset"));
}

#[test]
fn realizability_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let real = gen_file(&dir, "cnt", "4", false);
    let unreal = gen_file(&dir, "cnt", "3", true);
    for backend in ["sat1", "sat1-rg", "sat1-rge", "qbf", "templ-sat", "portfolio"] {
        let out = run(&["realizability", real.to_str().unwrap(), "--backend", backend]);
        assert_eq!(out.status.code(), Some(10), "backend {backend}");
    }
    let out = run(&["realizability", unreal.to_str().unwrap(), "--backend", "sat1-rge"]);
    assert_eq!(out.status.code(), Some(20));
}

#[test]
fn stats_file_has_machine_readable_records() {
    let dir = tempfile::tempdir().unwrap();
    let spec = gen_file(&dir, "cnt", "5", false);
    let stats = dir.path().join("stats.txt");
    let out = run(&[
        "realizability",
        spec.to_str().unwrap(),
        "--backend",
        "sat1",
        "--stats",
        stats.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(10));
    let text = std::fs::read_to_string(&stats).unwrap();
    for key in ["verdict=", "refinements=", "sat_calls=", "qbf_calls=", "gates=", "time_ms="] {
        assert!(text.contains(key), "missing {key} in {text}");
    }
    assert!(text.contains("verdict=realizable"));
}

#[test]
fn synth_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let spec = gen_file(&dir, "cnt", "4", false);
    let ctrl = dir.path().join("closed.aag");
    let out = run(&[
        "synth",
        spec.to_str().unwrap(),
        "--backend",
        "portfolio",
        "--extract",
        "sat-learn-dep",
        "--verify",
        "-o",
        ctrl.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(10),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let out = run(&["verify", ctrl.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(10));
}

#[test]
fn synth_on_unrealizable_exits_20() {
    let dir = tempfile::tempdir().unwrap();
    let spec = gen_file(&dir, "mv", "3", true);
    let out = run(&["synth", spec.to_str().unwrap(), "--backend", "sat1-rge"]);
    assert_eq!(out.status.code(), Some(20));
}

#[test]
fn winning_area_export_import() {
    let dir = tempfile::tempdir().unwrap();
    let spec = gen_file(&dir, "mv", "3", false);
    let warea = dir.path().join("w.cnf");
    let out = run(&[
        "realizability",
        spec.to_str().unwrap(),
        "--backend",
        "sat1",
        "--export-w",
        warea.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(10));
    assert!(warea.exists());
    let ctrl = dir.path().join("closed.aag");
    let out = run(&[
        "synth",
        spec.to_str().unwrap(),
        "--import-w",
        warea.to_str().unwrap(),
        "--extract",
        "qbf-learn",
        "--verify",
        "-o",
        ctrl.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(10),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let out = run(&["verify", ctrl.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(10));
}

#[test]
fn usage_errors_exit_1_on_stderr() {
    let out = run(&["realizability"]); // missing spec
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
    let out = run(&["gen", "--family", "nope", "--k", "3"]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["realizability", "/nonexistent/file.aag"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_rejects_open_systems() {
    let dir = tempfile::tempdir().unwrap();
    let spec = gen_file(&dir, "cnt", "3", false);
    let out = run(&["verify", spec.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("controllable"));
}
