use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn tabnl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tabnl"))
        .args(args)
        .env_remove("TABNL_CONFIG")
        .env_remove("TABNL_FIXTURES")
        .env("RUST_LOG", "error")
        .output()
        .unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = tabnl(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn fixture_dir() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    ok(&["fixtures", "--output", s(dir.path())]);
    dir
}

#[test]
fn verify_writes_one_report_per_claim() {
    let fx = fixture_dir();
    let work = tempfile::tempdir().unwrap();
    let out = work.path().join("reports.jsonl");
    let claims = fx.path().join("claims.jsonl");
    let stdout = ok(&["--fixtures", s(fx.path()), "--parallel", "2", "verify", "--input", s(&claims), "--output", s(&out)]);
    assert_eq!(stdout.lines().count(), 3);
    assert!(stdout.lines().all(|l| l.contains('\t')));
    assert_eq!(fs::read_to_string(&out).unwrap().lines().count(), 3);
}

#[test]
fn eval_reports_metrics_and_resumes() {
    let fx = fixture_dir();
    let work = tempfile::tempdir().unwrap();
    let out = work.path().join("reports.jsonl");
    let metrics = work.path().join("metrics.json");
    let claims = fx.path().join("claims.jsonl");
    let args = ["--fixtures", s(fx.path()), "eval", "--input", s(&claims), "--output", s(&out), "--metrics", s(&metrics)];
    let first: serde_json::Value = serde_json::from_str(&ok(&args)).unwrap();
    assert_eq!(first["accuracy"], 1.0);
    assert_eq!(first["count"], 3);
    let written: serde_json::Value = serde_json::from_str(&fs::read_to_string(&metrics).unwrap()).unwrap();
    assert_eq!(written, first);

    let resumed = tabnl(&[&args[..], &["--resume"]].concat());
    assert!(resumed.status.success());
    assert!(String::from_utf8_lossy(&resumed.stderr).contains("resumed 3 reports"));
    let second: serde_json::Value = serde_json::from_slice(&resumed.stdout).unwrap();
    assert_eq!(second, first);
    assert_eq!(fs::read_to_string(&out).unwrap().lines().count(), 3);
}

#[test]
fn execute_proof_from_ops() {
    let v: serde_json::Value = serde_json::from_str(&ok(&["execute-proof", "--ops", "EQ,FE,ALT"])).unwrap();
    assert_eq!(v["verdict"], "REFUTES");
    let v: serde_json::Value = serde_json::from_str(&ok(&["execute-proof", "--ops", "≡ ⊑"])).unwrap();
    assert_eq!(v["verdict"], "SUPPORTS");
    assert!(!tabnl(&["execute-proof", "--ops", "EQ,BOGUS"]).status.success());
}

#[test]
fn execute_proof_rechecks_a_report() {
    let fx = fixture_dir();
    let work = tempfile::tempdir().unwrap();
    let out = work.path().join("reports.jsonl");
    ok(&["--fixtures", s(fx.path()), "verify", "--input", s(&fx.path().join("claims.jsonl")), "--output", s(&out)]);
    let text = fs::read_to_string(&out).unwrap();
    let first = text.lines().next().unwrap();
    let stored: serde_json::Value = serde_json::from_str(first).unwrap();
    let one = work.path().join("one.json");
    fs::write(&one, first).unwrap();
    let v: serde_json::Value = serde_json::from_str(&ok(&["execute-proof", "--input", s(&one)])).unwrap();
    assert_eq!(v["verdict"], stored["verdict"]);
}

#[test]
fn probe_generation_and_scoring() {
    let fx = fixture_dir();
    let work = tempfile::tempdir().unwrap();
    let probe = work.path().join("probe.jsonl");
    let reports = work.path().join("probe_reports.jsonl");
    ok(&["probe-gen", "--input", s(&fx.path().join("claims.jsonl")), "--output", s(&probe)]);
    let lines = fs::read_to_string(&probe).unwrap().lines().count();
    assert!(lines > 0 && lines % 18 == 0);

    ok(&["--fixtures", s(fx.path()), "verify", "--input", s(&probe), "--output", s(&reports)]);
    let score: serde_json::Value = serde_json::from_str(&ok(&["probe-score", "--input", s(&reports)])).unwrap();
    assert_eq!(score["base_total"], lines / 18);
    assert_eq!(score["classes"].as_object().unwrap().len(), 8);
    assert_eq!(score["kinds"].as_object().unwrap().len(), 17);
}

#[test]
fn mock_backend_requires_fixtures() {
    let work = tempfile::tempdir().unwrap();
    let out = tabnl(&["decompose", "--claim", "Ortegal had 5 municipalities."]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("--fixtures"));
    let missing = work.path().join("none.jsonl");
    assert!(!tabnl(&["verify", "--input", s(&missing), "--output", s(&work.path().join("o.jsonl"))]).status.success());
}

#[test]
fn sampling_is_seeded() {
    let fx = fixture_dir();
    let work = tempfile::tempdir().unwrap();
    let claims = fx.path().join("claims.jsonl");
    let run = |seed: &str, name: &str| {
        let out = work.path().join(name);
        ok(&["--fixtures", s(fx.path()), "--seed", seed, "verify", "--input", s(&claims), "--output", s(&out), "--sample", "2"])
    };
    let a = run("7", "a.jsonl");
    assert_eq!(a.lines().count(), 2);
    assert_eq!(a, run("7", "b.jsonl"));
}
