use std::sync::Arc;

use tabnl_core::eval::{load_dataset, read_reports, run_eval, DatasetFormat, EvalOptions};
use tabnl_core::fixtures::{golden_cases, write_fixture_dir};
use tabnl_core::gateway::{Gateway, MockBackend};
use tabnl_core::natlog::Verdict;
use tabnl_core::pipeline::{PipelineConfig, Verifier};
use tabnl_core::Config;

fn verifier_from_dir(dir: &std::path::Path) -> Verifier {
    let backend = MockBackend::from_dir(dir).unwrap();
    let gateway = Config::default().gateway(Arc::new(backend)).unwrap();
    Verifier::new(Arc::new(gateway), Config::default().pipeline_config().unwrap())
}

#[test]
fn fixture_directory_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    write_fixture_dir(&Gateway::with_backend(Arc::new(MockBackend::default())), dir.path()).unwrap();
    let data = load_dataset(&dir.path().join("claims.jsonl"), DatasetFormat::FeverousJsonl).unwrap();
    assert_eq!((data.instances.len(), data.skipped), (3, 0));

    let out = dir.path().join("reports.jsonl");
    let options = EvalOptions { parallel: 3, ..EvalOptions::default() };
    let outcome = run_eval(&data.instances, &verifier_from_dir(dir.path()), &options, Some(&out)).unwrap();
    assert_eq!(outcome.metrics.accuracy, Some(1.0));
    assert_eq!(outcome.metrics.execution_found, Some(1.0));

    let reports = read_reports(&out).unwrap();
    assert_eq!(reports.len(), 3);
    for case in golden_cases() {
        let r = reports.iter().find(|r| r.claim_id == case.id).unwrap();
        assert_eq!(r.verdict, case.expected, "{}", case.id);
        assert_eq!(r.recompute(), Ok(case.expected));
    }
}

#[test]
fn prompts_missing_from_fixtures_degrade() {
    let dir = tempfile::tempdir().unwrap();
    write_fixture_dir(&Gateway::with_backend(Arc::new(MockBackend::default())), dir.path()).unwrap();
    let v = verifier_from_dir(dir.path());
    let report = v.verify_claim("new", "Ortegal had 5 municipalities in 2011.", &golden_cases()[0].tables);
    assert_eq!(report.verdict, Verdict::Nei);
    assert!(!report.execution_found);
    assert!(report.diagnostics.iter().any(|t| t.error.is_some()));
}

#[test]
fn changed_templates_miss_the_fixtures() {
    let dir = tempfile::tempdir().unwrap();
    write_fixture_dir(&Gateway::with_backend(Arc::new(MockBackend::default())), dir.path()).unwrap();
    let mut config = Config::default();
    let tdir = tempfile::tempdir().unwrap();
    std::fs::write(tdir.path().join("decomp.txt"), "Split into facts: {claim}").unwrap();
    config.templates = Some(tdir.path().to_path_buf());
    let gateway = config.gateway(Arc::new(MockBackend::from_dir(dir.path()).unwrap())).unwrap();
    let v = Verifier::new(Arc::new(gateway), PipelineConfig::default());
    let case = &golden_cases()[0];
    let report = v.verify_claim(case.id, case.claim, &case.tables);
    assert!(!report.notes.is_empty());
    assert_eq!(report.subclaims.len(), 1);
}
