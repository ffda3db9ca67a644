use std::path::{Path, PathBuf};

use paralab::experiments::{load_scenario, run, sha256_hex, verify, ExperimentError, Kind, RunOptions, Scenario};

fn scenarios() -> PathBuf {
    [env!("CARGO_MANIFEST_DIR"), "..", "..", "scenarios"].iter().collect()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn run_writes_summary_table_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let path = scenarios().join("growth_pell.toml");
    let rec = run(&path, dir.path(), &RunOptions { threads: Some(2), ..Default::default() }).unwrap();
    assert_eq!(rec.kind, Kind::Growth);
    assert_eq!(rec.threads, 2);
    assert_eq!(rec.scenario_hash, sha256_hex(&std::fs::read(&path).unwrap()));
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("growth-pell.json")).unwrap()).unwrap();
    assert_eq!(json["result"]["classification"]["kind"], "loxodromic");
    let csv = std::fs::read_to_string(dir.path().join("growth-pell.csv")).unwrap();
    assert!(csv.starts_with("n,log_norm,exact\n25,"));
    assert_eq!(csv.lines().count(), 9);
    assert!(dir.path().join("growth-pell.run.json").exists());
}

#[test]
fn every_template_parses_strictly() {
    for entry in std::fs::read_dir(scenarios()).unwrap() {
        let p = entry.unwrap().path();
        if p.file_name().unwrap() == "suite.toml" {
            continue;
        }
        let text = std::fs::read_to_string(&p).unwrap();
        load_scenario(&text, &RunOptions { strict: true, ..Default::default() }).unwrap_or_else(|e| panic!("{}: {e}", p.display()));
    }
}

#[test]
fn unknown_parameter_is_an_error_only_in_strict_mode() {
    let text = "name = \"x\"\nkind = \"classify\"\n[inputs]\ngram = [[1, 0], [0, -1]]\nmatrix = [[1, 0], [0, 1]]\nextra = 3\n";
    let lenient = Scenario::parse(text, false).unwrap();
    assert_eq!(lenient.warnings.len(), 1);
    match Scenario::parse(text, true) {
        Err(ExperimentError::Validation { path, .. }) => assert!(path.contains("extra"), "{path}"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn malformed_gram_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "bad.toml", "name = \"bad\"\nkind = \"classify\"\n[inputs]\ngram = [[1, 2], [0, -1]]\nmatrix = [[1, 0], [0, 1]]\n");
    let err = run(&p, dir.path(), &RunOptions::default()).unwrap_err();
    assert_eq!(err.exit_code(), 2);
    assert!(matches!(&err, ExperimentError::Validation { path, .. } if path == "inputs.gram"), "{err}");
}

#[test]
fn seed_override_changes_recorded_seed() {
    let text = std::fs::read_to_string(scenarios().join("conjugacy.toml")).unwrap();
    let s = load_scenario(&text, &RunOptions { seed: Some(99), ..Default::default() }).unwrap();
    assert_eq!(s.seed, 99);
}

#[test]
fn verify_reports_failures_without_erroring() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = std::fs::read_to_string(scenarios().join("classify.toml")).unwrap();
    write(dir.path(), "classify.toml", &scenario);
    let suite = write(
        dir.path(),
        "suite.toml",
        "[[case]]\nscenario = \"classify.toml\"\n[[case.assert]]\npath = \"kind\"\nequals = \"parabolic\"\n\
         [[case]]\nscenario = \"classify.toml\"\n[[case.assert]]\npath = \"kind\"\nequals = \"elliptic\"\n",
    );
    let rep = verify(&suite, &RunOptions::default()).unwrap();
    assert_eq!((rep.passed, rep.failed), (1, 1));
    assert!(!rep.all_passed());
}

#[test]
fn bundled_suite_passes() {
    let rep = verify(&scenarios().join("suite.toml"), &RunOptions::default()).unwrap();
    assert!(rep.all_passed(), "{:#?}", rep.cases.iter().filter(|c| !c.pass).collect::<Vec<_>>());
}
