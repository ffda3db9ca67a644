use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_paralab"))
}

fn scenarios() -> PathBuf {
    [env!("CARGO_MANIFEST_DIR"), "..", "..", "scenarios"].iter().collect()
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn run_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["run", path(&scenarios().join("classify.toml")), "--out", path(dir.path()), "--threads", "1"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let record: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(record["kind"], "classify");
    assert_eq!(record["threads"], 1);
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("classify-parabolic.json")).unwrap()).unwrap();
    assert_eq!(doc["result"]["kind"], "parabolic");
    assert!(dir.path().join("classify-parabolic.run.json").exists());
}

#[test]
fn invalid_gram_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let s = dir.path().join("bad.toml");
    std::fs::write(&s, "name = \"bad\"\nkind = \"classify\"\n[inputs]\ngram = [[1, 2], [0, -1]]\nmatrix = [[1, 0], [0, 1]]\n").unwrap();
    let o = run(&["run", path(&s), "--out", path(dir.path())]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("inputs.gram"));
}

#[test]
fn strict_flag_rejects_unknown_keys() {
    let dir = tempfile::tempdir().unwrap();
    let s = dir.path().join("extra.toml");
    std::fs::write(&s, "name = \"x\"\nkind = \"classify\"\n[inputs]\ngram = [[1, 0], [0, -1]]\nmatrix = [[1, 0], [0, 1]]\ntypo = 1\n").unwrap();
    let lenient = run(&["run", path(&s), "--out", path(dir.path())]);
    assert!(lenient.status.success());
    assert!(String::from_utf8_lossy(&lenient.stderr).contains("warning"));
    let strict = run(&["run", path(&s), "--out", path(dir.path()), "--strict"]);
    assert_eq!(strict.status.code(), Some(2));
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::copy(scenarios().join("classify.toml"), dir.path().join("classify.toml")).unwrap();
    let good = dir.path().join("good.toml");
    std::fs::write(&good, "[[case]]\nscenario = \"classify.toml\"\n[[case.assert]]\npath = \"kind\"\nequals = \"parabolic\"\n").unwrap();
    let o = run(&["verify", path(&good)]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("1 passed, 0 failed"));

    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "[[case]]\nscenario = \"classify.toml\"\n[[case.assert]]\npath = \"signature\"\nequals = [2, 1]\n").unwrap();
    let report = dir.path().join("report.json");
    let o = run(&["verify", path(&bad), "--out", path(&report)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
    let rep: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(report).unwrap()).unwrap();
    assert_eq!(rep["failed"], 1);
}

#[test]
fn schema_prints_templates() {
    let o = run(&["schema", "density"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("kind = \"density\""));
    let all = run(&["schema"]);
    assert!(stdout(&all).contains("kind = \"group-orbit\""));
    assert!(!run(&["schema", "nonsense"]).status.success());
}
