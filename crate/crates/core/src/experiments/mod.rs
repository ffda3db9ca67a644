//! Declarative experiment scenarios: parsing, execution, outputs and
//! assertion suites.

pub mod kinds;
pub mod scenario;
pub mod schema;
pub mod verify;

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

pub use kinds::{execute, Outcome};
pub use scenario::{Kind, Scenario};
pub use schema::schema;
pub use verify::{verify, AssertionResult, CaseResult, VerifyReport};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExperimentError {
    #[error("invalid scenario at `{path}`: {message}")]
    Validation { path: String, message: String },
    #[error("computation failed: {0}")]
    Computation(String),
}

impl ExperimentError {
    pub fn validation(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self::Validation { path: path.into(), message: message.into() }
    }

    pub fn computation(message: impl Into<String>) -> Self {
        Self::Computation(message.into())
    }

    /// 2 for invalid input, 3 for failures during computation or output.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Validation { .. } => 2,
            Self::Computation(_) => 3,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    /// Worker threads; `None` uses the rayon default.
    pub threads: Option<usize>,
    pub seed: Option<u64>,
    pub strict: bool,
}

/// Manifest of one run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunRecord {
    pub scenario: String,
    pub kind: Kind,
    /// SHA-256 of the scenario file.
    pub scenario_hash: String,
    pub tool_version: String,
    pub seed: u64,
    pub threads: usize,
    pub wall_time_secs: f64,
    pub outputs: Vec<String>,
    pub warnings: Vec<String>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Execute a parsed scenario on a pool of `threads` workers.
pub fn run_scenario(scenario: &Scenario, threads: Option<usize>) -> Result<(Outcome, usize), ExperimentError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        if t == 0 {
            return Err(ExperimentError::validation("--threads", "must be at least 1"));
        }
        builder = builder.num_threads(t);
    }
    let pool = builder.build().map_err(|e| ExperimentError::computation(e.to_string()))?;
    let n = pool.current_num_threads();
    let mut out = pool.install(|| execute(scenario))?;
    let mut warnings = scenario.warnings.clone();
    warnings.append(&mut out.warnings);
    out.warnings = warnings;
    Ok((out, n))
}

/// Parse scenario text, applying a seed override.
pub fn load_scenario(text: &str, opts: &RunOptions) -> Result<Scenario, ExperimentError> {
    let mut s = Scenario::parse(text, opts.strict)?;
    if let Some(seed) = opts.seed {
        s.seed = seed;
    }
    if s.name.is_empty() || !s.name.chars().all(|c| c.is_ascii_alphanumeric() || "-_.".contains(c)) {
        return Err(ExperimentError::validation("name", "must be non-empty and use only letters, digits, `-`, `_`, `.`"));
    }
    Ok(s)
}

/// The JSON document written for a scenario result.
pub fn summary_document(scenario: &Scenario, outcome: &Outcome) -> serde_json::Value {
    serde_json::json!({
        "name": scenario.name,
        "kind": scenario.kind,
        "seed": scenario.seed,
        "result": outcome.summary,
        "warnings": outcome.warnings,
    })
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), ExperimentError> {
    std::fs::write(path, bytes).map_err(|e| ExperimentError::computation(format!("writing {}: {e}", path.display())))
}

pub fn write_csv(path: &Path, header: &[String], rows: &[Vec<String>]) -> Result<(), ExperimentError> {
    let io = |e: csv::Error| ExperimentError::computation(format!("writing {}: {e}", path.display()));
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(r).map_err(io)?;
    }
    w.flush().map_err(|e| ExperimentError::computation(e.to_string()))
}

/// Run a scenario file and write `<name>.json`, `<name>.csv` (when the kind
/// produces a table) and the `<name>.run.json` manifest into `out_dir`.
pub fn run(scenario_path: &Path, out_dir: &Path, opts: &RunOptions) -> Result<RunRecord, ExperimentError> {
    let start = Instant::now();
    let bytes = std::fs::read(scenario_path)
        .map_err(|e| ExperimentError::validation("<file>", format!("cannot read {}: {e}", scenario_path.display())))?;
    let text = String::from_utf8(bytes.clone()).map_err(|_| ExperimentError::validation("<file>", "not UTF-8"))?;
    let scenario = load_scenario(&text, opts)?;
    let (outcome, threads) = run_scenario(&scenario, opts.threads)?;
    std::fs::create_dir_all(out_dir).map_err(|e| ExperimentError::computation(format!("creating {}: {e}", out_dir.display())))?;

    let mut outputs: Vec<PathBuf> = Vec::new();
    let json_path = out_dir.join(format!("{}.json", scenario.name));
    let doc = serde_json::to_string_pretty(&summary_document(&scenario, &outcome)).expect("json");
    write_file(&json_path, doc.as_bytes())?;
    outputs.push(json_path);
    if let Some((header, rows)) = &outcome.table {
        let csv_path = out_dir.join(format!("{}.csv", scenario.name));
        write_csv(&csv_path, header, rows)?;
        outputs.push(csv_path);
    }
    let record = RunRecord {
        scenario: scenario.name.clone(),
        kind: scenario.kind,
        scenario_hash: sha256_hex(&bytes),
        tool_version: TOOL_VERSION.to_string(),
        seed: scenario.seed,
        threads,
        wall_time_secs: start.elapsed().as_secs_f64(),
        outputs: outputs.iter().map(|p| p.display().to_string()).collect(),
        warnings: outcome.warnings.clone(),
    };
    let manifest = out_dir.join(format!("{}.run.json", scenario.name));
    write_file(&manifest, serde_json::to_string_pretty(&record).expect("json").as_bytes())?;
    Ok(record)
}
