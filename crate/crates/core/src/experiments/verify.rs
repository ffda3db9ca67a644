//! Assertion suites: scenarios paired with expected values.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{load_scenario, run_scenario, ExperimentError, RunOptions};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Suite {
    #[serde(rename = "case")]
    cases: Vec<Case>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Case {
    /// Scenario file, relative to the suite file.
    scenario: Option<String>,
    /// Scenario given inline.
    inline: Option<toml::Value>,
    #[serde(rename = "assert", default)]
    assertions: Vec<Assertion>,
}

/// Check on a dotted path (`fit.exponent`, `fields.0.rank`) of the result.
/// Numbers compare by `value ± tol` or `[min, max]`; `equals` compares JSON.
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Assertion {
    pub path: String,
    pub value: Option<f64>,
    pub tol: Option<f64>,
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub equals: Option<toml::Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AssertionResult {
    pub path: String,
    pub expected: String,
    pub measured: Value,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CaseResult {
    pub name: String,
    pub error: Option<String>,
    pub assertions: Vec<AssertionResult>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub cases: Vec<CaseResult>,
    pub passed: usize,
    pub failed: usize,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

pub fn lookup<'a>(v: &'a Value, path: &str) -> Option<&'a Value> {
    path.split('.').try_fold(v, |cur, key| match cur {
        Value::Array(a) => a.get(key.parse::<usize>().ok()?),
        Value::Object(o) => o.get(key),
        _ => None,
    })
}

fn as_number(v: &Value) -> Option<f64> {
    match v {
        Value::Number(n) => n.as_f64(),
        Value::String(s) => s.parse().ok(),
        Value::Bool(b) => Some(f64::from(u8::from(*b))),
        _ => None,
    }
}

fn check(a: &Assertion, result: &Value) -> Result<AssertionResult, ExperimentError> {
    let measured = lookup(result, &a.path).cloned().unwrap_or(Value::Null);
    let num = as_number(&measured);
    let (expected, pass) = match (a.value, a.min, a.max, &a.equals) {
        (Some(v), None, None, None) => {
            let tol = a.tol.unwrap_or(0.0);
            (format!("{v} ± {tol}"), num.is_some_and(|x| (x - v).abs() <= tol))
        }
        (None, lo, hi, None) if lo.is_some() || hi.is_some() => {
            let lo = lo.unwrap_or(f64::NEG_INFINITY);
            let hi = hi.unwrap_or(f64::INFINITY);
            (format!("in [{lo}, {hi}]"), num.is_some_and(|x| x >= lo && x <= hi))
        }
        (None, None, None, Some(e)) => {
            let e = serde_json::to_value(e).map_err(|err| ExperimentError::validation("assert.equals", err.to_string()))?;
            (format!("= {e}"), measured == e)
        }
        _ => return Err(ExperimentError::validation(format!("assert `{}`", a.path), "give exactly one of value, min/max, equals")),
    };
    Ok(AssertionResult { path: a.path.clone(), expected, measured, pass })
}

/// Run every case of a suite file and evaluate its assertions.
pub fn verify(suite_path: &Path, opts: &RunOptions) -> Result<VerifyReport, ExperimentError> {
    let text = std::fs::read_to_string(suite_path)
        .map_err(|e| ExperimentError::validation("<suite>", format!("cannot read {}: {e}", suite_path.display())))?;
    let suite: Suite = serde_path_to_error::deserialize(toml::de::Deserializer::new(&text))
        .map_err(|e| ExperimentError::validation(e.path().to_string(), e.into_inner().message().to_string()))?;
    let base = suite_path.parent().unwrap_or(Path::new("."));
    let mut cases = Vec::new();
    for (i, case) in suite.cases.iter().enumerate() {
        let text = match (&case.scenario, &case.inline) {
            (Some(p), None) => std::fs::read_to_string(base.join(p))
                .map_err(|e| ExperimentError::validation(format!("case[{i}].scenario"), format!("cannot read {p}: {e}")))?,
            (None, Some(v)) => toml::to_string(v).map_err(|e| ExperimentError::validation(format!("case[{i}].inline"), e.to_string()))?,
            _ => return Err(ExperimentError::validation(format!("case[{i}]"), "give exactly one of `scenario` and `inline`")),
        };
        let scenario = load_scenario(&text, opts)?;
        let name = scenario.name.clone();
        let result = match run_scenario(&scenario, opts.threads) {
            Ok((outcome, _)) => {
                let assertions = case.assertions.iter().map(|a| check(a, &outcome.summary)).collect::<Result<Vec<_>, _>>()?;
                let pass = assertions.iter().all(|a| a.pass);
                CaseResult { name, error: None, assertions, pass }
            }
            Err(e) => CaseResult { name, error: Some(e.to_string()), assertions: Vec::new(), pass: false },
        };
        cases.push(result);
    }
    let passed = cases.iter().filter(|c| c.pass).count();
    Ok(VerifyReport { failed: cases.len() - passed, passed, cases })
}
