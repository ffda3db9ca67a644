//! Dispatch from validated payloads to the computational modules.

use std::sync::Arc;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::scenario::{int_matrix, ints, parse_branches, rats, GrowthModeInput, IsometryInput, Payload, Scenario};
use super::ExperimentError;
use crate::lattice::{
    classify_isometry, concavity_check, default_schedule, growth_exponent, growth_spectrum, parameter_search,
    projectivity_parameter, verify_isometry, GramLattice, GrowthMode, GrowthOptions, IsometryClassification,
    LatticeError, LatticeIsometry, PeriodPoint,
};
use crate::orbit::{density_scan, group_orbit_scan, orbit_closure, orbit_sample_oracle, resonance_detect, OrbitError};
use crate::torus::{generic_rank, QuasiRandom};
use crate::volume::{conjugacy_check, det_integral, fit_growth, pushforward_series, Multisection};

/// Result of one scenario: a JSON summary and an optional CSV table.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub summary: Value,
    pub table: Option<(Vec<String>, Vec<Vec<String>>)>,
    pub warnings: Vec<String>,
}

impl Outcome {
    fn json(summary: Value) -> Self {
        Self { summary, table: None, warnings: Vec::new() }
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable report")
}

fn strs(v: &[BigInt]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

fn isometry(input: &IsometryInput) -> Result<LatticeIsometry, ExperimentError> {
    let gram = int_matrix(&input.gram).map_err(|e| ExperimentError::validation("inputs.gram", e))?;
    let lattice = GramLattice::new(gram).map_err(|e| ExperimentError::validation("inputs.gram", e.to_string()))?;
    let m = int_matrix(&input.matrix).map_err(|e| ExperimentError::validation("inputs.matrix", e))?;
    verify_isometry(Arc::new(lattice), m).map_err(|e| ExperimentError::validation("inputs.matrix", e.to_string()))
}

fn classification_json(c: &IsometryClassification) -> Value {
    match c {
        IsometryClassification::Elliptic { order } => json!({ "kind": "elliptic", "order": order }),
        IsometryClassification::Parabolic { isotropic_class, unipotent_power } => {
            json!({ "kind": "parabolic", "class": strs(isotropic_class), "unipotent_power": unipotent_power })
        }
        IsometryClassification::Loxodromic { lambda, enclosure } => json!({
            "kind": "loxodromic",
            "lambda": lambda,
            "enclosure": [enclosure.lo.to_string(), enclosure.hi.to_string()],
        }),
    }
}

fn comp<E: std::fmt::Display>(e: E) -> ExperimentError {
    ExperimentError::computation(e.to_string())
}

pub fn execute(scenario: &Scenario) -> Result<Outcome, ExperimentError> {
    let seed = scenario.seed;
    match &scenario.payload {
        Payload::Classify(input) => {
            let h = isometry(input)?;
            let c = classify_isometry(&h).map_err(comp)?;
            let (p, n) = h.lattice().signature();
            let mut v = classification_json(&c);
            v["signature"] = json!([p, n]);
            Ok(Outcome::json(v))
        }
        Payload::Growth(input, params) => {
            let h = isometry(input)?;
            let c = classify_isometry(&h).map_err(comp)?;
            let mode = match params.mode {
                GrowthModeInput::Polynomial => GrowthMode::Polynomial,
                GrowthModeInput::Exponential => GrowthMode::Exponential,
                GrowthModeInput::Auto if matches!(c, IsometryClassification::Loxodromic { .. }) => GrowthMode::Exponential,
                GrowthModeInput::Auto => GrowthMode::Polynomial,
            };
            let schedule = params.schedule.clone().unwrap_or_else(|| match mode {
                GrowthMode::Polynomial => default_schedule(),
                GrowthMode::Exponential => (1..=8).map(|k| 25 * k).collect(),
            });
            let opts = GrowthOptions { max_bits: params.max_bits, float_fallback: params.float_fallback };
            let fit = growth_exponent(h.matrix(), mode, &schedule, opts)
                .map_err(|e| match e {
                    LatticeError::InvalidSchedule => ExperimentError::validation("parameters.schedule", e.to_string()),
                    e => comp(e),
                })?;
            let mut v = json!({ "classification": classification_json(&c), "fit": to_value(&fit) });
            if mode == GrowthMode::Polynomial {
                // ‖Mⁿ‖/n^k at the last two iterates, with k the rounded exponent
                let k = fit.exponent.round();
                let s = &fit.samples[fit.samples.len() - 2..];
                let ratio = |i: usize| (s[i].log_norm - k * (s[i].n as f64).ln()).exp();
                let (a, b) = (ratio(0), ratio(1));
                v["normalized_tail"] = json!({ "power": k, "n": [s[0].n, s[1].n], "values": [a, b], "relative_change": ((b - a) / a).abs() });
            }
            if params.p_max > 0 {
                let spec = growth_spectrum(h.matrix(), params.p_max, mode, &schedule, opts).map_err(comp)?;
                let conc = if params.p_max >= 2 { Some(concavity_check(&spec, params.concavity_tol).map_err(comp)?) } else { None };
                v["spectrum"] = to_value(&spec);
                v["concavity"] = to_value(&conc);
            }
            let table = Some((
                ["n", "log_norm", "exact"].map(String::from).to_vec(),
                fit.samples.iter().map(|s| vec![s.n.to_string(), format!("{:?}", s.log_norm), s.exact.to_string()]).collect(),
            ));
            Ok(Outcome { summary: v, table, warnings: Vec::new() })
        }
        Payload::BettiRank(inputs, params) => {
            let fields = inputs.fields(seed)?;
            let results = fields
                .par_iter()
                .enumerate()
                .map(|(i, (label, f))| {
                    generic_rank(f, params.samples, seed.wrapping_add(i as u64), params.rank_tol)
                        .map(|r| json!({ "label": label, "g": f.g(), "rank": r.rank, "even": r.even, "histogram": r.histogram }))
                        .map_err(comp)
                })
                .collect::<Result<Vec<_>, _>>()?;
            let all_even = results.iter().all(|r| r["even"] == json!(true));
            let max_rank = results.iter().filter_map(|r| r["rank"].as_u64()).max();
            let mut v = json!({ "count": results.len(), "all_even": all_even, "fields": results });
            if results.len() == 1 {
                v["rank"] = json!(max_rank);
                v["even"] = json!(all_even);
            }
            Ok(Outcome::json(v))
        }
        Payload::Orbit(inputs, params) => {
            let t = inputs.build()?;
            let exact = orbit_closure(&t);
            let floats = t.float_values_mod1();
            let mut warnings = Vec::new();
            if inputs.independent {
                if let Some(rel) = t.independence_warning() {
                    warnings.push(format!("declared independent constants satisfy the likely relation {:?}", strs(&rel)));
                }
            }
            let oracle = match orbit_sample_oracle(&floats, params.oracle_points, params.cluster_tol) {
                Ok(o) => json!({ "status": "ok", "dimension": o.dimension, "components": o.components, "estimate": to_value(&o) }),
                Err(OrbitError::InconclusiveAtScale { fine, coarse }) => {
                    warnings.push("sampling oracle inconclusive at this scale".into());
                    json!({ "status": "inconclusive", "fine": to_value(&fine), "coarse": to_value(&coarse) })
                }
                Err(e) => return Err(ExperimentError::validation("parameters", e.to_string())),
            };
            let agree = oracle["status"] == "ok"
                && oracle["dimension"] == json!(exact.dimension)
                && oracle["components"].as_u64().map(BigInt::from) == Some(exact.components.clone());
            let mut v = json!({
                "t": floats,
                "exact": to_value(&exact),
                "dimension": exact.dimension,
                "components": exact.components.to_string(),
                "oracle": oracle,
                "agree": agree,
            });
            if let Some(q) = params.q {
                let r = resonance_detect(&floats, q, params.tol).map_err(|e| ExperimentError::validation("parameters.q", e.to_string()))?;
                v["resonance"] = to_value(&r);
            }
            Ok(Outcome { summary: v, table: None, warnings })
        }
        Payload::Density(inputs, params) => {
            let field = inputs.field.build("inputs.field")?;
            let mut p = params.clone();
            p.seed = seed;
            let rep = density_scan(&field, &p).map_err(comp)?;
            let mut summary = to_value(&rep);
            summary["covering_radius"] = (0..=2 * rep.g).map(|s| rep.covering_radius(s)).collect::<Vec<_>>().into();
            Ok(Outcome { summary, table: Some(rep.csv_rows()), warnings: rep.warnings.clone() })
        }
        Payload::Volume(inputs, params) => {
            let field = inputs.field.build("inputs.field")?;
            let ms = match &inputs.branches {
                None => Multisection::zero(field.family().clone()),
                Some(b) => Multisection::new(field.family().clone(), parse_branches(b)?)
                    .map_err(|e| ExperimentError::validation("inputs.branches", e.to_string()))?,
            };
            let iterates = params.iterates.clone().unwrap_or_else(|| (1..=params.n_max).collect());
            let max_degree = params.max_degree.unwrap_or(2 * field.g());
            let series = pushforward_series(&field, &ms, &iterates, &params.quadrature).map_err(comp)?;
            let fit = fit_growth(&series, max_degree).map_err(comp)?;
            let det = det_integral(&field, &params.quadrature).map_err(comp)? * ms.degree() as f64;
            let leading_relative_error = (fit.degree == 2 * field.g() && det > 0.0).then(|| (fit.leading_coefficient - det).abs() / det);
            let summary = json!({
                "g": field.g(),
                "branches": ms.degree(),
                "series": to_value(&series),
                "fit": to_value(&fit),
                "det_integral": det,
                "leading_relative_error": leading_relative_error,
            });
            Ok(Outcome { summary, table: Some(series.csv_rows()), warnings: Vec::new() })
        }
        Payload::Conjugacy(inputs, params) => {
            let field = inputs.field.build("inputs.field")?;
            let q = QuasiRandom::new(2 * field.g(), seed);
            let fd = crate::torus::DEFAULT_FD_FRACTION;
            let points: Vec<Vec<f64>> = (0..params.samples).map(|i| field.family().domain().from_unit(&q.point(i), fd)).collect();
            let rep = conjugacy_check(&field, params.d, params.k, &points).map_err(|e| ExperimentError::validation("parameters", e.to_string()))?;
            Ok(Outcome::json(to_value(&rep)))
        }
        Payload::GroupOrbit(inputs, params) => {
            let f = inputs.field_f.build("inputs.field_f")?;
            let g = inputs.field_g.build("inputs.field_g")?;
            let mut p = params.clone();
            p.seed = seed;
            let rep = group_orbit_scan(&f, &g, &p).map_err(comp)?;
            Ok(Outcome::json(to_value(&rep)))
        }
        Payload::Projectivity(inputs, params) => {
            let gram = int_matrix(&inputs.gram).map_err(|e| ExperimentError::validation("inputs.gram", e))?;
            let lattice = GramLattice::new(gram).map_err(|e| ExperimentError::validation("inputs.gram", e.to_string()))?;
            let period = PeriodPoint::new(Arc::new(lattice), rats(&inputs.sigma_re), rats(&inputs.sigma_im), ints(&inputs.h))
                .map_err(|e| ExperimentError::validation("inputs.sigma_re", e.to_string()))?;
            let classes = inputs
                .classes
                .iter()
                .enumerate()
                .map(|(i, a)| {
                    let a = ints(a);
                    let r = projectivity_parameter(&period, &a).map_err(|e| ExperimentError::validation(format!("inputs.classes[{i}]"), e.to_string()))?;
                    let mut v = to_value(&r);
                    v["a"] = json!(strs(&a));
                    Ok(v)
                })
                .collect::<Result<Vec<_>, ExperimentError>>()?;
            let mut v = json!({ "classes": classes });
            if let Some(r) = &params.r {
                let hits = parameter_search(&period, &r.0, params.height).map_err(|e| ExperimentError::validation("parameters.height", e.to_string()))?;
                v["search"] = json!({ "r": r.0.to_string(), "height": params.height, "hits": to_value(&hits) });
            }
            Ok(Outcome::json(v))
        }
    }
}
