//! Browser bindings for three small experiments. Each export returns a JSON
//! string; the plain functions behind them are usable natively.

use paralab::exact::IntMatrix;
use paralab::experiments::{execute, Scenario};
use paralab::lattice::growth::log_abs;
use paralab::lattice::sym_power;
use paralab::orbit::{density_scan, DensityParams};
use paralab::torus::examples::upper_half_plane_field;
use serde_json::json;
use wasm_bindgen::prelude::*;

fn m_par() -> IntMatrix {
    IntMatrix::from_i64_rows(&[vec![1, 1, 2], vec![0, 1, 0], vec![0, 1, 1]])
}

/// Split `"2*sqrt3 - 1/2"` into `(rational part, [(constant, coefficient)])`.
fn parse_entry(s: &str) -> Result<(String, Vec<(String, String)>), String> {
    let mut rational = Vec::new();
    let mut terms = Vec::new();
    let cleaned = s.replace(' ', "");
    if cleaned.is_empty() {
        return Err("empty entry".into());
    }
    let mut rest = cleaned.as_str();
    while !rest.is_empty() {
        let (sign, body) = match rest.as_bytes()[0] {
            b'-' => ("-", &rest[1..]),
            b'+' => ("", &rest[1..]),
            _ => ("", rest),
        };
        let end = body.find(['+', '-']).unwrap_or(body.len());
        let term = &body[..end];
        rest = &body[end..];
        let (coef, name) = match term.split_once('*') {
            Some((c, n)) => (c.to_string(), Some(n.to_string())),
            None if term.starts_with(|c: char| c.is_ascii_alphabetic()) => ("1".to_string(), Some(term.to_string())),
            None => (term.to_string(), None),
        };
        if coef.is_empty() || !coef.chars().all(|c| c.is_ascii_digit() || c == '/') {
            return Err(format!("cannot read coefficient `{coef}`"));
        }
        let coef = format!("{sign}{coef}");
        match name {
            Some(n) => terms.push((n, coef)),
            None => rational.push(coef),
        }
    }
    if rational.len() > 1 {
        return Err("give at most one rational term per entry".into());
    }
    Ok((rational.pop().unwrap_or_else(|| "0".into()), terms))
}

/// Exact orbit closure and sampling oracle for comma-separated entries such
/// as `"sqrt2, 1/2"`.
pub fn orbit_json(entries: &str) -> Result<String, String> {
    let parsed = entries.split(',').map(parse_entry).collect::<Result<Vec<_>, _>>()?;
    let mut names: Vec<String> = Vec::new();
    for (_, terms) in &parsed {
        for (n, _) in terms {
            if !names.contains(n) {
                names.push(n.clone());
            }
        }
    }
    let mut rows = vec![parsed.iter().map(|(r, _)| r.clone()).collect::<Vec<_>>()];
    for n in &names {
        rows.push(
            parsed
                .iter()
                .map(|(_, terms)| terms.iter().find(|(m, _)| m == n).map_or("0".to_string(), |(_, c)| c.clone()))
                .collect(),
        );
    }
    let constants: Vec<String> = names.iter().map(|n| format!("{{ name = {n:?} }}")).collect();
    let coeffs: Vec<String> = rows.iter().map(|r| format!("{r:?}")).collect();
    let text = format!(
        "name = \"demo\"\nkind = \"orbit\"\n[inputs]\nconstants = [{}]\ncoeffs = [{}]\n[parameters]\noracle_points = 20000\ncluster_tol = 0.01\n",
        constants.join(", "),
        coeffs.join(", ")
    );
    let scenario = Scenario::parse(&text, true).map_err(|e| e.to_string())?;
    let out = execute(&scenario).map_err(|e| e.to_string())?;
    Ok(out.summary.to_string())
}

/// Strata of the upper-half-plane example on a `grid × grid` scan.
pub fn density_json(grid: usize, q: u32) -> Result<String, String> {
    if !(2..=120).contains(&grid) {
        return Err("grid must be between 2 and 120".into());
    }
    let params = DensityParams { grid: vec![grid], q, seeds_per_axis: 8, c_max: 2, rank_samples: 16, ..Default::default() };
    let rep = density_scan(&upper_half_plane_field(), &params).map_err(|e| e.to_string())?;
    let domain = json!({ "lo": [0.0, 0.5], "hi": [1.0, 1.5] });
    let points: Vec<_> = rep.points.iter().map(|p| json!([p.b[0], p.b[1], p.r, p.c])).collect();
    let refined: Vec<_> = rep.refined.iter().map(|p| json!([p.b[0], p.b[1], p.r, p.c])).collect();
    let radii: Vec<_> = rep.coverage.iter().map(|c| c.covering_radius).collect();
    Ok(json!({ "domain": domain, "points": points, "refined": refined, "covering_radius": radii }).to_string())
}

/// `log ‖Sym^p(M)^n‖` for the parabolic example, `p = 1..=p_max`, `n = 1..=n_max`.
pub fn growth_json(p_max: usize, n_max: u64) -> Result<String, String> {
    if !(1..=4).contains(&p_max) || !(2..=512).contains(&n_max) {
        return Err("need 1 <= p <= 4 and 2 <= n <= 512".into());
    }
    let curves: Vec<_> = (1..=p_max)
        .map(|p| {
            let s = sym_power(&m_par(), p);
            let mut acc = IntMatrix::identity(s.rows());
            let logs: Vec<f64> = (1..=n_max)
                .map(|_| {
                    acc = acc.mul(&s);
                    log_abs(&acc.max_abs())
                })
                .collect();
            let (a, b) = (n_max / 2, n_max);
            let slope = (logs[b as usize - 1] - logs[a as usize - 1]) / ((b as f64).ln() - (a as f64).ln());
            json!({ "p": p, "log_norm": logs, "tail_exponent": slope })
        })
        .collect();
    Ok(json!({ "curves": curves }).to_string())
}

#[wasm_bindgen]
pub fn orbit_closure(entries: &str) -> Result<String, JsError> {
    orbit_json(entries).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn density_scan_demo(grid: usize, q: u32) -> Result<String, JsError> {
    density_json(grid, q).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn growth_curves(p_max: usize, n_max: u32) -> Result<String, JsError> {
    growth_json(p_max, n_max as u64).map_err(|e| JsError::new(&e))
}
