//! Seeded random holomorphic-induced fields with polynomial data.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{BaseDomain, HolomorphicSection, PeriodFamily, TorusError, TranslationField};
use crate::expr::Expression;

const HALF_SIDE: f64 = 0.5;

fn exponents(g: usize, max_deg: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..g {
        out = out
            .into_iter()
            .flat_map(|e: Vec<u32>| {
                let used: u32 = e.iter().sum();
                (0..=max_deg - used).map(move |d| {
                    let mut e2 = e.clone();
                    e2.push(d);
                    e2
                })
            })
            .collect();
    }
    out
}

fn polynomial(rng: &mut ChaCha8Rng, g: usize, max_deg: u32, coef: f64, constant: &str) -> String {
    let mut terms = vec![constant.to_string()];
    for e in exponents(g, max_deg) {
        if e.iter().all(|&d| d == 0) {
            continue;
        }
        let re = rng.gen_range(-coef..coef);
        let im = rng.gen_range(-coef..coef);
        let mono: Vec<String> = e
            .iter()
            .enumerate()
            .filter(|(_, &d)| d > 0)
            .map(|(k, &d)| if d == 1 { format!("u{}", k + 1) } else { format!("u{}^{}", k + 1, d) })
            .collect();
        terms.push(format!("({re:.6}+{im:.6}*i)*{}", mono.join("*")));
    }
    terms.join(" + ")
}

/// A field on `[-1/2, 1/2]^{2g}` with `Τ = 2i·I + (polynomial of degree ≤ 3)`
/// and each `w_k` zero, constant, or a polynomial of degree ≤ 3. Coefficients
/// of `Τ` are small enough that `Im Τ` stays positive definite on the box.
pub fn random_holomorphic_field(g: usize, seed: u64) -> Result<TranslationField, TorusError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let varying_tau = rng.gen_bool(0.5);
    let tau_coef = 0.2 / (g as f64 * 10.0);
    let mut tau = vec![String::new(); g * g];
    for i in 0..g {
        for j in i..g {
            let diag = if i == j { "2*i" } else { "0" };
            let s = if varying_tau {
                polynomial(&mut rng, g, 3, tau_coef, diag)
            } else {
                let re = rng.gen_range(-0.3..0.3);
                format!("{re:.6} + {diag}")
            };
            tau[i * g + j] = s.clone();
            tau[j * g + i] = s;
        }
    }
    let mut w = Vec::with_capacity(g);
    for _ in 0..g {
        w.push(match rng.gen_range(0..4) {
            0 => "0".to_string(),
            1 => format!("({:.6}+{:.6}*i)", rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            _ => polynomial(&mut rng, g, 3, 1.0, "0"),
        });
    }
    let parse = |v: Vec<String>| -> Result<Vec<Expression>, TorusError> {
        v.iter().map(|s| Expression::parse(s).map_err(TorusError::from)).collect()
    };
    let domain = BaseDomain::cube(g, -HALF_SIDE, HALF_SIDE)?;
    let family = Arc::new(PeriodFamily::new(g, domain, parse(tau)?)?);
    Ok(TranslationField::holomorphic(HolomorphicSection::new(family, parse(w)?)?))
}
