//! Fixed example fields used by tests, scenarios and the demo.

use std::sync::Arc;

use super::{BaseDomain, HolomorphicSection, PeriodFamily, TranslationField};
use crate::expr::Expression;

fn exprs(v: &[&str]) -> Vec<Expression> {
    v.iter().map(|s| Expression::parse(s).expect("example expression")).collect()
}

fn field(g: usize, domain: BaseDomain, tau: &[&str], w: &[&str]) -> TranslationField {
    let fam = Arc::new(PeriodFamily::new(g, domain, exprs(tau)).expect("example family"));
    TranslationField::holomorphic(HolomorphicSection::new(fam, exprs(w)).expect("example section"))
}

/// `Τ(u) = u`, `w ≡ c` over `[0,1] × [1/2, 3/2]` with `c = e^{1/3} - 1 + iπ/4`:
/// `t(u) = (Re c - Re u·b, b)` with `b = Im c/Im u`, a local diffeomorphism onto
/// its image. The transcendental constant keeps rational grid nodes from
/// landing on resonances.
pub fn upper_half_plane_field() -> TranslationField {
    field(1, BaseDomain::new(vec![0.0, 0.5], vec![1.0, 1.5]).unwrap(), &["u1"], &[UHP_CONSTANT])
}

pub const UHP_CONSTANT: &str = "exp(1/3) - 1 + i*pi/4";

/// `Τ ≡ i`, `w(u) = u` over the unit square: `t(u) = (Re u, Im u)`.
pub fn identity_jacobian_field() -> TranslationField {
    field(1, BaseDomain::cube(1, 0.0, 1.0).unwrap(), &["i"], &["u1"])
}

/// `g = 2`, `Τ ≡ i·I`, `w(u) = (u1, 0)` over the unit cube: generic rank 2.
pub fn rank_two_field() -> TranslationField {
    field(2, BaseDomain::cube(2, 0.0, 1.0).unwrap(), &["i", "0", "0", "i"], &["u1", "0"])
}

/// `w ≡ 0` over the unit square.
pub fn zero_field() -> TranslationField {
    field(1, BaseDomain::cube(1, 0.0, 1.0).unwrap(), &["i"], &["0"])
}
