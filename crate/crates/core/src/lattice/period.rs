//! Period points of a degenerate twistor family `[σ] + t·h` and the parameter
//! at which an integral class becomes of type (1,1).

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::{GramLattice, LatticeError};
use crate::exact::matrix::vec_gcd;

/// Exact complex rational `re + im·i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ComplexRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl ComplexRational {
    pub fn zero() -> Self {
        Self { re: BigRational::zero(), im: BigRational::zero() }
    }

    pub fn from_integers(re: i64, im: i64) -> Self {
        Self { re: BigRational::from_integer(re.into()), im: BigRational::from_integer(im.into()) }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn modulus_sq(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn modulus(&self) -> f64 {
        self.modulus_sq().to_f64().unwrap_or(f64::NAN).sqrt()
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        Self { re: &self.re * s, im: &self.im * s }
    }

    pub fn add(&self, o: &Self) -> Self {
        Self { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl fmt::Display for ComplexRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        let sign = if self.im.is_negative() { '-' } else { '+' };
        write!(f, "{}{}{}i", self.re, sign, self.im.abs())
    }
}

impl Serialize for ComplexRational {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A period `σ` (complex rational vector) together with an isotropic nef
/// class `h` orthogonal to it, on a lattice of signature `(3, m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodPoint {
    lattice: Arc<GramLattice>,
    sigma_re: Vec<BigRational>,
    sigma_im: Vec<BigRational>,
    h: Vec<BigInt>,
}

impl PeriodPoint {
    pub fn new(
        lattice: Arc<GramLattice>,
        sigma_re: Vec<BigRational>,
        sigma_im: Vec<BigRational>,
        h: Vec<BigInt>,
    ) -> Result<Self, LatticeError> {
        lattice.check_dim(sigma_re.len())?;
        lattice.check_dim(sigma_im.len())?;
        lattice.check_dim(h.len())?;
        let (p, n) = lattice.signature();
        if p != 3 {
            return Err(LatticeError::SignatureUnsupported { n_plus: p, n_minus: n });
        }
        let pt = Self { lattice, sigma_re, sigma_im, h };
        let bad = |what: &str| Err(LatticeError::InvalidPeriod(what.to_string()));
        let ss = pt.pair_sigma_sigma();
        if !ss.is_zero() {
            return bad("q(sigma, sigma) != 0");
        }
        let l = &pt.lattice;
        let s_sbar = l.pair_rat(&pt.sigma_re, &pt.sigma_re) + l.pair_rat(&pt.sigma_im, &pt.sigma_im);
        if !s_sbar.is_positive() {
            return bad("q(sigma, conj sigma) <= 0");
        }
        if !l.norm(&pt.h).is_zero() {
            return bad("q(h, h) != 0");
        }
        if !pt.pair_with_sigma(&pt.h).is_zero() {
            return bad("q(h, sigma) != 0");
        }
        if vec_gcd(&pt.h) != BigInt::from(1) {
            return bad("h is not primitive");
        }
        Ok(pt)
    }

    pub fn lattice(&self) -> &Arc<GramLattice> {
        &self.lattice
    }

    pub fn h(&self) -> &[BigInt] {
        &self.h
    }

    fn pair_sigma_sigma(&self) -> ComplexRational {
        let l = &self.lattice;
        let rr = l.pair_rat(&self.sigma_re, &self.sigma_re);
        let ii = l.pair_rat(&self.sigma_im, &self.sigma_im);
        let ri = l.pair_rat(&self.sigma_re, &self.sigma_im);
        ComplexRational { re: rr - ii, im: &ri + &ri }
    }

    /// `q(a, σ)` for an integral class `a`.
    pub fn pair_with_sigma(&self, a: &[BigInt]) -> ComplexRational {
        let a: Vec<BigRational> = a.iter().map(|x| BigRational::from_integer(x.clone())).collect();
        ComplexRational {
            re: self.lattice.pair_rat(&a, &self.sigma_re),
            im: self.lattice.pair_rat(&a, &self.sigma_im),
        }
    }

    /// `q(a, σ + t·h)`.
    pub fn pair_with_twisted(&self, a: &[BigInt], t: &ComplexRational) -> ComplexRational {
        let ah = BigRational::from_integer(self.lattice.pair(a, &self.h));
        self.pair_with_sigma(a).add(&t.scale(&ah))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProjectivityParameter {
    pub t: ComplexRational,
    /// `q(a, a) > 0`.
    pub is_projective: bool,
    #[serde(serialize_with = "crate::serde_util::display")]
    pub q_aa: BigInt,
    /// `|t|`, for comparison against `1/r`.
    pub modulus: f64,
    #[serde(serialize_with = "crate::serde_util::display")]
    pub modulus_sq: BigRational,
    /// `q(a, σ + t·h) = 0` holds exactly.
    pub type_11_verified: bool,
}

/// `t = -q(a,σ)/q(a,h)`, the parameter where `a` becomes of type (1,1).
pub fn projectivity_parameter(period: &PeriodPoint, a: &[BigInt]) -> Result<ProjectivityParameter, LatticeError> {
    period.lattice.check_dim(a.len())?;
    let ah = period.lattice.pair(a, &period.h);
    let a_sigma = period.pair_with_sigma(a);
    if ah.is_zero() {
        return Err(LatticeError::OrthogonalToH { always_type_11: a_sigma.is_zero(), q_a_sigma: a_sigma.to_string() });
    }
    let inv = -BigRational::new(BigInt::from(1), ah);
    let t = a_sigma.scale(&inv);
    let q_aa = period.lattice.norm(a);
    let type_11_verified = period.pair_with_twisted(a, &t).is_zero();
    Ok(ProjectivityParameter {
        is_projective: q_aa.is_positive(),
        modulus: t.modulus(),
        modulus_sq: t.modulus_sq(),
        t,
        q_aa,
        type_11_verified,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParameterHit {
    #[serde(serialize_with = "crate::serde_util::int_vec")]
    pub a: Vec<BigInt>,
    pub t: ComplexRational,
    pub modulus: f64,
    #[serde(serialize_with = "crate::serde_util::display")]
    pub q_aa: BigInt,
}

/// All integral classes `a` with `‖a‖∞ <= height_bound`, `q(a,a) > 0` and
/// `|t(a)| < 1/r`, sorted by `|t|` (ties by `a`).
pub fn parameter_search(
    period: &PeriodPoint,
    r: &BigRational,
    height_bound: u32,
) -> Result<Vec<ParameterHit>, LatticeError> {
    if height_bound == 0 {
        return Err(LatticeError::InvalidInput("height_bound must be at least 1".into()));
    }
    if !r.is_positive() {
        return Err(LatticeError::InvalidInput("r must be positive".into()));
    }
    let n = period.lattice.rank();
    let hb = height_bound as i64;
    let bound_sq = (r * r).recip();
    let mut hits: Vec<(BigRational, ParameterHit)> = Vec::new();
    let mut a = vec![-hb; n];
    loop {
        let v: Vec<BigInt> = a.iter().map(|&x| BigInt::from(x)).collect();
        if let Ok(p) = projectivity_parameter(period, &v) {
            if p.is_projective && p.modulus_sq < bound_sq {
                hits.push((p.modulus_sq.clone(), ParameterHit { a: v, t: p.t, modulus: p.modulus, q_aa: p.q_aa }));
            }
        }
        // odometer over [-hb, hb]^n
        let mut i = 0;
        while i < n {
            a[i] += 1;
            if a[i] <= hb {
                break;
            }
            a[i] = -hb;
            i += 1;
        }
        if i == n {
            break;
        }
    }
    hits.sort_by(|x, y| match x.0.cmp(&y.0) {
        Ordering::Equal => x.1.a.cmp(&y.1.a),
        o => o,
    });
    Ok(hits.into_iter().map(|(_, h)| h).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ints;

    fn rat(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| BigRational::from_integer(x.into())).collect()
    }

    fn example() -> PeriodPoint {
        let lat = Arc::new(GramLattice::diagonal(&[1, 1, 1, -1]).unwrap());
        PeriodPoint::new(lat, rat(&[1, 0, 0, 0]), rat(&[0, 1, 0, 0]), ints(&[0, 0, 1, 1])).unwrap()
    }

    #[test]
    fn worked_example_gives_minus_one_half() {
        let p = projectivity_parameter(&example(), &ints(&[1, 0, 2, 0])).unwrap();
        assert_eq!(p.t, ComplexRational { re: BigRational::new((-1).into(), 2.into()), im: BigRational::zero() });
        assert!(p.is_projective);
        assert_eq!(p.q_aa, BigInt::from(5));
        assert!(p.type_11_verified);
        assert_eq!(p.t.to_string(), "-1/2");
    }

    #[test]
    fn class_orthogonal_to_sigma_gives_zero() {
        let p = projectivity_parameter(&example(), &ints(&[0, 0, 1, 0])).unwrap();
        assert!(p.t.is_zero());
        assert_eq!(p.q_aa, BigInt::from(1));
    }

    #[test]
    fn class_orthogonal_to_h() {
        let err = projectivity_parameter(&example(), &ints(&[1, 0, 0, 0])).unwrap_err();
        assert_eq!(err, LatticeError::OrthogonalToH { always_type_11: false, q_a_sigma: "1".into() });
        let err = projectivity_parameter(&example(), &ints(&[0, 0, 1, 1])).unwrap_err();
        assert!(matches!(err, LatticeError::OrthogonalToH { always_type_11: true, .. }));
    }

    #[test]
    fn invalid_periods_are_rejected() {
        let lat = Arc::new(GramLattice::diagonal(&[1, 1, 1, -1]).unwrap());
        // q(σ,σ) = 2 ≠ 0
        let e = PeriodPoint::new(lat.clone(), rat(&[1, 0, 0, 0]), rat(&[0, 0, 0, 1]), ints(&[0, 0, 1, 1]));
        assert!(matches!(e, Err(LatticeError::InvalidPeriod(_))));
        // h not isotropic
        let e = PeriodPoint::new(lat, rat(&[1, 0, 0, 0]), rat(&[0, 1, 0, 0]), ints(&[0, 0, 1, 0]));
        assert!(matches!(e, Err(LatticeError::InvalidPeriod(_))));
    }

    #[test]
    fn search_finds_the_worked_example() {
        let one = BigRational::from_integer(1.into());
        let hits = parameter_search(&example(), &one, 3).unwrap();
        assert!(hits.iter().any(|h| h.a == ints(&[1, 0, 2, 0]) && h.t.to_string() == "-1/2"));
        assert!(hits.windows(2).all(|w| w[0].modulus <= w[1].modulus));
        let three = BigRational::from_integer(3.into());
        let hits = parameter_search(&example(), &three, 3).unwrap();
        assert!(hits.iter().any(|h| h.a == ints(&[0, 0, 1, 0]) && h.t.is_zero()));
        assert!(hits.iter().all(|h| h.modulus < 1.0 / 3.0));
        assert!(matches!(parameter_search(&example(), &one, 0), Err(LatticeError::InvalidInput(_))));
    }
}
