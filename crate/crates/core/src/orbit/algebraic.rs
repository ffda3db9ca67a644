//! Vectors whose entries are rational combinations of named real constants.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::OrbitError;
use crate::exact::lll::{lll_reduce, shortest_row};

/// Minimum number of significant digits in a constant's expansion.
pub const MIN_DIGITS: usize = 30;

/// Coefficient bound of the heuristic integer-relation check.
pub const RELATION_CHECK_BOUND: u64 = 1_000_000;

const LIBRARY: &[(&str, &str)] = &[
    ("sqrt2", "1.41421356237309504880168872420969807857"),
    ("sqrt3", "1.732050807568877293527446341505872366943"),
    ("sqrt5", "2.236067977499789696409173668731276235441"),
    ("sqrt7", "2.64575131106459059050161575363926042571"),
    ("cbrt2", "1.25992104989487316476721060727822835057"),
    ("phi", "1.61803398874989484820458683436563811772"),
    ("pi", "3.141592653589793238462643383279502884197"),
    ("e", "2.718281828459045235360287471352662497757"),
    ("ln2", "0.6931471805599453094172321214581765680755"),
];

/// A real constant with a decimal expansion of at least [`MIN_DIGITS`] digits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NamedConstant {
    pub name: String,
    pub decimal: String,
    #[serde(skip)]
    exact: BigRational,
    #[serde(skip)]
    digits: usize,
}

impl NamedConstant {
    pub fn new(name: &str, decimal: &str) -> Result<Self, OrbitError> {
        let bad = |reason: &str| OrbitError::InvalidConstant { name: name.to_string(), reason: reason.to_string() };
        let s = decimal.trim();
        let (neg, body) = match s.strip_prefix('-') {
            Some(r) => (true, r),
            None => (false, s),
        };
        let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
        if int_part.is_empty() && frac_part.is_empty()
            || !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit())
        {
            return Err(bad("not a plain decimal expansion"));
        }
        let all = format!("{int_part}{frac_part}");
        let digits = all.trim_start_matches('0').len();
        if digits < MIN_DIGITS {
            return Err(bad(&format!("needs at least {MIN_DIGITS} significant digits, has {digits}")));
        }
        let mut num: BigInt = all.parse().map_err(|_| bad("unparseable digits"))?;
        if neg {
            num = -num;
        }
        let den = BigInt::from(10).pow(frac_part.len() as u32);
        Ok(Self { name: name.to_string(), decimal: s.to_string(), exact: BigRational::new(num, den), digits })
    }

    /// Look up a built-in constant (`sqrt2`, `sqrt3`, `sqrt5`, `sqrt7`,
    /// `cbrt2`, `phi`, `pi`, `e`, `ln2`).
    pub fn builtin(name: &str) -> Option<Self> {
        LIBRARY.iter().find(|(n, _)| *n == name).map(|(n, d)| Self::new(n, d).expect("library constant"))
    }

    pub fn builtin_names() -> Vec<&'static str> {
        LIBRARY.iter().map(|(n, _)| *n).collect()
    }

    /// The decimal expansion as an exact rational.
    pub fn value(&self) -> &BigRational {
        &self.exact
    }

    pub fn digits(&self) -> usize {
        self.digits
    }

    /// Absolute accuracy of the expansion, `10^-(fraction digits)`.
    pub fn precision(&self) -> BigRational {
        BigRational::new(BigInt::one(), self.exact.denom().clone())
    }
}

/// `entry_j = c[0][j] + Σ_i c[i][j]·α_i`, with the `α_i` declared
/// ℚ-linearly independent together with 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlgebraicVector {
    constants: Vec<NamedConstant>,
    #[serde(serialize_with = "rat_rows")]
    coeffs: Vec<Vec<BigRational>>,
}

fn rat_rows<S: serde::Serializer>(rows: &[Vec<BigRational>], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(rows.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()))
}

impl AlgebraicVector {
    pub fn new(constants: Vec<NamedConstant>, coeffs: Vec<Vec<BigRational>>) -> Result<Self, OrbitError> {
        if coeffs.len() != constants.len() + 1 {
            return Err(OrbitError::DimensionMismatch { expected: constants.len() + 1, found: coeffs.len() });
        }
        let dim = coeffs[0].len();
        if dim == 0 {
            return Err(OrbitError::InvalidInput("vector must have at least one entry".into()));
        }
        if let Some(r) = coeffs.iter().find(|r| r.len() != dim) {
            return Err(OrbitError::DimensionMismatch { expected: dim, found: r.len() });
        }
        Ok(Self { constants, coeffs })
    }

    pub fn rational(entries: Vec<BigRational>) -> Result<Self, OrbitError> {
        Self::new(Vec::new(), vec![entries])
    }

    pub fn dim(&self) -> usize {
        self.coeffs[0].len()
    }

    pub fn constants(&self) -> &[NamedConstant] {
        &self.constants
    }

    pub fn coeffs(&self) -> &[Vec<BigRational>] {
        &self.coeffs
    }

    pub fn rational_part(&self) -> &[BigRational] {
        &self.coeffs[0]
    }

    /// Irrational coefficient rows, one per constant.
    pub fn irrational_rows(&self) -> &[Vec<BigRational>] {
        &self.coeffs[1..]
    }

    /// Entries evaluated from the decimal expansions, rounded once to `f64`.
    pub fn float_values(&self) -> Vec<f64> {
        (0..self.dim())
            .map(|j| {
                let mut v = self.coeffs[0][j].clone();
                for (i, c) in self.constants.iter().enumerate() {
                    v += &self.coeffs[i + 1][j] * c.value();
                }
                v.to_f64().unwrap_or(f64::NAN)
            })
            .collect()
    }

    /// Entries reduced to `[0, 1)`.
    pub fn float_values_mod1(&self) -> Vec<f64> {
        self.float_values().into_iter().map(crate::torus::chart::reduce_mod1).collect()
    }

    /// Heuristic check of the declared independence: searches for an
    /// integer relation `c0 + Σ c_i α_i = 0` with `|c| <= 10^6` using the
    /// decimal expansions. Returns the relation if one is found.
    pub fn independence_warning(&self) -> Option<Vec<BigInt>> {
        likely_relation(&self.constants)
    }
}

/// See [`AlgebraicVector::independence_warning`].
pub fn likely_relation(constants: &[NamedConstant]) -> Option<Vec<BigInt>> {
    if constants.is_empty() {
        return None;
    }
    let k = constants.len() + 1;
    let digits = constants.iter().map(|c| c.precision().denom().to_string().len() - 1).min().unwrap_or(0);
    // scale so that rounding error stays far below any genuine residual
    let scale = BigInt::from(10).pow(digits as u32);
    let mut values = vec![BigRational::one()];
    values.extend(constants.iter().map(|c| c.value().clone()));
    let basis: Vec<Vec<BigInt>> = values
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let mut row = vec![BigInt::zero(); k + 1];
            row[i] = BigInt::one();
            row[k] = (v * BigRational::from_integer(scale.clone())).round().to_integer();
            row
        })
        .collect();
    let reduced = lll_reduce(basis);
    let s = shortest_row(&reduced)?;
    let coeffs = s[..k].to_vec();
    if coeffs.iter().any(|c| c.abs() > BigInt::from(RELATION_CHECK_BOUND)) {
        return None;
    }
    let residual: BigRational = coeffs.iter().zip(&values).map(|(c, v)| BigRational::from_integer(c.clone()) * v).sum();
    // genuine relations vanish up to the expansion accuracy
    let sum_c: BigInt = coeffs.iter().map(|c| c.abs()).sum();
    let limit = BigRational::new(sum_c * BigInt::from(10), BigInt::from(10).pow(digits as u32));
    (residual.abs() <= limit).then_some(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn square_roots_square_back() {
        for (name, n) in [("sqrt2", 2), ("sqrt3", 3), ("sqrt5", 5), ("sqrt7", 7)] {
            let c = NamedConstant::builtin(name).unwrap();
            let err = (c.value() * c.value() - r(n, 1)).abs();
            assert!(err < r(1, 10).pow(37), "{name}");
        }
        let c = NamedConstant::builtin("cbrt2").unwrap();
        assert!((c.value().pow(3) - r(2, 1)).abs() < r(1, 10).pow(37));
        let phi = NamedConstant::builtin("phi").unwrap();
        assert!((phi.value() * phi.value() - phi.value() - r(1, 1)).abs() < r(1, 10).pow(37));
    }

    #[test]
    fn transcendental_constants_match_series() {
        // e = Σ 1/k!
        let mut e = BigRational::zero();
        let mut term = BigRational::one();
        for k in 1..60 {
            e += &term;
            term /= BigRational::from_integer(k.into());
        }
        let c = NamedConstant::builtin("e").unwrap();
        assert!((c.value() - &e).abs() < r(1, 10).pow(38));
        // Machin: pi = 16 atan(1/5) - 4 atan(1/239)
        let atan_inv = |x: i64| {
            let mut s = BigRational::zero();
            let x2 = r(1, x * x);
            let mut p = r(1, x);
            for k in 0..60 {
                let t = &p / BigRational::from_integer((2 * k + 1).into());
                s = if k % 2 == 0 { s + t } else { s - t };
                p *= &x2;
            }
            s
        };
        let pi = atan_inv(5) * r(16, 1) - atan_inv(239) * r(4, 1);
        let c = NamedConstant::builtin("pi").unwrap();
        assert!((c.value() - &pi).abs() < r(1, 10).pow(38));
        // ln 2 = Σ 1/(k 2^k)
        let mut l = BigRational::zero();
        for k in 1..140i64 {
            l += BigRational::new(1.into(), BigInt::from(k) * BigInt::from(2).pow(k as u32));
        }
        let c = NamedConstant::builtin("ln2").unwrap();
        assert!((c.value() - &l).abs() < r(1, 10).pow(39));
    }

    #[test]
    fn short_expansions_are_rejected() {
        assert!(NamedConstant::new("a", "1.4142").is_err());
        assert!(NamedConstant::new("a", "1.41x").is_err());
        assert!(NamedConstant::new("a", "-0.0000123456789012345678901234567890").is_ok());
    }

    #[test]
    fn float_values_combine_constants() {
        let s2 = NamedConstant::builtin("sqrt2").unwrap();
        let t = AlgebraicVector::new(vec![s2], vec![vec![r(1, 2), r(1, 3)], vec![r(1, 1), r(0, 1)]]).unwrap();
        let v = t.float_values();
        assert_eq!(v[0], 0.5 + std::f64::consts::SQRT_2);
        assert_eq!(v[1], 1.0 / 3.0);
        assert!(AlgebraicVector::new(vec![], vec![vec![r(1, 2)], vec![r(1, 2)]]).is_err());
    }

    #[test]
    fn relation_check_flags_dependent_constants() {
        let names = |v: &[&str]| v.iter().map(|n| NamedConstant::builtin(n).unwrap()).collect::<Vec<_>>();
        assert!(likely_relation(&names(&["sqrt2", "sqrt3"])).is_none());
        assert!(likely_relation(&names(&["pi", "e"])).is_none());
        let rel = likely_relation(&names(&["phi", "sqrt5"])).unwrap();
        // 1 - 2 phi + sqrt5 = 0 up to sign
        let v: Vec<i64> = rel.iter().map(|x| i64::try_from(x.clone()).unwrap()).collect();
        assert!(v == vec![1, -2, 1] || v == vec![-1, 2, -1], "{v:?}");
    }
}
