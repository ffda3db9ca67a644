//! Scenario files: a small TOML envelope plus a kind-specific payload.
//!
//! Parsing runs in two phases. The envelope is read first so the kind is
//! known; the `inputs` and `parameters` tables are then deserialized into the
//! kind's types with field paths attached to every error. Unknown keys are
//! collected and become errors in strict mode, warnings otherwise.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Deserializer, Serialize};

use super::ExperimentError;
use crate::exact::IntMatrix;
use crate::expr::Expression;
use crate::orbit::{AlgebraicVector, DensityParams, GroupParams, NamedConstant};
use crate::torus::{examples, random_holomorphic_field, BaseDomain, HolomorphicSection, PeriodFamily, TranslationField};
use crate::volume::QuadratureSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Classify,
    Growth,
    BettiRank,
    Orbit,
    Density,
    Volume,
    Conjugacy,
    GroupOrbit,
    Projectivity,
}

impl Kind {
    pub const ALL: [Kind; 9] = [
        Kind::Classify,
        Kind::Growth,
        Kind::BettiRank,
        Kind::Orbit,
        Kind::Density,
        Kind::Volume,
        Kind::Conjugacy,
        Kind::GroupOrbit,
        Kind::Projectivity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Kind::Classify => "classify",
            Kind::Growth => "growth",
            Kind::BettiRank => "betti-rank",
            Kind::Orbit => "orbit",
            Kind::Density => "density",
            Kind::Volume => "volume",
            Kind::Conjugacy => "conjugacy",
            Kind::GroupOrbit => "group-orbit",
            Kind::Projectivity => "projectivity",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Kind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Kind::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| format!("unknown kind `{s}`"))
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Envelope {
    name: String,
    kind: Kind,
    #[serde(default)]
    seed: Option<u64>,
    #[serde(default)]
    description: Option<String>,
    #[serde(default = "empty_table")]
    inputs: toml::Value,
    #[serde(default = "empty_table")]
    parameters: toml::Value,
}

fn empty_table() -> toml::Value {
    toml::Value::Table(Default::default())
}

/// Integer given as a TOML integer or a decimal string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Int(pub BigInt);

impl<'de> Deserialize<'de> for Int {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            I(i64),
            S(String),
        }
        match Raw::deserialize(d)? {
            Raw::I(i) => Ok(Int(BigInt::from(i))),
            Raw::S(s) => s.trim().parse().map(Int).map_err(|_| serde::de::Error::custom(format!("`{s}` is not an integer"))),
        }
    }
}

/// Rational given as an integer or a `"p/q"` string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rational(pub BigRational);

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            I(i64),
            S(String),
        }
        let bad = |s: &str| serde::de::Error::custom(format!("`{s}` is not a rational `p/q`"));
        match Raw::deserialize(d)? {
            Raw::I(i) => Ok(Rational(BigRational::from_integer(BigInt::from(i)))),
            Raw::S(s) => {
                let (p, q) = s.split_once('/').unwrap_or((&s, "1"));
                let p: BigInt = p.trim().parse().map_err(|_| bad(&s))?;
                let q: BigInt = q.trim().parse().map_err(|_| bad(&s))?;
                if q == BigInt::from(0) {
                    return Err(bad(&s));
                }
                Ok(Rational(BigRational::new(p, q)))
            }
        }
    }
}

pub(crate) fn int_matrix(rows: &[Vec<Int>]) -> Result<IntMatrix, String> {
    let n = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != n) {
        return Err("rows have different lengths".into());
    }
    let mut m = IntMatrix::zeros(rows.len(), n);
    for (i, r) in rows.iter().enumerate() {
        for (j, x) in r.iter().enumerate() {
            m[(i, j)] = x.0.clone();
        }
    }
    Ok(m)
}

pub(crate) fn ints(v: &[Int]) -> Vec<BigInt> {
    v.iter().map(|x| x.0.clone()).collect()
}

pub(crate) fn rats(v: &[Rational]) -> Vec<BigRational> {
    v.iter().map(|x| x.0.clone()).collect()
}

/// Lattice isometry payload.
#[derive(Clone, Debug, Deserialize)]
pub struct IsometryInput {
    pub gram: Vec<Vec<Int>>,
    pub matrix: Vec<Vec<Int>>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct DomainInput {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

/// A translation field: a built-in example, or a period family with either a
/// holomorphic section `w` or a free real-analytic map `t`.
#[derive(Clone, Debug, Default, Deserialize)]
pub struct FieldInput {
    pub example: Option<String>,
    pub g: Option<usize>,
    pub domain: Option<DomainInput>,
    pub tau: Option<Vec<String>>,
    pub w: Option<Vec<String>>,
    pub t: Option<Vec<String>>,
}

pub const EXAMPLE_FIELDS: [&str; 4] = ["upper-half-plane", "identity-jacobian", "rank-two", "zero"];

fn parse_exprs(v: &[String], path: &str) -> Result<Vec<Expression>, ExperimentError> {
    v.iter()
        .enumerate()
        .map(|(i, s)| Expression::parse(s).map_err(|e| ExperimentError::validation(format!("{path}[{i}]"), e.to_string())))
        .collect()
}

impl FieldInput {
    pub fn build(&self, path: &str) -> Result<TranslationField, ExperimentError> {
        let err = |field: &str, msg: String| ExperimentError::validation(format!("{path}.{field}"), msg);
        if let Some(name) = &self.example {
            if self.g.is_some() || self.domain.is_some() || self.tau.is_some() || self.w.is_some() || self.t.is_some() {
                return Err(err("example", "an example field cannot be combined with explicit data".into()));
            }
            return Ok(match name.as_str() {
                "upper-half-plane" => examples::upper_half_plane_field(),
                "identity-jacobian" => examples::identity_jacobian_field(),
                "rank-two" => examples::rank_two_field(),
                "zero" => examples::zero_field(),
                other => return Err(err("example", format!("unknown example `{other}`; known: {}", EXAMPLE_FIELDS.join(", ")))),
            });
        }
        let g = self.g.ok_or_else(|| err("g", "missing".into()))?;
        let dom = self.domain.as_ref().ok_or_else(|| err("domain", "missing".into()))?;
        let domain = BaseDomain::new(dom.lo.clone(), dom.hi.clone()).map_err(|e| err("domain", e.to_string()))?;
        let tau = parse_exprs(self.tau.as_ref().ok_or_else(|| err("tau", "missing".into()))?, &format!("{path}.tau"))?;
        let family = Arc::new(PeriodFamily::new(g, domain, tau).map_err(|e| err("tau", e.to_string()))?);
        match (&self.w, &self.t) {
            (Some(w), None) => {
                let w = parse_exprs(w, &format!("{path}.w"))?;
                let s = HolomorphicSection::new(family, w).map_err(|e| err("w", e.to_string()))?;
                Ok(TranslationField::holomorphic(s))
            }
            (None, Some(t)) => {
                let t = parse_exprs(t, &format!("{path}.t"))?;
                TranslationField::free_analytic(family, t).map_err(|e| err("t", e.to_string()))
            }
            _ => Err(err("w", "exactly one of `w` and `t` must be given".into())),
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
pub struct ConstantInput {
    pub name: String,
    /// Decimal expansion; omitted for built-in constants.
    pub decimal: Option<String>,
}

/// Vector `t = c_0 + Σ c_i α_i` with rational coefficient rows.
#[derive(Clone, Debug, Deserialize)]
pub struct OrbitInput {
    #[serde(default)]
    pub constants: Vec<ConstantInput>,
    /// Row 0 is the rational part; row `i` multiplies constant `i`.
    pub coeffs: Vec<Vec<Rational>>,
    /// Declares the constants and 1 linearly independent over ℚ.
    #[serde(default)]
    pub independent: bool,
}

impl OrbitInput {
    pub fn build(&self) -> Result<AlgebraicVector, ExperimentError> {
        let constants = self
            .constants
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let path = format!("inputs.constants[{i}]");
                match &c.decimal {
                    Some(d) => NamedConstant::new(&c.name, d).map_err(|e| ExperimentError::validation(format!("{path}.decimal"), e.to_string())),
                    None => NamedConstant::builtin(&c.name).ok_or_else(|| {
                        ExperimentError::validation(
                            format!("{path}.name"),
                            format!("`{}` is not built in ({}); give a decimal expansion", c.name, NamedConstant::builtin_names().join(", ")),
                        )
                    }),
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        let coeffs = self.coeffs.iter().map(|r| rats(r)).collect();
        AlgebraicVector::new(constants, coeffs).map_err(|e| ExperimentError::validation("inputs.coeffs", e.to_string()))
    }
}

#[derive(Clone, Debug, Deserialize)]
pub struct RandomFields {
    pub count: usize,
    pub g: Vec<usize>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct BettiInputs {
    pub field: Option<FieldInput>,
    pub random: Option<RandomFields>,
}

impl BettiInputs {
    /// Fields with their labels, seeded from `seed` for random families.
    pub fn fields(&self, seed: u64) -> Result<Vec<(String, TranslationField)>, ExperimentError> {
        match (&self.field, &self.random) {
            (Some(f), None) => Ok(vec![("field".into(), f.build("inputs.field")?)]),
            (None, Some(r)) => {
                if r.g.is_empty() || r.g.iter().any(|&g| g == 0 || g > 3) {
                    return Err(ExperimentError::validation("inputs.random.g", "values must be in 1..=3"));
                }
                (0..r.count)
                    .map(|i| {
                        let g = r.g[i % r.g.len()];
                        let s = seed.wrapping_add(i as u64);
                        random_holomorphic_field(g, s)
                            .map(|f| (format!("random g={g} seed={s}"), f))
                            .map_err(|e| ExperimentError::computation(e.to_string()))
                    })
                    .collect()
            }
            _ => Err(ExperimentError::validation("inputs", "exactly one of `field` and `random` must be given")),
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(default)]
pub struct BettiParams {
    pub samples: usize,
    pub rank_tol: f64,
}

impl Default for BettiParams {
    fn default() -> Self {
        Self { samples: 64, rank_tol: crate::torus::DEFAULT_RANK_TOL }
    }
}

#[derive(Clone, Copy, Debug, Default, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum GrowthModeInput {
    #[default]
    Auto,
    Polynomial,
    Exponential,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(default)]
pub struct GrowthParams {
    pub mode: GrowthModeInput,
    pub schedule: Option<Vec<u64>>,
    /// Largest symmetric power for the spectrum and concavity check (0 skips it).
    pub p_max: usize,
    pub concavity_tol: f64,
    pub max_bits: u64,
    pub float_fallback: bool,
}

impl Default for GrowthParams {
    fn default() -> Self {
        Self {
            mode: GrowthModeInput::Auto,
            schedule: None,
            p_max: 0,
            concavity_tol: crate::lattice::growth::DEFAULT_CONCAVITY_TOL,
            max_bits: 1 << 16,
            float_fallback: true,
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(default)]
pub struct OrbitParams {
    pub oracle_points: usize,
    pub cluster_tol: f64,
    /// When set, also run floating resonance detection with this bound.
    pub q: Option<u32>,
    pub tol: f64,
}

impl Default for OrbitParams {
    fn default() -> Self {
        Self { oracle_points: 100_000, cluster_tol: 0.005, q: None, tol: 1e-9 }
    }
}

#[derive(Clone, Debug, Deserialize)]
pub struct FieldOnly {
    pub field: FieldInput,
}

#[derive(Clone, Debug, Deserialize)]
pub struct VolumeInputs {
    pub field: FieldInput,
    /// Branches of the multisection as expressions in `u`/`x`; default the zero section.
    pub branches: Option<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(default)]
pub struct VolumeParams {
    pub iterates: Option<Vec<i64>>,
    pub n_max: i64,
    pub max_degree: Option<usize>,
    pub quadrature: QuadratureSpec,
}

impl Default for VolumeParams {
    fn default() -> Self {
        Self { iterates: None, n_max: 64, max_degree: None, quadrature: QuadratureSpec::default() }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(default)]
pub struct ConjugacyParams {
    pub d: u32,
    pub k: u32,
    pub samples: u64,
}

impl Default for ConjugacyParams {
    fn default() -> Self {
        Self { d: 2, k: 6, samples: 100 }
    }
}

#[derive(Clone, Debug, Deserialize)]
pub struct GroupInputs {
    pub field_f: FieldInput,
    pub field_g: FieldInput,
}

#[derive(Clone, Debug, Deserialize)]
pub struct ProjectivityInputs {
    pub gram: Vec<Vec<Int>>,
    pub sigma_re: Vec<Rational>,
    pub sigma_im: Vec<Rational>,
    pub h: Vec<Int>,
    /// Classes whose parameter is reported individually.
    #[serde(default)]
    pub classes: Vec<Vec<Int>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(default)]
pub struct ProjectivityParams {
    pub r: Option<Rational>,
    pub height: u32,
}

impl Default for ProjectivityParams {
    fn default() -> Self {
        Self { r: None, height: 2 }
    }
}

/// Validated payload of a scenario.
#[derive(Clone, Debug)]
pub enum Payload {
    Classify(IsometryInput),
    Growth(IsometryInput, GrowthParams),
    BettiRank(BettiInputs, BettiParams),
    Orbit(OrbitInput, OrbitParams),
    Density(FieldOnly, DensityParams),
    Volume(VolumeInputs, VolumeParams),
    Conjugacy(FieldOnly, ConjugacyParams),
    GroupOrbit(GroupInputs, GroupParams),
    Projectivity(ProjectivityInputs, ProjectivityParams),
}

#[derive(Clone, Debug)]
pub struct Scenario {
    pub name: String,
    pub kind: Kind,
    pub description: Option<String>,
    pub seed: u64,
    pub payload: Payload,
    /// Unknown keys tolerated outside strict mode.
    pub warnings: Vec<String>,
}

fn section<T: DeserializeOwned>(value: toml::Value, prefix: &str, unknown: &mut Vec<String>) -> Result<T, ExperimentError> {
    let mut seen = Vec::new();
    let mut record = |path: serde_ignored::Path| seen.push(format!("{prefix}.{path}"));
    let de = serde_ignored::Deserializer::new(value, &mut record);
    let out = serde_path_to_error::deserialize(de).map_err(|e| {
        let p = e.path().to_string();
        let path = if p == "." { prefix.to_string() } else { format!("{prefix}.{p}") };
        ExperimentError::validation(path, e.into_inner().to_string())
    })?;
    drop(record);
    unknown.extend(seen);
    Ok(out)
}

impl Scenario {
    pub fn parse(text: &str, strict: bool) -> Result<Self, ExperimentError> {
        let value: toml::Value = toml::from_str(text).map_err(|e| ExperimentError::validation("<file>", e.message().to_string()))?;
        let env: Envelope = serde_path_to_error::deserialize(value).map_err(|e| {
            let p = e.path().to_string();
            ExperimentError::validation(if p == "." { "<root>".into() } else { p }, e.into_inner().to_string())
        })?;
        let mut unknown = Vec::new();
        let (i, p) = (env.inputs, env.parameters);
        let u = &mut unknown;
        let payload = match env.kind {
            Kind::Classify => {
                let inputs = section(i, "inputs", u)?;
                let _: toml::Table = section(p, "parameters", u)?;
                Payload::Classify(inputs)
            }
            Kind::Growth => Payload::Growth(section(i, "inputs", u)?, section(p, "parameters", u)?),
            Kind::BettiRank => Payload::BettiRank(section(i, "inputs", u)?, section(p, "parameters", u)?),
            Kind::Orbit => Payload::Orbit(section(i, "inputs", u)?, section(p, "parameters", u)?),
            Kind::Density => Payload::Density(section(i, "inputs", u)?, section(p, "parameters", u)?),
            Kind::Volume => Payload::Volume(section(i, "inputs", u)?, section(p, "parameters", u)?),
            Kind::Conjugacy => Payload::Conjugacy(section(i, "inputs", u)?, section(p, "parameters", u)?),
            Kind::GroupOrbit => Payload::GroupOrbit(section(i, "inputs", u)?, section(p, "parameters", u)?),
            Kind::Projectivity => Payload::Projectivity(section(i, "inputs", u)?, section(p, "parameters", u)?),
        };
        if strict {
            if let Some(first) = unknown.first() {
                return Err(ExperimentError::validation(first.clone(), "unknown field"));
            }
        }
        let warnings = unknown.into_iter().map(|p| format!("unknown field `{p}` ignored")).collect();
        Ok(Self {
            name: env.name,
            kind: env.kind,
            description: env.description,
            seed: env.seed.unwrap_or(0),
            payload,
            warnings,
        })
    }
}

pub(crate) fn parse_branches(v: &[Vec<String>]) -> Result<Vec<Vec<Expression>>, ExperimentError> {
    v.iter().enumerate().map(|(i, b)| parse_exprs(b, &format!("inputs.branches[{i}]"))).collect()
}
