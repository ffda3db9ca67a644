//! Integer and rational univariate polynomials: characteristic polynomials,
//! cyclotomic factors, Sturm sequences and root bisection.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::matrix::IntMatrix;

/// Integer polynomial, coefficients stored from the constant term upwards.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPoly(Vec<BigInt>);

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(BigInt::zero());
        }
        Self(coeffs)
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    /// `x - 1`
    pub fn x_minus_one() -> Self {
        Self::from_i64(&[-1, 1])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len() - 1
    }

    pub fn is_one(&self) -> bool {
        self.0.len() == 1 && self.0[0].is_one()
    }

    pub fn leading(&self) -> &BigInt {
        self.0.last().expect("nonempty")
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![BigInt::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// Division by a monic divisor; returns `(quotient, remainder)`.
    pub fn div_rem_monic(&self, d: &Self) -> (Self, Self) {
        assert!(d.leading().is_one(), "divisor must be monic");
        let dd = d.degree();
        let mut rem = self.0.clone();
        if rem.len() <= dd {
            return (Self::new(vec![BigInt::zero()]), self.clone());
        }
        let mut q = vec![BigInt::zero(); rem.len() - dd];
        for k in (0..q.len()).rev() {
            let c = rem[k + dd].clone();
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.0.iter().enumerate() {
                rem[k + j] -= &c * dc;
            }
            q[k] = c;
        }
        rem.truncate(dd.max(1));
        (Self::new(q), Self::new(rem))
    }

    pub fn is_zero(&self) -> bool {
        self.0.len() == 1 && self.0[0].is_zero()
    }

    /// Evaluates the polynomial at a square integer matrix (Horner).
    pub fn eval_matrix(&self, m: &IntMatrix) -> IntMatrix {
        let n = m.rows();
        let mut acc = IntMatrix::zeros(n, n);
        for c in self.0.iter().rev() {
            acc = acc.mul(m);
            for i in 0..n {
                acc[(i, i)] += c;
            }
        }
        acc
    }

    pub fn to_rat(&self) -> RatPoly {
        RatPoly::new(self.0.iter().map(|c| BigRational::from_integer(c.clone())).collect())
    }

    /// Multiplicity of `d` (monic) as a factor.
    pub fn multiplicity(&self, d: &Self) -> (usize, Self) {
        let mut p = self.clone();
        let mut k = 0;
        loop {
            if p.degree() < d.degree() {
                return (k, p);
            }
            let (q, r) = p.div_rem_monic(d);
            if !r.is_zero() {
                return (k, p);
            }
            p = q;
            k += 1;
        }
    }
}

/// Characteristic polynomial `det(xI - M)` by the Faddeev–LeVerrier recurrence
/// (all divisions are exact over the integers).
pub fn characteristic_polynomial(m: &IntMatrix) -> IntPoly {
    assert!(m.is_square());
    let n = m.rows();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    let mut mk = IntMatrix::identity(n);
    for k in 1..=n {
        let amk = m.mul(&mk);
        let trace: BigInt = (0..n).map(|i| amk[(i, i)].clone()).sum();
        let c = -trace / BigInt::from(k);
        coeffs[n - k] = c.clone();
        mk = amk;
        for i in 0..n {
            mk[(i, i)] += &c;
        }
    }
    IntPoly::new(coeffs)
}

/// The n-th cyclotomic polynomial.
pub fn cyclotomic(n: u64) -> IntPoly {
    assert!(n >= 1);
    let mut xn = vec![BigInt::zero(); n as usize + 1];
    xn[0] = BigInt::from(-1);
    xn[n as usize] = BigInt::one();
    let mut p = IntPoly::new(xn);
    for d in 1..n {
        if n % d == 0 {
            p = p.div_rem_monic(&cyclotomic(d)).0;
        }
    }
    p
}

/// Euler's totient.
pub fn totient(n: u64) -> u64 {
    (1..=n).filter(|k| k.gcd(&n) == 1).count() as u64
}

/// Splits off every cyclotomic factor of degree at most `deg(p)`.
///
/// Returns the list of `(order, multiplicity)` and the remaining cofactor.
pub fn cyclotomic_factorization(p: &IntPoly) -> (Vec<(u64, usize)>, IntPoly) {
    let deg = p.degree() as u64;
    let mut rest = p.clone();
    let mut found = Vec::new();
    // φ(n) >= sqrt(n/2), so orders beyond 2 deg^2 cannot divide
    let bound = 2 * deg * deg + 2;
    for n in 1..=bound {
        if totient(n) > rest.degree() as u64 {
            continue;
        }
        let (k, q) = rest.multiplicity(&cyclotomic(n));
        if k > 0 {
            found.push((n, k));
            rest = q;
        }
    }
    (found, rest)
}

/// Rational polynomial, constant term first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatPoly(Vec<BigRational>);

impl RatPoly {
    pub fn new(mut c: Vec<BigRational>) -> Self {
        while c.len() > 1 && c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        if c.is_empty() {
            c.push(BigRational::zero());
        }
        Self(c)
    }

    pub fn degree(&self) -> usize {
        self.0.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.0.len() == 1 && self.0[0].is_zero()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.0.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        if self.0.len() <= 1 {
            return Self::new(vec![]);
        }
        Self::new(
            self.0.iter().enumerate().skip(1).map(|(i, c)| c * BigRational::from_integer(BigInt::from(i))).collect(),
        )
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero());
        let dd = d.degree();
        let lead = d.0[dd].clone();
        let mut r = self.0.clone();
        if r.len() <= dd {
            return (Self::new(vec![]), self.clone());
        }
        let mut q = vec![BigRational::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] / &lead;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.0.iter().enumerate() {
                r[k + j] -= &c * dc;
            }
            q[k] = c;
        }
        r.truncate(dd.max(1));
        (Self::new(q), Self::new(r))
    }

    pub fn monic(&self) -> Self {
        let lead = self.0.last().unwrap().clone();
        Self::new(self.0.iter().map(|c| c / &lead).collect())
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Squarefree part `p / gcd(p, p')`.
    pub fn squarefree(&self) -> Self {
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    fn neg(&self) -> Self {
        Self::new(self.0.iter().map(|c| -c).collect())
    }

    /// Sturm sequence of a squarefree polynomial.
    pub fn sturm_sequence(&self) -> Vec<Self> {
        let mut seq = vec![self.clone(), self.derivative()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let r = seq[n - 2].rem(&seq[n - 1]).neg();
            if r.is_zero() {
                break;
            }
            seq.push(r);
        }
        seq
    }
}

fn sign_changes(seq: &[RatPoly], x: &BigRational) -> usize {
    let signs: Vec<i8> = seq
        .iter()
        .map(|p| {
            let v = p.eval(x);
            if v.is_positive() {
                1
            } else if v.is_negative() {
                -1
            } else {
                0
            }
        })
        .filter(|&s| s != 0)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Number of distinct real roots of the squarefree `p` in `(a, b]`.
pub fn count_roots(seq: &[RatPoly], a: &BigRational, b: &BigRational) -> usize {
    sign_changes(seq, a).saturating_sub(sign_changes(seq, b))
}

/// Certified enclosure `[lo, hi]` of the largest real root above `floor`.
#[derive(Clone, Debug, PartialEq)]
pub struct RootEnclosure {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RootEnclosure {
    pub fn midpoint(&self) -> f64 {
        ((&self.lo + &self.hi) / BigRational::from_integer(BigInt::from(2))).to_f64().unwrap_or(f64::NAN)
    }

    pub fn width(&self) -> f64 {
        (&self.hi - &self.lo).to_f64().unwrap_or(f64::NAN)
    }
}

/// Bisects to the largest real root of `p` strictly above `floor`, down to
/// the requested width. `None` when no real root exceeds `floor`.
pub fn largest_real_root(p: &IntPoly, floor: &BigRational, width: f64) -> Option<RootEnclosure> {
    let sf = p.to_rat().squarefree();
    let seq = sf.sturm_sequence();
    // Cauchy bound on root moduli
    let lead = sf.0.last().unwrap().abs();
    let bound = sf.0.iter().map(|c| c.abs() / &lead).fold(BigRational::zero(), |a, b| if b > a { b } else { a })
        + BigRational::one();
    if count_roots(&seq, floor, &bound) == 0 {
        return None;
    }
    let target = BigRational::new(
        BigInt::from((width * 1e15).max(1.0) as i64),
        BigInt::from(1_000_000_000_000_000_i64),
    );
    let two = BigRational::from_integer(BigInt::from(2));
    let (mut lo, mut hi) = (floor.clone(), bound);
    while &hi - &lo > target {
        let mid = (&lo + &hi) / &two;
        if count_roots(&seq, &mid, &hi) >= 1 {
            lo = mid;
        } else {
            hi = mid;
        }
        // keep the dyadic endpoints from growing unboundedly in size
        lo = round_down(&lo);
        hi = round_up(&hi);
    }
    Some(RootEnclosure { lo, hi })
}

const GRID: i64 = 1 << 60;

fn round_down(x: &BigRational) -> BigRational {
    let g = BigInt::from(GRID);
    BigRational::new((x * BigRational::from_integer(g.clone())).floor().to_integer(), g)
}

fn round_up(x: &BigRational) -> BigRational {
    let g = BigInt::from(GRID);
    BigRational::new((x * BigRational::from_integer(g.clone())).ceil().to_integer(), g)
}
