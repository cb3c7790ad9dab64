use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{rational_str, require_positive};
use crate::error::{Error, Result};

/// Exact element p + q√2 of ℚ(√2).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "QSqrt2Json", try_from = "QSqrt2Json")]
pub struct QSqrt2 {
    pub p: BigRational,
    pub q: BigRational,
}

#[derive(Serialize, Deserialize)]
struct QSqrt2Json {
    #[serde(with = "rational_str")]
    p: BigRational,
    #[serde(with = "rational_str")]
    q: BigRational,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    approx: Option<f64>,
}

impl From<QSqrt2> for QSqrt2Json {
    fn from(x: QSqrt2) -> Self {
        let approx = Some(x.to_f64());
        QSqrt2Json {
            p: x.p,
            q: x.q,
            approx,
        }
    }
}

impl TryFrom<QSqrt2Json> for QSqrt2 {
    type Error = Error;
    fn try_from(j: QSqrt2Json) -> Result<Self> {
        Ok(QSqrt2::new(j.p, j.q))
    }
}

impl QSqrt2 {
    pub fn new(p: BigRational, q: BigRational) -> Self {
        Self { p, q }
    }

    pub fn rational(p: BigRational) -> Self {
        Self::new(p, BigRational::zero())
    }

    pub fn from_ints(p: i64, q: i64) -> Self {
        Self::new(
            BigRational::from_integer(p.into()),
            BigRational::from_integer(q.into()),
        )
    }

    pub fn zero() -> Self {
        Self::rational(BigRational::zero())
    }

    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }

    /// Exact sign, decided by comparing p² with 2q² when the signs of p and q differ.
    pub fn sign(&self) -> Ordering {
        let zero = BigRational::zero();
        let sp = self.p.cmp(&zero);
        let sq = self.q.cmp(&zero);
        match (sp, sq) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (a, b) if a == b => a,
            _ => {
                let p2 = &self.p * &self.p;
                let q2 = &self.q * &self.q * BigRational::from_integer(2.into());
                // |p| > |q|√2 means p dominates.
                match p2.cmp(&q2) {
                    Ordering::Greater => sp,
                    Ordering::Less => sq,
                    Ordering::Equal => unreachable!("√2 is irrational"),
                }
            }
        }
    }

    pub fn is_negative(&self) -> bool {
        self.sign() == Ordering::Less
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        Self::new(&self.p * r, &self.q * r)
    }

    /// Approximate value; for display only.
    pub fn to_f64(&self) -> f64 {
        let p = self.p.to_f64().unwrap_or(f64::NAN);
        let q = self.q.to_f64().unwrap_or(f64::NAN);
        if self.p.signum() == self.q.signum() || self.p.is_zero() || self.q.is_zero() {
            return p + q * std::f64::consts::SQRT_2;
        }
        // Opposite signs cancel; use (p² − 2q²)/(p − q√2) with an exact numerator.
        let num = &self.p * &self.p - &self.q * &self.q * BigRational::from_integer(2.into());
        num.to_f64().unwrap_or(f64::NAN) / (p - q * std::f64::consts::SQRT_2)
    }

    /// Smallest positive integer n with self ≤ n·a (for self ≥ 0, a > 0).
    pub(crate) fn ceil_ratio(&self, a: &BigRational) -> BigInt {
        let approx = (self.to_f64() / a.to_f64().unwrap_or(f64::NAN)).ceil();
        let mut n = if approx.is_finite() && approx >= 1.0 {
            BigInt::from(approx as u64)
        } else {
            BigInt::one()
        };
        let na = |n: &BigInt| QSqrt2::rational(BigRational::from_integer(n.clone()) * a);
        while &na(&n) < self {
            n += 1;
        }
        while n > BigInt::one() && &na(&(&n - 1)) >= self {
            n -= 1;
        }
        n
    }
}

impl Ord for QSqrt2 {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).sign()
    }
}

impl PartialOrd for QSqrt2 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for QSqrt2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q.is_zero() {
            write!(f, "{}", self.p)
        } else if self.q.is_negative() {
            write!(f, "{} - {}√2", self.p, -&self.q)
        } else {
            write!(f, "{} + {}√2", self.p, self.q)
        }
    }
}

impl<'a> Add<&'a QSqrt2> for &'a QSqrt2 {
    type Output = QSqrt2;
    fn add(self, o: &QSqrt2) -> QSqrt2 {
        QSqrt2::new(&self.p + &o.p, &self.q + &o.q)
    }
}

impl<'a> Sub<&'a QSqrt2> for &'a QSqrt2 {
    type Output = QSqrt2;
    fn sub(self, o: &QSqrt2) -> QSqrt2 {
        QSqrt2::new(&self.p - &o.p, &self.q - &o.q)
    }
}

impl Neg for &QSqrt2 {
    type Output = QSqrt2;
    fn neg(self) -> QSqrt2 {
        QSqrt2::new(-&self.p, -&self.q)
    }
}

impl Neg for QSqrt2 {
    type Output = QSqrt2;
    fn neg(self) -> QSqrt2 {
        -&self
    }
}

impl Mul<&BigRational> for &QSqrt2 {
    type Output = QSqrt2;
    fn mul(self, r: &BigRational) -> QSqrt2 {
        self.scale(r)
    }
}

/// f(p + q√2) = alpha·p + beta·q: ℚ-linear, hence additive, but linear over
/// ℝ only when beta = alpha·√2, which no rational pair other than (0, 0)
/// satisfies.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QSqrt2Additive {
    #[serde(with = "rational_str")]
    pub alpha: BigRational,
    #[serde(with = "rational_str")]
    pub beta: BigRational,
}

impl QSqrt2Additive {
    pub fn new(alpha: BigRational, beta: BigRational) -> Self {
        Self { alpha, beta }
    }

    pub fn from_ints(alpha: i64, beta: i64) -> Self {
        Self::new(
            BigRational::from_integer(alpha.into()),
            BigRational::from_integer(beta.into()),
        )
    }

    pub fn eval(&self, x: &QSqrt2) -> BigRational {
        &self.alpha * &x.p + &self.beta * &x.q
    }

    /// beta = alpha√2 would need beta² = 2alpha² with matching signs.
    pub fn is_nonlinear(&self) -> bool {
        let two = BigRational::from_integer(2.into());
        let squares_match = &self.beta * &self.beta == &self.alpha * &self.alpha * two;
        let signs_match = self.alpha.signum() == self.beta.signum();
        !(squares_match && signs_match)
    }

    pub fn is_degenerate(&self) -> bool {
        self.alpha.is_zero() && self.beta.is_zero()
    }
}

/// Convergent p/q of √2 with the residual p − q√2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Convergent {
    pub index: usize,
    pub p: BigInt,
    pub q: BigInt,
}

impl Convergent {
    pub fn residual(&self) -> QSqrt2 {
        QSqrt2::new(
            BigRational::from_integer(self.p.clone()),
            BigRational::from_integer(-self.q.clone()),
        )
    }
}

/// 1/1, 3/2, 7/5, 17/12, ... via p' = 2p + p₋, q' = 2q + q₋.
pub fn sqrt2_convergents() -> impl Iterator<Item = Convergent> {
    let mut prev = (BigInt::from(1), BigInt::from(1));
    let mut cur = (BigInt::from(3), BigInt::from(2));
    (0..).map(move |index| {
        let out = Convergent {
            index,
            p: prev.0.clone(),
            q: prev.1.clone(),
        };
        let next = (2 * &cur.0 + &prev.0, 2 * &cur.1 + &prev.1);
        prev = std::mem::replace(&mut cur, next);
        out
    })
}

/// Cap on the convergent walk; each step multiplies q by about 2.414.
pub const MAX_CONVERGENTS: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnboundednessWitness {
    pub x: QSqrt2,
    #[serde(with = "rational_str")]
    pub value: BigRational,
    #[serde(with = "rational_str")]
    pub bound: BigRational,
    #[serde(with = "rational_str")]
    pub interval: BigRational,
    pub convergent_index: usize,
}

impl UnboundednessWitness {
    /// Re-checks 0 < x ≤ a and f(x) > bound exactly.
    pub fn verify(&self, f: &QSqrt2Additive) -> bool {
        let a = QSqrt2::rational(self.interval.clone());
        self.x.sign() == Ordering::Greater
            && self.x <= a
            && f.eval(&self.x) == self.value
            && self.value > self.bound
    }
}

/// Finds x ∈ (0, a] with f(x) > bound by walking the convergents of √2.
///
/// Each convergent gives x = s(p − q√2) with s the sign that makes x
/// positive, so f(x) = s(alpha·p − beta·q). Since |p − q√2| < 1/(2q) the
/// points shrink to zero while, for a non-linear f, the values grow like q
/// on every other step.
pub fn unboundedness_witness(
    f: &QSqrt2Additive,
    bound: &BigRational,
    a: &BigRational,
) -> Result<UnboundednessWitness> {
    if f.is_degenerate() {
        return Err(Error::Degenerate(
            "alpha = beta = 0 is the zero function".into(),
        ));
    }
    require_positive(bound, "bound")?;
    require_positive(a, "interval length")?;
    let a_q = QSqrt2::rational(a.clone());
    for c in sqrt2_convergents().take(MAX_CONVERGENTS) {
        let r = c.residual();
        let x = if r.is_negative() { -r } else { r };
        if x > a_q {
            continue;
        }
        let value = f.eval(&x);
        if &value > bound {
            return Ok(UnboundednessWitness {
                x,
                value,
                bound: bound.clone(),
                interval: a.clone(),
                convergent_index: c.index,
            });
        }
    }
    Err(Error::InvalidArgument(format!(
        "no witness within {MAX_CONVERGENTS} convergents"
    )))
}
