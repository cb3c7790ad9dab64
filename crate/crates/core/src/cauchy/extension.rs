use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::grid::GridAdditiveFunction;
use super::qsqrt2::{QSqrt2, QSqrt2Additive};
use super::{rational_str, require_positive};
use crate::error::{Error, Result};

/// An additive function known on [0, a].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ExtensionBase {
    Grid(GridAdditiveFunction),
    #[serde(rename = "qsqrt2")]
    QSqrt2 {
        #[serde(with = "rational_str")]
        alpha: BigRational,
        #[serde(with = "rational_str")]
        beta: BigRational,
        #[serde(with = "rational_str")]
        a: BigRational,
    },
}

impl ExtensionBase {
    pub fn qsqrt2(model: &QSqrt2Additive, a: BigRational) -> Result<Self> {
        require_positive(&a, "a")?;
        Ok(ExtensionBase::QSqrt2 {
            alpha: model.alpha.clone(),
            beta: model.beta.clone(),
            a,
        })
    }

    pub fn a(&self) -> &BigRational {
        match self {
            ExtensionBase::Grid(g) => g.a(),
            ExtensionBase::QSqrt2 { a, .. } => a,
        }
    }

    pub fn check_invariants(&self) -> Result<()> {
        match self {
            ExtensionBase::Grid(g) => g.check_invariants(),
            ExtensionBase::QSqrt2 { a, .. } => require_positive(a, "a"),
        }
    }

    /// f(x) for x in the base's own domain within [0, a].
    pub fn eval(&self, x: &QSqrt2) -> Result<BigRational> {
        let outside = || Error::NotRepresentable(x.to_string());
        if x.is_negative() || x > &QSqrt2::rational(self.a().clone()) {
            return Err(outside());
        }
        match self {
            ExtensionBase::Grid(g) => {
                if !x.is_rational() {
                    return Err(outside());
                }
                let k = g.index_of(&x.p).ok_or_else(outside)?;
                Ok(g.value(k).expect("index within grid").clone())
            }
            ExtensionBase::QSqrt2 { alpha, beta, .. } => Ok(alpha * &x.p + beta * &x.q),
        }
    }

    /// Smallest n ≥ 1 such that x/n lies in the domain of [`Self::eval`].
    pub fn minimal_modulus(&self, x: &QSqrt2) -> Result<BigInt> {
        if x.is_negative() {
            return Err(Error::NotRepresentable(x.to_string()));
        }
        match self {
            ExtensionBase::Grid(g) => {
                if !x.is_rational() {
                    return Err(Error::NotRepresentable(x.to_string()));
                }
                // x/n = k·a/N needs r = xN/a to be an integer with r = n·k, k ≤ N;
                // the smallest n pairs with the largest divisor k of r.
                let r = &x.p * BigRational::from_integer(g.n().into()) / g.a();
                if !r.is_integer() {
                    return Err(Error::NotRepresentable(x.to_string()));
                }
                let r = r.to_integer();
                if r.is_zero() {
                    return Ok(BigInt::one());
                }
                let cap = r.to_u64().map_or(g.n(), |r| r.min(g.n()));
                let k = (1..=cap)
                    .rev()
                    .find(|&k| r.is_multiple_of(&BigInt::from(k)))
                    .expect("k = 1 divides every integer");
                Ok(r / k)
            }
            ExtensionBase::QSqrt2 { a, .. } => Ok(x.ceil_ratio(a)),
        }
    }
}

/// Which of the three sign configurations an additivity test exercises.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignCase {
    /// x ≥ 0 and y ≥ 0.
    BothNonnegative,
    /// x < 0 and y < 0.
    BothNegative,
    /// One argument negative, the other nonnegative.
    Mixed,
}

impl SignCase {
    pub fn of(x: &QSqrt2, y: &QSqrt2) -> Self {
        match (x.is_negative(), y.is_negative()) {
            (false, false) => SignCase::BothNonnegative,
            (true, true) => SignCase::BothNegative,
            _ => SignCase::Mixed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtensionValue {
    pub x: QSqrt2,
    #[serde(with = "rational_str")]
    pub value: BigRational,
    /// n in n·f(|x|/n).
    pub modulus: String,
    /// True when the value was obtained as −f₊(−x).
    pub reflected: bool,
}

/// f₊ on [0, ∞) via n·f(x/n) and f_ℝ on ℝ via f_ℝ(x) = −f₊(−x) for x < 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionView {
    pub base: ExtensionBase,
}

impl ExtensionView {
    pub fn new(base: ExtensionBase) -> Result<Self> {
        base.check_invariants()?;
        Ok(Self { base })
    }

    /// n·f(x/n) for a caller-chosen modulus; x/n must lie in the base domain.
    pub fn f_plus_with_modulus(&self, x: &QSqrt2, n: &BigInt) -> Result<BigRational> {
        if !n.is_positive() {
            return Err(Error::InvalidArgument(format!(
                "modulus must be positive, got {n}"
            )));
        }
        let n = BigRational::from_integer(n.clone());
        let inner = x.scale(&n.recip());
        Ok(self.base.eval(&inner)? * n)
    }

    pub fn f_plus(&self, x: &QSqrt2) -> Result<ExtensionValue> {
        let n = self.base.minimal_modulus(x)?;
        Ok(ExtensionValue {
            x: x.clone(),
            value: self.f_plus_with_modulus(x, &n)?,
            modulus: n.to_string(),
            reflected: false,
        })
    }

    pub fn f_real(&self, x: &QSqrt2) -> Result<ExtensionValue> {
        if !x.is_negative() {
            return self.f_plus(x);
        }
        let mirrored = self.f_plus(&-x)?;
        Ok(ExtensionValue {
            x: x.clone(),
            value: -mirrored.value,
            modulus: mirrored.modulus,
            reflected: true,
        })
    }

    /// Exact test of f_ℝ(x) + f_ℝ(y) = f_ℝ(x + y).
    pub fn check_additive_pair(&self, x: &QSqrt2, y: &QSqrt2) -> Result<(SignCase, bool)> {
        let lhs = self.f_real(x)?.value + self.f_real(y)?.value;
        let rhs = self.f_real(&(x + y))?.value;
        Ok((SignCase::of(x, y), lhs == rhs))
    }
}
