//! Finite searches for the regularity conditions under which an additive
//! function on [0, a] must be linear. A passing report only says that no
//! counterexample exists among the searched points.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::grid::GridAdditiveFunction;
use super::qsqrt2::{sqrt2_convergents, QSqrt2, QSqrt2Additive};
use super::{rational_str, require_positive};
use crate::error::{Error, Result};

/// An exactly evaluable additive function together with a search strategy.
pub trait AdditiveModel: Send + Sync {
    fn eval(&self, x: &QSqrt2) -> Result<BigRational>;

    /// Candidate points in (0, params.a], in search order.
    fn search_points(&self, params: &SearchParams) -> Vec<QSqrt2>;
}

impl AdditiveModel for GridAdditiveFunction {
    fn eval(&self, x: &QSqrt2) -> Result<BigRational> {
        let k = x
            .is_rational()
            .then(|| self.index_of(&x.p))
            .flatten()
            .ok_or_else(|| Error::NotRepresentable(x.to_string()))?;
        Ok(self.value(k).expect("index within grid").clone())
    }

    /// Every grid point in (0, a].
    fn search_points(&self, params: &SearchParams) -> Vec<QSqrt2> {
        (1..=self.n())
            .map(|k| self.point(k))
            .take_while(|x| x <= &params.a)
            .map(QSqrt2::rational)
            .collect()
    }
}

impl AdditiveModel for QSqrt2Additive {
    fn eval(&self, x: &QSqrt2) -> Result<BigRational> {
        Ok(QSqrt2Additive::eval(self, x))
    }

    /// Positive convergent residuals |p − q√2| first, then the rational
    /// points a·i/budget.
    fn search_points(&self, params: &SearchParams) -> Vec<QSqrt2> {
        let a = QSqrt2::rational(params.a.clone());
        let residuals = sqrt2_convergents()
            .take(2 * params.depth + 4)
            .map(|c| {
                let r = c.residual();
                if r.is_negative() {
                    -r
                } else {
                    r
                }
            })
            .filter(|x| x <= &a);
        let budget = BigInt::from(params.budget.max(1));
        let rationals = (1..=params.budget.max(1)).map(|i| {
            QSqrt2::rational(&params.a * BigRational::new(BigInt::from(i), budget.clone()))
        });
        residuals.chain(rationals).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    BoundedAbove,
    BoundedBelow,
    ContinuousAtZero,
    /// Monotone functions are measurable, so this doubles as the finite
    /// stand-in for the measurability condition.
    Monotone,
}

impl std::str::FromStr for Condition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.replace('-', "_").as_str() {
            "bounded_above" => Ok(Condition::BoundedAbove),
            "bounded_below" => Ok(Condition::BoundedBelow),
            "continuous_at_zero" => Ok(Condition::ContinuousAtZero),
            "monotone" => Ok(Condition::Monotone),
            other => Err(Error::InvalidArgument(format!(
                "unknown condition {other:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchParams {
    /// Right end of the searched interval (0, a].
    #[serde(with = "rational_str")]
    pub a: BigRational,
    /// b for bounded_above, c for bounded_below.
    #[serde(default, with = "option_rational")]
    pub bound: Option<BigRational>,
    /// ε for continuous_at_zero.
    #[serde(default, with = "option_rational")]
    pub epsilon: Option<BigRational>,
    /// Number of evenly spaced rational sample points.
    pub budget: usize,
    /// Refinement depth: δ runs through a/2, a/4, ..., a/2^depth.
    pub depth: usize,
}

impl SearchParams {
    pub fn new(a: BigRational) -> Self {
        Self {
            a,
            bound: None,
            epsilon: None,
            budget: 64,
            depth: 16,
        }
    }

    pub fn with_bound(mut self, bound: BigRational) -> Self {
        self.bound = Some(bound);
        self
    }

    pub fn with_epsilon(mut self, epsilon: BigRational) -> Self {
        self.epsilon = Some(epsilon);
        self
    }
}

mod option_rational {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_some(&crate::cauchy::format_rational(r)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigRational>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| crate::cauchy::parse_rational(&s).map_err(serde::de::Error::custom))
            .transpose()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessPoint {
    pub x: QSqrt2,
    #[serde(with = "rational_str")]
    pub value: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    pub condition: Condition,
    /// No counterexample among the searched points. Evidence, not proof.
    pub holds_on_searched_region: bool,
    pub searched_points: usize,
    pub searched_region: String,
    /// Counterexample points; for monotone, an increasing and a decreasing pair.
    pub witness: Vec<WitnessPoint>,
    /// For continuous_at_zero: the δ at which |f| < ε held on the searched points.
    #[serde(with = "option_rational")]
    pub delta: Option<BigRational>,
}

fn evaluated<M: AdditiveModel + ?Sized>(f: &M, params: &SearchParams) -> Result<Vec<WitnessPoint>> {
    f.search_points(params)
        .into_iter()
        .map(|x| {
            let value = f.eval(&x)?;
            Ok(WitnessPoint { x, value })
        })
        .collect()
}

fn need(r: &Option<BigRational>, what: &str) -> Result<BigRational> {
    r.clone()
        .ok_or_else(|| Error::InvalidArgument(format!("{what} required for this condition")))
}

/// Searches for a counterexample to `which`.
pub fn check_condition<M: AdditiveModel + ?Sized>(
    f: &M,
    which: Condition,
    params: &SearchParams,
) -> Result<ConditionReport> {
    require_positive(&params.a, "a")?;
    let points = evaluated(f, params)?;
    let region = format!(
        "{} points in (0, {}] (budget {}, depth {})",
        points.len(),
        params.a,
        params.budget,
        params.depth
    );
    let mut report = ConditionReport {
        condition: which,
        holds_on_searched_region: true,
        searched_points: points.len(),
        searched_region: region,
        witness: Vec::new(),
        delta: None,
    };
    match which {
        Condition::BoundedAbove => {
            let b = need(&params.bound, "bound b")?;
            report
                .witness
                .extend(points.into_iter().find(|w| w.value > b));
        }
        Condition::BoundedBelow => {
            let c = need(&params.bound, "bound c")?;
            report
                .witness
                .extend(points.into_iter().find(|w| w.value < c));
        }
        Condition::ContinuousAtZero => {
            let eps = need(&params.epsilon, "epsilon")?;
            require_positive(&eps, "epsilon")?;
            let at_zero = f.eval(&QSqrt2::zero())?;
            if !at_zero.is_zero() {
                report.witness.push(WitnessPoint {
                    x: QSqrt2::zero(),
                    value: at_zero,
                });
            } else {
                let mut delta = params.a.clone();
                let mut last_violation = None;
                for _ in 0..params.depth {
                    delta /= BigRational::from_integer(2.into());
                    let d = QSqrt2::rational(delta.clone());
                    let bad = points
                        .iter()
                        .filter(|w| w.x <= d)
                        .find(|w| w.value.abs() >= eps);
                    match bad {
                        None => {
                            report.delta = Some(delta.clone());
                            break;
                        }
                        Some(w) => last_violation = Some(w.clone()),
                    }
                }
                if report.delta.is_none() {
                    report.witness.extend(last_violation);
                }
            }
        }
        Condition::Monotone => {
            let mut sorted = points;
            sorted.push(WitnessPoint {
                x: QSqrt2::zero(),
                value: f.eval(&QSqrt2::zero())?,
            });
            sorted.sort_by(|u, v| u.x.cmp(&v.x));
            let up = sorted.windows(2).find(|p| p[0].value < p[1].value);
            let down = sorted.windows(2).find(|p| p[0].value > p[1].value);
            if let (Some(up), Some(down)) = (up, down) {
                report.witness.extend(up.iter().cloned());
                report.witness.extend(down.iter().cloned());
            }
        }
    }
    report.holds_on_searched_region = report.witness.is_empty();
    Ok(report)
}
