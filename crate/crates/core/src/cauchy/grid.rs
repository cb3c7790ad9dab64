use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::{is_zero, rational_str, rational_vec_str, require_positive};
use crate::error::{Error, Result};

/// f on the points k·a/N, k = 0..=N.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "GridJson", try_from = "GridJson")]
pub struct GridAdditiveFunction {
    a: BigRational,
    values: Vec<BigRational>,
}

/// Wire form; the table is checked only for shape on load so that broken
/// tables can still be inspected.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridJson {
    #[serde(with = "rational_str")]
    pub a: BigRational,
    pub n: u64,
    #[serde(with = "rational_vec_str")]
    pub values: Vec<BigRational>,
}

impl From<GridAdditiveFunction> for GridJson {
    fn from(g: GridAdditiveFunction) -> Self {
        GridJson {
            n: g.n(),
            a: g.a,
            values: g.values,
        }
    }
}

impl TryFrom<GridJson> for GridAdditiveFunction {
    type Error = Error;
    fn try_from(j: GridJson) -> Result<Self> {
        if j.values.len() as u64 != j.n + 1 {
            return Err(Error::InvalidArgument(format!(
                "grid with n = {} needs {} values, found {}",
                j.n,
                j.n + 1,
                j.values.len()
            )));
        }
        GridAdditiveFunction::from_values(j.a, j.values)
    }
}

impl GridAdditiveFunction {
    /// Wraps a raw table without checking additivity; see [`Self::check_invariants`].
    pub fn from_values(a: BigRational, values: Vec<BigRational>) -> Result<Self> {
        require_positive(&a, "a")?;
        if values.len() < 2 {
            return Err(Error::InvalidArgument("grid needs N >= 1".into()));
        }
        Ok(Self { a, values })
    }

    pub fn a(&self) -> &BigRational {
        &self.a
    }

    pub fn n(&self) -> u64 {
        (self.values.len() - 1) as u64
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    /// Mutable table access, e.g. to build a tampered copy.
    pub fn values_mut(&mut self) -> &mut [BigRational] {
        &mut self.values
    }

    pub fn value(&self, k: u64) -> Option<&BigRational> {
        self.values.get(usize::try_from(k).ok()?)
    }

    /// Grid point k·a/N.
    pub fn point(&self, k: u64) -> BigRational {
        &self.a * BigRational::new(BigInt::from(k), BigInt::from(self.n()))
    }

    /// Index k with x = k·a/N, if x is a grid point.
    pub fn index_of(&self, x: &BigRational) -> Option<u64> {
        let r = x * BigRational::from_integer(self.n().into()) / &self.a;
        if !r.is_integer() {
            return None;
        }
        let k = r.to_integer().to_u64()?;
        (k <= self.n()).then_some(k)
    }

    /// f(0) = 0 and f(j) + f(k) = f(j + k) for j + k ≤ N, in units of a/N.
    ///
    /// Given f(0) = 0, grid additivity is equivalent to f(k) = k·f(1) for
    /// all k, so the first k breaking that identity yields the violating
    /// pair (1, k − 1) in linear time.
    pub fn check_invariants(&self) -> Result<()> {
        if !is_zero(&self.values[0]) {
            return Err(Error::NonzeroAtOrigin);
        }
        let unit = &self.values[1];
        for (k, v) in self.values.iter().enumerate().skip(2) {
            if *v != unit * BigRational::from_integer(k.into()) {
                return Err(Error::NotAdditive {
                    left: 1,
                    right: k as u64 - 1,
                });
            }
        }
        Ok(())
    }

    /// Direct O(N²) check of every pair; used to cross-check [`Self::check_invariants`].
    pub fn additive_pairwise(&self) -> bool {
        let n = self.values.len();
        is_zero(&self.values[0])
            && (0..n).all(|j| {
                (0..n - j).all(|k| &self.values[j] + &self.values[k] == self.values[j + k])
            })
    }
}

/// The additive grid function with f(a/N) = v, namely f(k·a/N) = k·v.
pub fn grid_from_unit(a: BigRational, n: u64, v: BigRational) -> Result<GridAdditiveFunction> {
    if n == 0 {
        return Err(Error::InvalidArgument("N must be at least 1".into()));
    }
    let values = (0..=n)
        .map(|k| &v * BigRational::from_integer(k.into()))
        .collect();
    GridAdditiveFunction::from_values(a, values)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinearityReport {
    pub is_linear: bool,
    /// f(a)/a.
    #[serde(with = "rational_str")]
    pub slope: BigRational,
    /// First grid index where f(k·a/N) ≠ slope·k·a/N, if any.
    pub first_mismatch: Option<u64>,
}

/// Checks the grid invariants, then whether f(x) = (f(a)/a)·x on every grid point.
pub fn check_linear(g: &GridAdditiveFunction) -> Result<LinearityReport> {
    g.check_invariants()?;
    let slope = g.values.last().expect("grid has N >= 1") / &g.a;
    let first_mismatch = (0..=g.n()).find(|&k| g.values[k as usize] != &slope * g.point(k));
    Ok(LinearityReport {
        is_linear: first_mismatch.is_none(),
        slope,
        first_mismatch,
    })
}

impl GridAdditiveFunction {
    /// True when the table is nondecreasing or nonincreasing.
    pub fn is_monotone(&self) -> bool {
        let w = self.values.windows(2);
        w.clone().all(|p| p[0] <= p[1]) || w.into_iter().all(|p| p[0] >= p[1])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cauchy::parse_rational;

    fn q(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn unit_value_forces_multiples() {
        let g = grid_from_unit(q("1"), 10, q("7/100")).unwrap();
        assert_eq!(g.value(10).unwrap(), &q("7/10"));
        let g = grid_from_unit(q("3"), 4, q("1/8")).unwrap();
        assert_eq!(g.value(4).unwrap(), &q("1/2"));
        let z = grid_from_unit(q("2"), 5, q("0")).unwrap();
        assert!(z.values().iter().all(|v| v == &q("0")));
    }

    #[test]
    fn generated_grids_are_linear() {
        let g = grid_from_unit(q("1"), 10, q("7/100")).unwrap();
        let r = check_linear(&g).unwrap();
        assert!(r.is_linear);
        assert_eq!(r.slope, q("7/10"));
        assert!(g.additive_pairwise());
    }

    #[test]
    fn tampered_table_fails_invariant_first() {
        let mut g = grid_from_unit(q("1"), 10, q("7/100")).unwrap();
        g.values_mut()[6] += q("1/1000");
        match check_linear(&g) {
            Err(Error::NotAdditive { left: 1, right: 5 }) => {}
            other => panic!("unexpected {other:?}"),
        }
        assert!(!g.additive_pairwise());

        let mut g = grid_from_unit(q("1"), 3, q("1")).unwrap();
        g.values_mut()[0] = q("1/2");
        assert!(matches!(check_linear(&g), Err(Error::NonzeroAtOrigin)));
    }

    #[test]
    fn fast_and_pairwise_checks_agree() {
        let base = grid_from_unit(q("5/3"), 6, q("-2/7")).unwrap();
        for k in 0..=6usize {
            let mut g = base.clone();
            g.values_mut()[k] += q("1/11");
            assert_eq!(
                g.check_invariants().is_ok(),
                g.additive_pairwise(),
                "k = {k}"
            );
        }
    }

    #[test]
    fn grid_indexing() {
        let g = grid_from_unit(q("3/2"), 6, q("1")).unwrap();
        assert_eq!(g.index_of(&q("1/2")), Some(2));
        assert_eq!(g.index_of(&q("3/2")), Some(6));
        assert_eq!(g.index_of(&q("1/3")), None);
        assert_eq!(g.index_of(&q("2")), None);
        assert_eq!(g.point(4), q("1"));
    }

    #[test]
    fn monotone_tables() {
        assert!(grid_from_unit(q("1"), 8, q("3")).unwrap().is_monotone());
        assert!(grid_from_unit(q("1"), 8, q("-3")).unwrap().is_monotone());
        let mut g = grid_from_unit(q("1"), 4, q("1")).unwrap();
        g.values_mut()[2] = q("5");
        assert!(!g.is_monotone());
    }

    #[test]
    fn json_round_trip_and_shape_check() {
        let g = grid_from_unit(q("1"), 2, q("1/3")).unwrap();
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(s, r#"{"a":"1","n":2,"values":["0","1/3","2/3"]}"#);
        let back: GridAdditiveFunction = serde_json::from_str(&s).unwrap();
        assert_eq!(back, g);
        assert!(serde_json::from_str::<GridAdditiveFunction>(
            r#"{"a":"1","n":3,"values":["0","1"]}"#
        )
        .is_err());
        assert!(serde_json::from_str::<GridAdditiveFunction>(
            r#"{"a":"0","n":1,"values":["0","1"]}"#
        )
        .is_err());
    }
}
