//! Exact-arithmetic additive functions on an interval [0, a].
//!
//! Grid functions live on the points k·a/N, the ℚ(√2) model is additive but
//! not linear, and [`ExtensionView`] carries either of them to the whole
//! real line. All arithmetic is on [`BigRational`]; nothing here rounds.

mod conditions;
mod extension;
mod grid;
mod qsqrt2;

pub use conditions::{
    check_condition, AdditiveModel, Condition, ConditionReport, SearchParams, WitnessPoint,
};
pub use extension::{ExtensionBase, ExtensionValue, ExtensionView, SignCase};
pub use grid::{check_linear, grid_from_unit, GridAdditiveFunction, GridJson, LinearityReport};
pub use qsqrt2::{
    sqrt2_convergents, unboundedness_witness, Convergent, QSqrt2, QSqrt2Additive,
    UnboundednessWitness, MAX_CONVERGENTS,
};

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// Parses `p/q`, an integer, or a finite decimal such as `-2.5` exactly.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    let err = || Error::ParseRational(s.to_string());
    if t.is_empty() {
        return Err(err());
    }
    if t.contains('/') {
        let r = BigRational::from_str(t).map_err(|_| err())?;
        return Ok(r);
    }
    if let Some((int, frac)) = t.split_once('.') {
        let negative = int.starts_with('-');
        let int_digits = int.trim_start_matches(['-', '+']);
        if frac.is_empty() && int_digits.is_empty()
            || !frac.chars().all(|c| c.is_ascii_digit())
            || !int_digits.chars().all(|c| c.is_ascii_digit())
        {
            return Err(err());
        }
        let digits = format!("{int_digits}{frac}");
        let numer =
            BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).map_err(|_| err())?;
        let denom = num_traits::pow(BigInt::from(10), frac.len());
        let r = BigRational::new(numer, denom);
        return Ok(if negative { -r } else { r });
    }
    BigInt::from_str(t)
        .map(BigRational::from_integer)
        .map_err(|_| err())
}

/// `p/q` (or `p` for integers), the exact wire form of rationals.
pub fn format_rational(r: &BigRational) -> String {
    r.to_string()
}

pub(crate) fn require_positive(r: &BigRational, what: &str) -> Result<()> {
    if !r.is_positive() {
        return Err(Error::InvalidArgument(format!(
            "{what} must be positive, got {r}"
        )));
    }
    Ok(())
}

pub(crate) fn is_zero(r: &BigRational) -> bool {
    r.is_zero()
}

/// Serde adapter storing a [`BigRational`] as its `p/q` string.
pub mod rational_str {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        super::parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Vec<BigRational>` as a list of `p/q` strings.
pub mod rational_vec_str {
    use num_rational::BigRational;
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&super::format_rational(r))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRational>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| super::parse_rational(s).map_err(serde::de::Error::custom))
            .collect()
    }
}
