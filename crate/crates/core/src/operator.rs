//! Hermitian operators on C^d viewed as the real vector space of dimension d².
//!
//! Entries are stored in a dense complex matrix that is exactly
//! conjugate-symmetric: `m[(j, k)] == m[(k, j)].conj()` bit for bit, with a
//! zero imaginary part on the diagonal. Every constructor enforces this by
//! averaging with the adjoint, which is exact in floating point.
//!
//! Real coordinates refer to the normalized generalized Gell-Mann frame
//! produced by [`crate::basis::orthonormal_operator_basis`]: index 0 is
//! `I/sqrt(d)`, followed by one symmetric and one antisymmetric off-diagonal
//! element for each pair `j < k` in lexicographic order, followed by the
//! `d - 1` traceless diagonal elements.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest conjugate-asymmetry accepted when reading operator JSON.
pub const JSON_ASYMMETRY_LIMIT: f64 = 1e-12;

#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "OperatorJson", into = "OperatorJson")]
pub struct HermitianOperator {
    m: DMatrix<Complex64>,
}

impl fmt::Debug for HermitianOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HermitianOperator(d={}) [", self.dim())?;
        for j in 0..self.dim() {
            write!(f, "\n  ")?;
            for k in 0..self.dim() {
                let z = self.m[(j, k)];
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
        }
        write!(f, "\n]")
    }
}

/// Largest `|m[j,k] - conj(m[k,j])|` over all entry pairs.
pub fn max_asymmetry(m: &DMatrix<Complex64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for j in 0..n {
        for k in j..n {
            worst = worst.max((m[(j, k)] - m[(k, j)].conj()).norm());
        }
    }
    worst
}

impl HermitianOperator {
    /// Symmetrizes `(m + m†)/2`. Fails only on non-square or non-finite input.
    pub fn from_matrix(m: DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch {
                expected: m.nrows(),
                found: m.ncols(),
            });
        }
        if m.nrows() == 0 {
            return Err(Error::UnsupportedDimension(0));
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self::symmetrize(m))
    }

    /// Like [`from_matrix`](Self::from_matrix) but rejects input whose
    /// asymmetry exceeds `limit`.
    pub fn from_matrix_checked(m: DMatrix<Complex64>, limit: f64) -> Result<Self> {
        if m.nrows() == m.ncols() {
            let asymmetry = max_asymmetry(&m);
            if asymmetry > limit || asymmetry.is_nan() {
                return Err(Error::NotHermitian { asymmetry });
            }
        }
        Self::from_matrix(m)
    }

    fn symmetrize(m: DMatrix<Complex64>) -> Self {
        let n = m.nrows();
        let mut out = m.clone();
        for j in 0..n {
            out[(j, j)] = Complex64::new(m[(j, j)].re, 0.0);
            for k in (j + 1)..n {
                let upper = (m[(j, k)] + m[(k, j)].conj()) * 0.5;
                out[(j, k)] = upper;
                out[(k, j)] = upper.conj();
            }
        }
        Self { m: out }
    }

    pub fn zeros(d: usize) -> Self {
        Self {
            m: DMatrix::zeros(d, d),
        }
    }

    pub fn identity(d: usize) -> Self {
        Self {
            m: DMatrix::identity(d, d),
        }
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let d = values.len();
        let mut m = DMatrix::zeros(d, d);
        for (j, v) in values.iter().enumerate() {
            m[(j, j)] = Complex64::new(*v, 0.0);
        }
        Self { m }
    }

    /// The rank-one operator |v⟩⟨v| (not normalized).
    pub fn outer(v: &DVector<Complex64>) -> Self {
        Self::symmetrize(v * v.adjoint())
    }

    /// Computational basis projector |j⟩⟨j|.
    pub fn basis_projector(d: usize, j: usize) -> Self {
        let mut m = DMatrix::zeros(d, d);
        m[(j, j)] = Complex64::new(1.0, 0.0);
        Self { m }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.m
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.m
    }

    pub fn entry(&self, j: usize, k: usize) -> Complex64 {
        self.m[(j, k)]
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|j| self.m[(j, j)].re).sum()
    }

    /// Hilbert-Schmidt norm sqrt(Tr A²).
    pub fn norm(&self) -> f64 {
        self.m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&self, x: f64) -> Self {
        Self {
            m: &self.m * Complex64::new(x, 0.0),
        }
    }

    /// `S A S` for Hermitian `S`, re-symmetrized.
    pub fn sandwich(&self, s: &HermitianOperator) -> Result<Self> {
        check_dims(self, s)?;
        Ok(Self::symmetrize(&s.m * &self.m * &s.m))
    }

    pub fn check_same_dim(&self, other: &Self) -> Result<()> {
        check_dims(self, other)
    }

    /// Coordinates in the normalized Gell-Mann frame (see module docs).
    pub fn to_real_coords(&self) -> DVector<f64> {
        let d = self.dim();
        let mut out = DVector::zeros(d * d);
        out[0] = self.trace() / (d as f64).sqrt();
        let mut idx = 1;
        let s2 = std::f64::consts::SQRT_2;
        for j in 0..d {
            for k in (j + 1)..d {
                let z = self.m[(j, k)];
                out[idx] = s2 * z.re;
                out[idx + 1] = -s2 * z.im;
                idx += 2;
            }
        }
        for l in 1..d {
            let lf = l as f64;
            let head: f64 = (0..l).map(|m| self.m[(m, m)].re).sum();
            out[idx] = (head - lf * self.m[(l, l)].re) / (lf * (lf + 1.0)).sqrt();
            idx += 1;
        }
        out
    }

    /// Inverse of [`to_real_coords`](Self::to_real_coords).
    pub fn from_real_coords(d: usize, coords: &DVector<f64>) -> Result<Self> {
        if coords.len() != d * d {
            return Err(Error::DimensionMismatch {
                expected: d * d,
                found: coords.len(),
            });
        }
        if d == 0 {
            return Err(Error::UnsupportedDimension(0));
        }
        let mut m = DMatrix::<Complex64>::zeros(d, d);
        let id = coords[0] / (d as f64).sqrt();
        for j in 0..d {
            m[(j, j)].re += id;
        }
        let mut idx = 1;
        let inv_s2 = std::f64::consts::FRAC_1_SQRT_2;
        for j in 0..d {
            for k in (j + 1)..d {
                let z = Complex64::new(coords[idx] * inv_s2, -coords[idx + 1] * inv_s2);
                m[(j, k)] = z;
                m[(k, j)] = z.conj();
                idx += 2;
            }
        }
        for l in 1..d {
            let lf = l as f64;
            let w = coords[idx] / (lf * (lf + 1.0)).sqrt();
            for mm in 0..l {
                m[(mm, mm)].re += w;
            }
            m[(l, l)].re -= lf * w;
            idx += 1;
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { m })
    }

    /// Sum of a non-empty list of equal-dimension operators.
    pub fn sum<'a, I>(ops: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a HermitianOperator>,
    {
        let mut it = ops.into_iter();
        let first = it
            .next()
            .ok_or_else(|| Error::InvalidArgument("sum of empty operator list".into()))?;
        let mut acc = first.clone();
        for op in it {
            check_dims(&acc, op)?;
            acc.m += &op.m;
        }
        Ok(acc)
    }

    /// Σ coeffs_j ops_j.
    pub fn linear_combination(coeffs: &[f64], ops: &[HermitianOperator]) -> Result<Self> {
        if coeffs.len() != ops.len() {
            return Err(Error::DimensionMismatch {
                expected: ops.len(),
                found: coeffs.len(),
            });
        }
        let first = ops
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty linear combination".into()))?;
        let mut m = DMatrix::<Complex64>::zeros(first.dim(), first.dim());
        for (c, op) in coeffs.iter().zip(ops) {
            check_dims(first, op)?;
            m += &op.m * Complex64::new(*c, 0.0);
        }
        Ok(Self { m })
    }
}

fn check_dims(a: &HermitianOperator, b: &HermitianOperator) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(())
}

/// Hilbert-Schmidt inner product Tr(AB).
pub fn hs_inner(a: &HermitianOperator, b: &HermitianOperator) -> Result<f64> {
    check_dims(a, b)?;
    // Tr(AB) = Σ_jk A_jk B_kj = Σ_jk Re(A_jk conj(B_jk)) for Hermitian B.
    Ok(a.m
        .iter()
        .zip(b.m.iter())
        .map(|(x, y)| x.re * y.re + x.im * y.im)
        .sum())
}

// Dimension-checked arithmetic goes through the methods above; the operator
// impls panic on mismatch like nalgebra does.
impl Add for &HermitianOperator {
    type Output = HermitianOperator;
    fn add(self, rhs: Self) -> HermitianOperator {
        HermitianOperator {
            m: &self.m + &rhs.m,
        }
    }
}

impl Sub for &HermitianOperator {
    type Output = HermitianOperator;
    fn sub(self, rhs: Self) -> HermitianOperator {
        HermitianOperator {
            m: &self.m - &rhs.m,
        }
    }
}

impl Neg for &HermitianOperator {
    type Output = HermitianOperator;
    fn neg(self) -> HermitianOperator {
        HermitianOperator { m: -&self.m }
    }
}

/// Wire form: `{ "dim": d, "entries": [[[re, im], ...], ...] }`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OperatorJson {
    pub dim: usize,
    pub entries: Vec<Vec<[f64; 2]>>,
}

impl From<HermitianOperator> for OperatorJson {
    fn from(op: HermitianOperator) -> Self {
        let d = op.dim();
        let entries = (0..d)
            .map(|j| {
                (0..d)
                    .map(|k| {
                        let z = op.m[(j, k)];
                        [z.re, z.im]
                    })
                    .collect()
            })
            .collect();
        Self { dim: d, entries }
    }
}

impl TryFrom<OperatorJson> for HermitianOperator {
    type Error = Error;

    fn try_from(json: OperatorJson) -> Result<Self> {
        let d = json.dim;
        if d == 0 {
            return Err(Error::UnsupportedDimension(0));
        }
        if json.entries.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: json.entries.len(),
            });
        }
        let mut m = DMatrix::<Complex64>::zeros(d, d);
        for (j, row) in json.entries.iter().enumerate() {
            if row.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: row.len(),
                });
            }
            for (k, [re, im]) in row.iter().enumerate() {
                m[(j, k)] = Complex64::new(*re, *im);
            }
        }
        HermitianOperator::from_matrix_checked(m, JSON_ASYMMETRY_LIMIT)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn plus() -> HermitianOperator {
        let v = DVector::from_vec(vec![c(1.0, 0.0), c(1.0, 0.0)]) / c(2f64.sqrt(), 0.0);
        HermitianOperator::outer(&v)
    }

    #[test]
    fn inner_products_of_small_examples() {
        let i2 = HermitianOperator::identity(2);
        assert_eq!(hs_inner(&i2, &i2).unwrap(), 2.0);

        let p0 = HermitianOperator::basis_projector(2, 0);
        let p1 = HermitianOperator::basis_projector(2, 1);
        assert_eq!(hs_inner(&p0, &p1).unwrap(), 0.0);

        // Direct product oracle: Tr(|0><0| |+><+|) = <0|+><+|0> = 1/2.
        let prod = p0.matrix() * plus().matrix();
        let tr: Complex64 = (0..2).map(|j| prod[(j, j)]).sum();
        let got = hs_inner(&p0, &plus()).unwrap();
        assert!((got - tr.re).abs() < 1e-15);
        assert!((got - 0.5).abs() < 1e-15);
    }

    #[test]
    fn inner_rejects_mismatched_dims() {
        let a = HermitianOperator::identity(2);
        let b = HermitianOperator::identity(3);
        assert!(matches!(
            hs_inner(&a, &b),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn symmetrization_is_exact() {
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[c(1.0, 0.3), c(0.2, 0.7), c(0.1, -0.5), c(-2.0, 1.0)],
        );
        let h = HermitianOperator::from_matrix(m).unwrap();
        assert_eq!(h.entry(0, 1), h.entry(1, 0).conj());
        assert_eq!(h.entry(0, 0).im, 0.0);
        assert_eq!(h.entry(1, 1).im, 0.0);
    }

    #[test]
    fn rejects_non_finite() {
        let m = DMatrix::from_element(2, 2, c(f64::NAN, 0.0));
        assert!(matches!(
            HermitianOperator::from_matrix(m),
            Err(Error::NonFinite)
        ));
    }

    #[test]
    fn coords_round_trip() {
        let m = DMatrix::from_row_slice(
            3,
            3,
            &[
                c(0.4, 0.0),
                c(0.1, 0.2),
                c(-0.3, 0.05),
                c(0.1, -0.2),
                c(-1.0, 0.0),
                c(0.7, 0.7),
                c(-0.3, -0.05),
                c(0.7, -0.7),
                c(2.5, 0.0),
            ],
        );
        let h = HermitianOperator::from_matrix(m).unwrap();
        let back = HermitianOperator::from_real_coords(3, &h.to_real_coords()).unwrap();
        assert!((&back - &h).norm() < 1e-14);
        // Orthonormal frame: coordinate norm equals Hilbert-Schmidt norm.
        assert!((h.to_real_coords().norm() - h.norm()).abs() < 1e-14);
    }

    #[test]
    fn json_round_trip_and_rejection() {
        let h = plus();
        let text = serde_json::to_string(&h).unwrap();
        let back: HermitianOperator = serde_json::from_str(&text).unwrap();
        assert_eq!(back, h);

        let bad = r#"{"dim":2,"entries":[[[1,0],[0.5,0]],[[0.4,0],[0,0]]]}"#;
        let err = serde_json::from_str::<HermitianOperator>(bad).unwrap_err();
        assert!(err.to_string().contains("not Hermitian"));

        // Asymmetry below the read limit is accepted and symmetrized.
        let tiny = r#"{"dim":2,"entries":[[[1,0],[0.5,1e-14]],[[0.5,0],[0,0]]]}"#;
        let h: HermitianOperator = serde_json::from_str(tiny).unwrap();
        assert_eq!(h.entry(0, 1), h.entry(1, 0).conj());
    }

    #[test]
    fn json_rejects_ragged_rows() {
        let bad = r#"{"dim":2,"entries":[[[1,0]],[[0,0],[0,0]]]}"#;
        assert!(serde_json::from_str::<HermitianOperator>(bad).is_err());
    }
}
