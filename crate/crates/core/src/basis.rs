//! Bases of the real space of Hermitian operators, coefficient expansion and
//! change-of-basis matrices.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{numerical_rank, RankInfo};
use crate::operator::{hs_inner, HermitianOperator};
use crate::tolerance::ToleranceConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BasisKind {
    Orthonormal,
    Augmented,
    MicPom,
    Generic,
}

/// d² linearly independent Hermitian operators.
///
/// Construction precomputes the coordinate matrix `T` (column j holds the
/// orthonormal-frame coordinates of element j) and its inverse, so
/// expansion is a single matrix-vector product.
#[derive(Debug, Clone)]
pub struct OperatorBasis {
    dim: usize,
    kind: BasisKind,
    elements: Vec<HermitianOperator>,
    coords: DMatrix<f64>,
    inverse: DMatrix<f64>,
    rank: RankInfo,
}

impl OperatorBasis {
    pub fn new(
        elements: Vec<HermitianOperator>,
        kind: BasisKind,
        tol: &ToleranceConfig,
    ) -> Result<Self> {
        let first = elements
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty basis".into()))?;
        let dim = first.dim();
        let n = dim * dim;
        if elements.len() != n {
            return Err(Error::WrongBasisSize {
                expected: n,
                found: elements.len(),
            });
        }
        let mut coords = DMatrix::zeros(n, n);
        for (j, e) in elements.iter().enumerate() {
            first.check_same_dim(e)?;
            coords.set_column(j, &e.to_real_coords());
        }
        let rank = numerical_rank(&coords, tol.rank_cutoff);
        if rank.rank < n {
            return Err(Error::SingularBasis {
                rank: rank.rank,
                expected: n,
                smallest: rank.smallest,
            });
        }
        let inverse = coords.clone().try_inverse().ok_or(Error::SingularBasis {
            rank: rank.rank,
            expected: n,
            smallest: rank.smallest,
        })?;
        if kind == BasisKind::Orthonormal {
            let dev = gram_deviation(&elements)?;
            if dev > tol.residual {
                return Err(Error::NotOrthonormal { deviation: dev });
            }
        }
        Ok(Self {
            dim,
            kind,
            elements,
            coords,
            inverse,
            rank,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn elements(&self) -> &[HermitianOperator] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Column j = orthonormal-frame coordinates of element j.
    pub fn coordinate_matrix(&self) -> &DMatrix<f64> {
        &self.coords
    }

    pub fn rank_info(&self) -> RankInfo {
        self.rank
    }

    /// Real Gram matrix ⟨A_j, A_k⟩.
    pub fn gram(&self) -> DMatrix<f64> {
        self.coords.transpose() * &self.coords
    }

    /// Coefficients of an orthonormal-frame coordinate vector in this basis,
    /// with one step of iterative refinement.
    pub(crate) fn solve_coords(&self, h: &DVector<f64>) -> DVector<f64> {
        let mut x = &self.inverse * h;
        let r = h - &self.coords * &x;
        x += &self.inverse * r;
        x
    }

    pub fn recombine(&self, coeffs: &[f64]) -> Result<HermitianOperator> {
        HermitianOperator::linear_combination(coeffs, &self.elements)
    }
}

fn gram_deviation(elements: &[HermitianOperator]) -> Result<f64> {
    let mut dev = 0.0_f64;
    for (j, a) in elements.iter().enumerate() {
        for (k, b) in elements.iter().enumerate() {
            let target = if j == k { 1.0 } else { 0.0 };
            dev = dev.max((hs_inner(a, b)? - target).abs());
        }
    }
    Ok(dev)
}

/// Expansion coefficients of an operator in a basis.
#[derive(Debug, Clone)]
pub struct CoefficientVector<'a> {
    pub basis: &'a OperatorBasis,
    pub coeffs: Vec<f64>,
}

impl CoefficientVector<'_> {
    pub fn recombine(&self) -> Result<HermitianOperator> {
        self.basis.recombine(&self.coeffs)
    }

    pub fn dot(&self, other: &[f64]) -> f64 {
        self.coeffs.iter().zip(other).map(|(a, b)| a * b).sum()
    }
}

/// Normalized generalized Gell-Mann basis: `I/sqrt(d)`, then the symmetric
/// and antisymmetric off-diagonal elements for each `j < k`, then the
/// traceless diagonal elements. For d = 2 this is {I, X, Y, Z}/sqrt(2).
pub fn orthonormal_operator_basis(d: usize) -> Result<OperatorBasis> {
    if d < 2 {
        return Err(Error::UnsupportedDimension(d));
    }
    let s2 = std::f64::consts::FRAC_1_SQRT_2;
    let mut elements = Vec::with_capacity(d * d);
    elements.push(HermitianOperator::identity(d).scale(1.0 / (d as f64).sqrt()));
    for j in 0..d {
        for k in (j + 1)..d {
            let mut sym = DMatrix::<Complex64>::zeros(d, d);
            sym[(j, k)] = Complex64::new(s2, 0.0);
            sym[(k, j)] = Complex64::new(s2, 0.0);
            elements.push(HermitianOperator::from_matrix(sym)?);

            let mut anti = DMatrix::<Complex64>::zeros(d, d);
            anti[(j, k)] = Complex64::new(0.0, -s2);
            anti[(k, j)] = Complex64::new(0.0, s2);
            elements.push(HermitianOperator::from_matrix(anti)?);
        }
    }
    for l in 1..d {
        let lf = l as f64;
        let norm = 1.0 / (lf * (lf + 1.0)).sqrt();
        let mut diag = vec![0.0; d];
        for v in diag.iter_mut().take(l) {
            *v = norm;
        }
        diag[l] = -lf * norm;
        elements.push(HermitianOperator::diagonal(&diag));
    }
    OperatorBasis::new(
        elements,
        BasisKind::Orthonormal,
        &ToleranceConfig::default(),
    )
}

/// Expands `h` in `basis`: Σ_j coeffs_j · basis_j = h.
pub fn expand<'a>(
    h: &HermitianOperator,
    basis: &'a OperatorBasis,
) -> Result<CoefficientVector<'a>> {
    if h.dim() != basis.dim() {
        return Err(Error::DimensionMismatch {
            expected: basis.dim(),
            found: h.dim(),
        });
    }
    let x = basis.solve_coords(&h.to_real_coords());
    Ok(CoefficientVector {
        basis,
        coeffs: x.iter().cloned().collect(),
    })
}

/// D with `D · expand(H, from) = expand(H, to)`, and its inverse transpose.
#[derive(Debug, Clone)]
pub struct ChangeOfBasis {
    pub matrix: DMatrix<f64>,
    pub inverse_transpose: DMatrix<f64>,
}

impl ChangeOfBasis {
    pub fn apply(&self, coeffs: &[f64]) -> Vec<f64> {
        (&self.matrix * DVector::from_column_slice(coeffs))
            .iter()
            .cloned()
            .collect()
    }

    pub fn apply_inverse_transpose(&self, v: &[f64]) -> Vec<f64> {
        (&self.inverse_transpose * DVector::from_column_slice(v))
            .iter()
            .cloned()
            .collect()
    }
}

pub fn change_of_basis(from: &OperatorBasis, to: &OperatorBasis) -> Result<ChangeOfBasis> {
    if from.dim() != to.dim() {
        return Err(Error::DimensionMismatch {
            expected: from.dim(),
            found: to.dim(),
        });
    }
    // Coefficients x_from and x_to of the same H satisfy T_from x_from = T_to x_to.
    let matrix = &to.inverse * &from.coords;
    let inverse = &from.inverse * &to.coords;
    Ok(ChangeOfBasis {
        matrix,
        inverse_transpose: inverse.transpose(),
    })
}
