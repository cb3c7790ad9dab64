//! Cyclic Jacobi eigensolver for small dense Hermitian matrices.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operator::HermitianOperator;
use crate::tolerance::ToleranceConfig;

/// Sweep limit before reporting non-convergence.
pub const MAX_SWEEPS: usize = 64;

/// Eigenvalues in descending order with matching orthonormal eigenvector columns.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: DMatrix<Complex64>,
}

impl Eigen {
    pub fn max(&self) -> f64 {
        self.values[0]
    }

    pub fn min(&self) -> f64 {
        *self.values.last().expect("non-empty spectrum")
    }

    pub fn vector(&self, j: usize) -> DVector<Complex64> {
        self.vectors.column(j).into_owned()
    }

    /// V f(Λ) V†.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> Result<HermitianOperator> {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for (j, &lambda) in self.values.iter().enumerate() {
            let w = Complex64::new(f(lambda), 0.0);
            for r in 0..n {
                scaled[(r, j)] *= w;
            }
        }
        HermitianOperator::from_matrix(scaled * self.vectors.adjoint())
    }
}

fn off_diagonal_norm(a: &DMatrix<Complex64>) -> f64 {
    let n = a.nrows();
    let mut s = 0.0;
    for j in 0..n {
        for k in 0..n {
            if j != k {
                s += a[(j, k)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Diagonalizes `op` with cyclic Jacobi rotations.
///
/// Converged once the off-diagonal Frobenius norm drops below
/// `tol.eig_offdiag · max(1, ‖op‖)`.
pub fn eig_hermitian(op: &HermitianOperator, tol: &ToleranceConfig) -> Result<Eigen> {
    let n = op.dim();
    let mut a = op.matrix().clone();
    let mut v = DMatrix::<Complex64>::identity(n, n);
    let threshold = tol.eig_offdiag * op.norm().max(1.0);

    let mut sweeps = 0;
    let mut off = off_diagonal_norm(&a);
    while off >= threshold {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                off_norm: off,
            });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        sweeps += 1;
        off = off_diagonal_norm(&a);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[(y, y)].re.total_cmp(&a[(x, x)].re));
    let values = order.iter().map(|&j| a[(j, j)].re).collect();
    let mut vectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &v.column(src));
    }
    Ok(Eigen { values, vectors })
}

/// Zeroes a[p][q] with the unitary U = diag(1, e^{-iφ}) · R(θ), where φ = arg a[p][q].
fn rotate(a: &mut DMatrix<Complex64>, v: &mut DMatrix<Complex64>, p: usize, q: usize) {
    let g = a[(p, q)];
    let mag = g.norm();
    if mag == 0.0 {
        return;
    }
    let phase = g / mag;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let tau = (aqq - app) / (2.0 * mag);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // Columns of U restricted to (p, q).
    let u_pp = Complex64::new(c, 0.0);
    let u_pq = Complex64::new(s, 0.0);
    let u_qp = -phase.conj() * s;
    let u_qq = phase.conj() * c;

    let n = a.nrows();
    for r in 0..n {
        let arp = a[(r, p)];
        let arq = a[(r, q)];
        a[(r, p)] = arp * u_pp + arq * u_qp;
        a[(r, q)] = arp * u_pq + arq * u_qq;
        let vrp = v[(r, p)];
        let vrq = v[(r, q)];
        v[(r, p)] = vrp * u_pp + vrq * u_qp;
        v[(r, q)] = vrp * u_pq + vrq * u_qq;
    }
    for col in 0..n {
        let apc = a[(p, col)];
        let aqc = a[(q, col)];
        a[(p, col)] = u_pp.conj() * apc + u_qp.conj() * aqc;
        a[(q, col)] = u_pq.conj() * apc + u_qq.conj() * aqc;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
}

/// Largest eigenvalue.
pub fn lambda_max(op: &HermitianOperator, tol: &ToleranceConfig) -> Result<f64> {
    Ok(eig_hermitian(op, tol)?.max())
}

/// Positive square root of a positive semidefinite operator; negative
/// eigenvalues from rounding are clamped to zero.
pub fn psd_sqrt(op: &HermitianOperator, tol: &ToleranceConfig) -> Result<HermitianOperator> {
    eig_hermitian(op, tol)?.map_spectrum(|x| x.max(0.0).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn reconstruct(e: &Eigen) -> DMatrix<Complex64> {
        let diag = DMatrix::from_diagonal(&DVector::from_iterator(
            e.values.len(),
            e.values.iter().map(|x| c(*x, 0.0)),
        ));
        &e.vectors * diag * e.vectors.adjoint()
    }

    #[test]
    fn identity_and_diagonal() {
        let tol = ToleranceConfig::default();
        let e = eig_hermitian(&HermitianOperator::identity(2), &tol).unwrap();
        assert_eq!(e.values, vec![1.0, 1.0]);

        let e = eig_hermitian(&HermitianOperator::diagonal(&[0.2, 0.7]), &tol).unwrap();
        assert_eq!(e.values, vec![0.7, 0.2]);
    }

    #[test]
    fn augmented_sum_spectrum_matches_characteristic_polynomial() {
        // G = I + |+><+| + |+i><+i| = [[2, (1-i)/2], [(1+i)/2, 2]].
        // Characteristic polynomial: (2 - x)^2 = |(1-i)/2|^2 = 1/2.
        let m =
            DMatrix::from_row_slice(2, 2, &[c(2.0, 0.0), c(0.5, -0.5), c(0.5, 0.5), c(2.0, 0.0)]);
        let g = HermitianOperator::from_matrix(m).unwrap();
        let e = eig_hermitian(&g, &ToleranceConfig::default()).unwrap();
        let r = 0.5f64.sqrt();
        assert!((e.values[0] - (2.0 + r)).abs() < 1e-14);
        assert!((e.values[1] - (2.0 - r)).abs() < 1e-14);
        assert!((e.values[0] - 2.70711).abs() < 1e-5);
    }

    #[test]
    fn complex_3x3_round_trip() {
        let m = DMatrix::from_row_slice(
            3,
            3,
            &[
                c(1.0, 0.0),
                c(0.3, 0.4),
                c(0.0, -0.2),
                c(0.3, -0.4),
                c(-0.5, 0.0),
                c(0.9, 0.1),
                c(0.0, 0.2),
                c(0.9, -0.1),
                c(0.25, 0.0),
            ],
        );
        let h = HermitianOperator::from_matrix(m).unwrap();
        let e = eig_hermitian(&h, &ToleranceConfig::default()).unwrap();
        assert!((reconstruct(&e) - h.matrix()).norm() < 1e-12);
        let gram = e.vectors.adjoint() * &e.vectors;
        assert!((gram - DMatrix::identity(3, 3)).norm() < 1e-12);
        assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn degenerate_spectrum() {
        let e = eig_hermitian(
            &HermitianOperator::diagonal(&[0.5, 0.5, 0.5, 0.1]),
            &ToleranceConfig::default(),
        )
        .unwrap();
        assert_eq!(e.values, vec![0.5, 0.5, 0.5, 0.1]);
    }

    #[test]
    fn sqrt_squares_back() {
        let h = HermitianOperator::diagonal(&[0.25, 0.09]);
        let s = psd_sqrt(&h, &ToleranceConfig::default()).unwrap();
        assert!((s.entry(0, 0).re - 0.5).abs() < 1e-15);
        assert!((s.entry(1, 1).re - 0.3).abs() < 1e-15);
    }
}
