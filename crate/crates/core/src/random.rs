//! Seeded ensembles. Every generator takes either an explicit seed or a
//! caller-owned RNG; ChaCha8 keeps streams identical across platforms.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::eigen::eig_hermitian;
use crate::error::{Error, Result};
use crate::operator::HermitianOperator;
use crate::tolerance::ToleranceConfig;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

/// d×d matrix with i.i.d. standard complex Gaussian entries.
pub fn ginibre<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DMatrix<Complex64> {
    DMatrix::from_fn(d, d, |_, _| complex_gaussian(rng))
}

/// Unit vector drawn uniformly from the complex sphere.
pub fn random_unit_vector<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DVector<Complex64> {
    loop {
        let v = DVector::from_fn(d, |_, _| complex_gaussian(rng));
        let n = v.norm();
        if n > 1e-8 {
            return v / Complex64::new(n, 0.0);
        }
    }
}

/// Hermitian operator (X + X†)/2 with X Ginibre.
pub fn random_hermitian<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<HermitianOperator> {
    check_dim(d)?;
    HermitianOperator::from_matrix(ginibre(d, rng))
}

/// Orthonormal basis of C^d from the eigenvectors of a random Hermitian operator.
pub fn random_orthonormal_basis<R: Rng + ?Sized>(
    d: usize,
    rng: &mut R,
    tol: &ToleranceConfig,
) -> Result<Vec<DVector<Complex64>>> {
    let h = random_hermitian(d, rng)?;
    let eig = eig_hermitian(&h, tol)?;
    Ok((0..d).map(|j| eig.vector(j)).collect())
}

pub(crate) fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::UnsupportedDimension(d));
    }
    Ok(())
}
