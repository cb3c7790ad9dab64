//! Positive cones of operator bases.
//!
//! Three constructions live here: the spectral decomposition placing any
//! effect in the cone of an augmented basis built from its eigenbasis, NNLS
//! membership tests for arbitrary bases, and a certificate that the cones
//! of an augmented basis and a MIC-POM share d² linearly independent
//! effects.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::augmented::{augmented_basis_from_onb, AugmentedBasis};
use crate::basis::{expand, orthonormal_operator_basis, BasisKind, OperatorBasis};
use crate::effect::{is_effect, validate_pom, Effect, MicPom};
use crate::eigen::eig_hermitian;
use crate::error::{Error, Result};
use crate::linalg::{nnls, numerical_rank};
use crate::operator::HermitianOperator;
use crate::random::{random_hermitian, rng_from_seed};
use crate::tolerance::ToleranceConfig;

/// Nonnegative coefficients of an operator over a basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConeDecomposition {
    pub kind: BasisKind,
    pub coeffs: Vec<f64>,
    pub residual: f64,
}

impl ConeDecomposition {
    /// Coefficients strictly above `threshold`.
    pub fn support(&self, threshold: f64) -> usize {
        self.coeffs.iter().filter(|c| **c > threshold).count()
    }

    pub fn min_coeff(&self) -> f64 {
        self.coeffs.iter().cloned().fold(f64::INFINITY, f64::min)
    }
}

/// Places `e` in the cone of the canonical augmented basis built on its
/// eigenbasis: coefficients λ_j / c on the first d elements, zero elsewhere.
pub fn cone_decompose_spectral(
    e: &Effect,
    tol: &ToleranceConfig,
) -> Result<(AugmentedBasis, ConeDecomposition)> {
    let d = e.dim();
    let eig = eig_hermitian(e.op(), tol)?;
    let onb: Vec<_> = (0..d).map(|j| eig.vector(j)).collect();
    let basis = augmented_basis_from_onb(&onb, tol)?;
    let mut coeffs = vec![0.0; d * d];
    for (j, lambda) in eig.values.iter().enumerate() {
        coeffs[j] = lambda.max(0.0) / basis.c();
    }
    let recon = HermitianOperator::linear_combination(&coeffs, basis.elements())?;
    let residual = (&recon - e.op()).norm();
    Ok((
        basis,
        ConeDecomposition {
            kind: BasisKind::Augmented,
            coeffs,
            residual,
        },
    ))
}

/// Nonnegative coefficients reproducing `h` over `basis` within
/// `tol.residual`, or `None` when the NNLS optimum misses by more.
///
/// `basis` has d² independent elements, so the least-squares problem is
/// strictly convex and its minimizer is unique.
pub fn cone_membership(
    h: &HermitianOperator,
    basis: &OperatorBasis,
    tol: &ToleranceConfig,
) -> Result<Option<ConeDecomposition>> {
    if h.dim() != basis.dim() {
        return Err(Error::DimensionMismatch {
            expected: basis.dim(),
            found: h.dim(),
        });
    }
    let direct = expand(h, basis)?.coeffs;
    let coeffs = if direct.iter().all(|c| *c >= -tol.psd_slack) {
        direct.into_iter().map(|c| c.max(0.0)).collect::<Vec<_>>()
    } else {
        let sol = nnls(basis.coordinate_matrix(), &h.to_real_coords());
        sol.x.iter().cloned().collect()
    };
    let residual = (&basis.recombine(&coeffs)? - h).norm();
    if residual < tol.residual {
        Ok(Some(ConeDecomposition {
            kind: basis.kind(),
            coeffs,
            residual,
        }))
    } else {
        Ok(None)
    }
}

/// E_δ = I/d + δ Σ_{j>d} B_j with δ = ε / (2‖Σ_{j>d} B_j‖).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InteriorPoint {
    pub e_delta: HermitianOperator,
    pub delta: f64,
    pub epsilon: f64,
    /// ‖E_δ − I/d‖, equal to ε/2 up to rounding.
    pub distance: f64,
}

pub fn interior_point_edelta(
    b: &AugmentedBasis,
    epsilon: f64,
    tol: &ToleranceConfig,
) -> Result<InteriorPoint> {
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    let d = b.dim();
    let tail = HermitianOperator::sum(&b.elements()[d..])?;
    let delta = epsilon / (2.0 * tail.norm());
    let centre = HermitianOperator::identity(d).scale(1.0 / d as f64);
    let e_delta = &centre + &tail.scale(delta);
    let check = is_effect(&e_delta, tol)?;
    if let Some(eigenvalue) = check.witness {
        return Err(Error::EpsilonTooLarge {
            epsilon,
            eigenvalue,
        });
    }
    let distance = (&e_delta - &centre).norm();
    Ok(InteriorPoint {
        e_delta,
        delta,
        epsilon,
        distance,
    })
}

/// Default ball radius around I/d for a given dimension.
pub fn default_epsilon(d: usize) -> f64 {
    1.0 / (4.0 * d as f64)
}

/// Halving budget for ε and for the witness radius γ.
pub const MAX_HALVINGS: usize = 20;

/// Rounds of random-direction sampling after the orthonormal ball fails.
pub const RANDOM_ROUNDS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessStrategy {
    OrthonormalBall,
    RandomBall,
}

/// Serialized proof that C(B) ∩ C(M) contains d² linearly independent effects.
///
/// Stores both bases so the certificate can be re-checked without
/// reconstructing anything.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpanCertificate {
    pub dim: usize,
    pub epsilon: f64,
    pub delta: f64,
    pub gamma: f64,
    pub e_delta: HermitianOperator,
    pub augmented_c: f64,
    pub augmented_gamma: f64,
    pub augmented_elements: Vec<HermitianOperator>,
    pub mic_elements: Vec<HermitianOperator>,
    pub witnesses: Vec<HermitianOperator>,
    pub augmented_coeffs: Vec<Vec<f64>>,
    pub mic_coeffs: Vec<Vec<f64>>,
    pub rank: usize,
    pub strategy: WitnessStrategy,
    pub tolerances: ToleranceConfig,
}

fn rank_of(ops: &[HermitianOperator], tol: &ToleranceConfig) -> usize {
    let n = ops.len();
    if n == 0 {
        return 0;
    }
    let m = ops[0].to_real_coords().len();
    let mut coords = DMatrix::zeros(m, n);
    for (j, op) in ops.iter().enumerate() {
        coords.set_column(j, &op.to_real_coords());
    }
    numerical_rank(&coords, tol.rank_cutoff).rank
}

struct Memberships {
    augmented: Vec<Vec<f64>>,
    mic: Vec<Vec<f64>>,
}

/// All witnesses are effects lying in both cones, and together span.
fn check_witnesses(
    witnesses: &[HermitianOperator],
    aug: &OperatorBasis,
    mic: &OperatorBasis,
    tol: &ToleranceConfig,
) -> Result<Option<Memberships>> {
    let mut out = Memberships {
        augmented: Vec::with_capacity(witnesses.len()),
        mic: Vec::with_capacity(witnesses.len()),
    };
    for w in witnesses {
        if !is_effect(w, tol)?.is_effect {
            return Ok(None);
        }
        let (Some(a), Some(m)) = (cone_membership(w, aug, tol)?, cone_membership(w, mic, tol)?)
        else {
            return Ok(None);
        };
        out.augmented.push(a.coeffs);
        out.mic.push(m.coeffs);
    }
    let n = aug.dim() * aug.dim();
    if rank_of(witnesses, tol) < n {
        return Ok(None);
    }
    Ok(Some(out))
}

/// Builds d² effects in C(B) ∩ C(M) whose span is the whole operator space.
///
/// Finds E_δ strictly inside both cones (halving ε if needed), estimates a
/// ball radius γ around it from the smallest membership coefficient and the
/// smallest singular value of each basis map, and emits E_δ + (γ/2)·W_k for
/// the orthonormal basis W. Every witness is re-verified; on failure γ is
/// halved, and after that random directions drawn from `seed` are tried.
pub fn intersection_span_certificate(
    b: &AugmentedBasis,
    m: &MicPom,
    epsilon: f64,
    seed: u64,
    tol: &ToleranceConfig,
) -> Result<SpanCertificate> {
    let d = b.dim();
    if m.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: m.dim(),
        });
    }
    let aug = b.basis()?;
    let mic = m.basis();

    let mut eps = epsilon;
    let mut interior = None;
    for _ in 0..=MAX_HALVINGS {
        match interior_point_edelta(b, eps, tol) {
            Ok(ip) => {
                let min_b = min_of(&expand(&ip.e_delta, aug)?.coeffs);
                let min_m = min_of(&expand(&ip.e_delta, mic)?.coeffs);
                if min_b > tol.psd_slack && min_m > tol.psd_slack {
                    interior = Some((ip, min_b, min_m));
                    break;
                }
            }
            Err(Error::EpsilonTooLarge { .. }) => {}
            Err(e) => return Err(e),
        }
        eps *= 0.5;
    }
    let (ip, min_b, min_m) = interior.ok_or_else(|| Error::CertificateNotFound {
        stage: format!("no interior point E_delta in both cones down to epsilon {eps:e}"),
    })?;

    let eig = eig_hermitian(&ip.e_delta, tol)?;
    let effect_margin = eig.min().min(1.0 - eig.max());
    let mut gamma = (min_b * aug.rank_info().smallest)
        .min(min_m * mic.rank_info().smallest)
        .min(effect_margin);

    let w = orthonormal_operator_basis(d)?;
    let finish = |gamma: f64, witnesses: Vec<HermitianOperator>, mem: Memberships, strategy| {
        SpanCertificate {
            dim: d,
            epsilon: ip.epsilon,
            delta: ip.delta,
            gamma,
            e_delta: ip.e_delta.clone(),
            augmented_c: b.c(),
            augmented_gamma: b.gamma(),
            augmented_elements: b.elements().to_vec(),
            mic_elements: m.pom().operators(),
            rank: d * d,
            witnesses,
            augmented_coeffs: mem.augmented,
            mic_coeffs: mem.mic,
            strategy,
            tolerances: *tol,
        }
    };

    for _ in 0..=MAX_HALVINGS {
        let witnesses: Vec<_> = w
            .elements()
            .iter()
            .map(|wk| &ip.e_delta + &wk.scale(gamma / 2.0))
            .collect();
        if let Some(mem) = check_witnesses(&witnesses, aug, mic, tol)? {
            return Ok(finish(
                gamma,
                witnesses,
                mem,
                WitnessStrategy::OrthonormalBall,
            ));
        }
        gamma *= 0.5;
    }

    let mut rng = rng_from_seed(seed);
    for _ in 0..RANDOM_ROUNDS {
        let mut witnesses = Vec::with_capacity(d * d);
        for _ in 0..d * d {
            let dir = random_hermitian(d, &mut rng)?;
            let dir = dir.scale(1.0 / dir.norm());
            witnesses.push(&ip.e_delta + &dir.scale(gamma / 2.0));
        }
        if let Some(mem) = check_witnesses(&witnesses, aug, mic, tol)? {
            return Ok(finish(gamma, witnesses, mem, WitnessStrategy::RandomBall));
        }
    }
    Err(Error::CertificateNotFound {
        stage: format!("witness verification failed down to gamma {gamma:e}"),
    })
}

fn min_of(v: &[f64]) -> f64 {
    v.iter().cloned().fold(f64::INFINITY, f64::min)
}

/// Result of re-checking a serialized certificate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateCheck {
    pub rank: usize,
    pub witnesses_are_effects: bool,
    pub min_coeff: f64,
    pub max_augmented_residual: f64,
    pub max_mic_residual: f64,
    pub mic_is_pom: bool,
    pub augmented_rank: usize,
    pub mic_rank: usize,
    pub e_delta_distance: f64,
    pub failures: Vec<String>,
}

impl CertificateCheck {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Re-verifies a certificate from its stored data alone.
pub fn verify_certificate(
    cert: &SpanCertificate,
    tol: &ToleranceConfig,
) -> Result<CertificateCheck> {
    let d = cert.dim;
    let n = d * d;
    let mut failures = Vec::new();
    let all_ops = cert
        .augmented_elements
        .iter()
        .chain(&cert.mic_elements)
        .chain(&cert.witnesses)
        .chain(std::iter::once(&cert.e_delta));
    for op in all_ops {
        if op.dim() != d {
            return Err(Error::InvalidCertificate(format!(
                "operator of dimension {} in a d = {d} certificate",
                op.dim()
            )));
        }
    }
    let counts = [
        cert.augmented_elements.len(),
        cert.mic_elements.len(),
        cert.witnesses.len(),
        cert.augmented_coeffs.len(),
        cert.mic_coeffs.len(),
    ];
    if counts.iter().any(|c| *c != n)
        || cert
            .augmented_coeffs
            .iter()
            .chain(&cert.mic_coeffs)
            .any(|c| c.len() != n)
    {
        return Err(Error::InvalidCertificate(format!(
            "expected {n} elements, witnesses and coefficient rows of length {n}"
        )));
    }

    let augmented_rank = rank_of(&cert.augmented_elements, tol);
    let mic_rank = rank_of(&cert.mic_elements, tol);
    if augmented_rank < n {
        failures.push(format!("augmented elements have rank {augmented_rank}"));
    }
    if mic_rank < n {
        failures.push(format!("MIC-POM elements have rank {mic_rank}"));
    }
    let mic_is_pom = validate_pom(&cert.mic_elements, tol)?.passed();
    if !mic_is_pom {
        failures.push("MIC-POM elements do not form a POM".into());
    }

    let mut witnesses_are_effects = true;
    let mut min_coeff = f64::INFINITY;
    let mut max_aug = 0.0_f64;
    let mut max_mic = 0.0_f64;
    for (k, w) in cert.witnesses.iter().enumerate() {
        if !is_effect(w, tol)?.is_effect {
            witnesses_are_effects = false;
            failures.push(format!("witness {k} is not an effect"));
        }
        let a = &cert.augmented_coeffs[k];
        let m = &cert.mic_coeffs[k];
        min_coeff = min_coeff.min(min_of(a)).min(min_of(m));
        let ra = (&HermitianOperator::linear_combination(a, &cert.augmented_elements)? - w).norm();
        let rm = (&HermitianOperator::linear_combination(m, &cert.mic_elements)? - w).norm();
        max_aug = max_aug.max(ra);
        max_mic = max_mic.max(rm);
    }
    if min_coeff < -tol.psd_slack {
        failures.push(format!("negative cone coefficient {min_coeff:e}"));
    }
    if !(max_aug < tol.residual) {
        failures.push(format!("augmented reconstruction residual {max_aug:e}"));
    }
    if !(max_mic < tol.residual) {
        failures.push(format!("MIC-POM reconstruction residual {max_mic:e}"));
    }
    let rank = rank_of(&cert.witnesses, tol);
    if rank < n {
        failures.push(format!("witnesses span only rank {rank}"));
    }
    if rank != cert.rank {
        failures.push(format!("stored rank {} but recomputed {rank}", cert.rank));
    }
    let centre = HermitianOperator::identity(d).scale(1.0 / d as f64);
    let e_delta_distance = (&cert.e_delta - &centre).norm();
    if !((e_delta_distance - cert.epsilon / 2.0).abs() <= tol.residual) {
        failures.push(format!(
            "‖E_delta − I/d‖ = {e_delta_distance} differs from epsilon/2 = {}",
            cert.epsilon / 2.0
        ));
    }

    Ok(CertificateCheck {
        rank,
        witnesses_are_effects,
        min_coeff,
        max_augmented_residual: max_aug,
        max_mic_residual: max_mic,
        mic_is_pom,
        augmented_rank,
        mic_rank,
        e_delta_distance,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::augmented::computational_onb;
    use crate::effect::{random_mic_pom, sic_mic_pom};

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    #[test]
    fn spectral_decomposition_of_diagonal_effect() {
        let e = Effect::new(HermitianOperator::diagonal(&[0.5, 0.25]), &tol()).unwrap();
        let (b, dec) = cone_decompose_spectral(&e, &tol()).unwrap();
        let gamma = 2.0 + 0.5f64.sqrt();
        assert!((b.gamma() - gamma).abs() < 1e-12);
        // λ_j / c = λ_j Γ.
        assert!((dec.coeffs[0] - 0.5 * gamma).abs() < 1e-12);
        assert!((dec.coeffs[1] - 0.25 * gamma).abs() < 1e-12);
        assert!((dec.coeffs[0] - 1.35355).abs() < 1e-5);
        assert!((dec.coeffs[1] - 0.67678).abs() < 1e-5);
        assert_eq!(&dec.coeffs[2..], &[0.0, 0.0]);
        assert!(dec.residual < 1e-12);
    }

    #[test]
    fn spectral_decomposition_of_zero_and_basis_element() {
        let (_, dec) = cone_decompose_spectral(&Effect::zero(3), &tol()).unwrap();
        assert!(dec.coeffs.iter().all(|c| *c == 0.0));

        let b = augmented_basis_from_onb(&computational_onb(2), &tol()).unwrap();
        let e = Effect::new(b.elements()[0].clone(), &tol()).unwrap();
        let (_, dec) = cone_decompose_spectral(&e, &tol()).unwrap();
        assert!((dec.coeffs[0] - 1.0).abs() < 1e-12);
        assert!(dec.coeffs[1..].iter().all(|c| c.abs() < 1e-12));
    }

    #[test]
    fn maximally_mixed_in_mic_cone() {
        for mic in [
            sic_mic_pom(2, &tol()).unwrap(),
            random_mic_pom(3, 1, &tol()).unwrap(),
        ] {
            let d = mic.dim();
            let h = HermitianOperator::identity(d).scale(1.0 / d as f64);
            let dec = cone_membership(&h, mic.basis(), &tol()).unwrap().unwrap();
            for c in &dec.coeffs {
                assert!((c - 1.0 / d as f64).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn negative_operator_is_outside_every_effect_cone() {
        let sic = sic_mic_pom(2, &tol()).unwrap();
        let h = HermitianOperator::basis_projector(2, 0).scale(-1.0);
        assert!(cone_membership(&h, sic.basis(), &tol()).unwrap().is_none());
        let b = augmented_basis_from_onb(&computational_onb(2), &tol()).unwrap();
        assert!(cone_membership(&h, b.basis().unwrap(), &tol())
            .unwrap()
            .is_none());
    }

    #[test]
    fn edelta_coefficients_and_distance() {
        for d in 2..=4 {
            let b = augmented_basis_from_onb(&computational_onb(d), &tol()).unwrap();
            let eps = default_epsilon(d);
            let ip = interior_point_edelta(&b, eps, &tol()).unwrap();
            assert!(ip.delta > 0.0);
            assert!((ip.distance - eps / 2.0).abs() < 1e-12);
            let dec = cone_membership(&ip.e_delta, b.basis().unwrap(), &tol())
                .unwrap()
                .unwrap();
            let head = 1.0 / (b.c() * d as f64);
            for (j, c) in dec.coeffs.iter().enumerate() {
                let want = if j < d { head } else { ip.delta };
                assert!((c - want).abs() < 1e-10, "d={d} j={j}: {c} vs {want}");
                assert!(*c > tol().psd_slack);
            }
        }
    }

    #[test]
    fn edelta_rejects_huge_epsilon() {
        let b = augmented_basis_from_onb(&computational_onb(2), &tol()).unwrap();
        assert!(matches!(
            interior_point_edelta(&b, 50.0, &tol()),
            Err(Error::EpsilonTooLarge { .. })
        ));
        assert!(interior_point_edelta(&b, -1.0, &tol()).is_err());
    }

    #[test]
    fn qubit_certificate_with_sic() {
        let b = augmented_basis_from_onb(&computational_onb(2), &tol()).unwrap();
        let m = sic_mic_pom(2, &tol()).unwrap();
        let cert = intersection_span_certificate(&b, &m, default_epsilon(2), 0, &tol()).unwrap();
        assert_eq!(cert.rank, 4);
        assert_eq!(cert.strategy, WitnessStrategy::OrthonormalBall);
        let check = verify_certificate(&cert, &tol()).unwrap();
        assert!(check.passed(), "{:?}", check.failures);
        for w in &cert.witnesses {
            assert!(is_effect(w, &tol()).unwrap().is_effect);
        }
    }

    #[test]
    fn tampered_certificate_fails() {
        let b = augmented_basis_from_onb(&computational_onb(2), &tol()).unwrap();
        let m = sic_mic_pom(2, &tol()).unwrap();
        let mut cert =
            intersection_span_certificate(&b, &m, default_epsilon(2), 0, &tol()).unwrap();
        cert.witnesses[1] = cert.witnesses[0].clone();
        let check = verify_certificate(&cert, &tol()).unwrap();
        assert!(!check.passed());

        cert.mic_coeffs.pop();
        assert!(matches!(
            verify_certificate(&cert, &tol()),
            Err(Error::InvalidCertificate(_))
        ));
    }
}
