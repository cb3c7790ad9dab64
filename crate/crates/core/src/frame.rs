//! Frame functions on effects and the reconstruction of the density
//! operator they encode.
//!
//! A frame function is treated as an oracle: the reconstruction only ever
//! queries it on effects, so hidden-state experiments, user-tabulated
//! functions and deliberately non-additive instances share one interface.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::augmented::AugmentedBasis;
use crate::basis::{change_of_basis, expand, BasisKind, OperatorBasis};
use crate::cone::{verify_certificate, SpanCertificate};
use crate::effect::{max_scale, random_effect_from, DensityOperator, Effect, MicPom};
use crate::eigen::{eig_hermitian, psd_sqrt};
use crate::error::{Error, Result};
use crate::operator::{hs_inner, HermitianOperator};
use crate::random::rng_from_seed;
use crate::tolerance::ToleranceConfig;

/// Probability assignment on effects.
pub trait FrameFunction: Send + Sync {
    fn dim(&self) -> usize;
    fn evaluate(&self, effect: &Effect) -> f64;
}

/// f(E) = Tr(ρE).
#[derive(Debug, Clone)]
pub struct BornFrame {
    pub state: DensityOperator,
}

impl FrameFunction for BornFrame {
    fn dim(&self) -> usize {
        self.state.dim()
    }

    fn evaluate(&self, effect: &Effect) -> f64 {
        hs_inner(self.state.op(), effect.op()).expect("frame dimension checked by caller")
    }
}

/// f(E) = e · values, where e holds the coefficients of E in `basis`.
#[derive(Debug, Clone)]
pub struct TabulatedFrame {
    pub basis: OperatorBasis,
    pub values: Vec<f64>,
}

impl TabulatedFrame {
    pub fn new(basis: OperatorBasis, values: Vec<f64>) -> Result<Self> {
        if values.len() != basis.len() {
            return Err(Error::DimensionMismatch {
                expected: basis.len(),
                found: values.len(),
            });
        }
        Ok(Self { basis, values })
    }

    /// Tabulates `f` on the elements of `basis` (which must be effects).
    pub fn from_frame<F: FrameFunction + ?Sized>(
        f: &F,
        basis: OperatorBasis,
        tol: &ToleranceConfig,
    ) -> Result<Self> {
        let values = frame_vector(f, &basis, tol)?;
        Self::new(basis, values)
    }
}

impl FrameFunction for TabulatedFrame {
    fn dim(&self) -> usize {
        self.basis.dim()
    }

    fn evaluate(&self, effect: &Effect) -> f64 {
        expand(effect.op(), &self.basis)
            .expect("frame dimension checked by caller")
            .dot(&self.values)
    }
}

/// f(E) = (Tr ρE)²: bounded in [0, 1] and equal to 1 on the identity, but
/// not additive.
#[derive(Debug, Clone)]
pub struct SquareFrame {
    pub state: DensityOperator,
}

impl FrameFunction for SquareFrame {
    fn dim(&self) -> usize {
        self.state.dim()
    }

    fn evaluate(&self, effect: &Effect) -> f64 {
        let p = hs_inner(self.state.op(), effect.op()).expect("frame dimension checked by caller");
        p * p
    }
}

/// The frame kinds that have a file representation.
#[derive(Debug, Clone)]
pub enum Frame {
    Born(BornFrame),
    Tabulated(TabulatedFrame),
    AdversarialSquare(SquareFrame),
}

impl FrameFunction for Frame {
    fn dim(&self) -> usize {
        match self {
            Frame::Born(f) => f.dim(),
            Frame::Tabulated(f) => f.dim(),
            Frame::AdversarialSquare(f) => f.dim(),
        }
    }

    fn evaluate(&self, effect: &Effect) -> f64 {
        match self {
            Frame::Born(f) => f.evaluate(effect),
            Frame::Tabulated(f) => f.evaluate(effect),
            Frame::AdversarialSquare(f) => f.evaluate(effect),
        }
    }
}

/// Frame file format, tagged by `kind`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FrameJson {
    Born {
        state: HermitianOperator,
    },
    Tabulated {
        basis: Vec<HermitianOperator>,
        values: Vec<f64>,
    },
    AdversarialSquare {
        state: HermitianOperator,
    },
}

impl FrameJson {
    pub fn into_frame(self, tol: &ToleranceConfig) -> Result<Frame> {
        Ok(match self {
            FrameJson::Born { state } => Frame::Born(BornFrame {
                state: DensityOperator::new(state, tol)?,
            }),
            FrameJson::AdversarialSquare { state } => Frame::AdversarialSquare(SquareFrame {
                state: DensityOperator::new(state, tol)?,
            }),
            FrameJson::Tabulated { basis, values } => Frame::Tabulated(TabulatedFrame::new(
                OperatorBasis::new(basis, BasisKind::Generic, tol)?,
                values,
            )?),
        })
    }
}

impl From<&Frame> for FrameJson {
    fn from(frame: &Frame) -> Self {
        match frame {
            Frame::Born(f) => FrameJson::Born {
                state: f.state.op().clone(),
            },
            Frame::AdversarialSquare(f) => FrameJson::AdversarialSquare {
                state: f.state.op().clone(),
            },
            Frame::Tabulated(f) => FrameJson::Tabulated {
                basis: f.basis.elements().to_vec(),
                values: f.values.clone(),
            },
        }
    }
}

fn check_frame_dim<F: FrameFunction + ?Sized>(f: &F, d: usize) -> Result<()> {
    if f.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: f.dim(),
        });
    }
    Ok(())
}

/// Draws E₁ at random and E₂ = S F S with S = √(I − E₁) and F a random
/// effect, so E₁ + E₂ ≤ I by construction.
pub fn coexisting_pair<R: Rng + ?Sized>(
    d: usize,
    rng: &mut R,
    tol: &ToleranceConfig,
) -> Result<(Effect, Effect)> {
    let e1 = random_effect_from(d, rng, tol)?;
    let s = psd_sqrt(&(&HermitianOperator::identity(d) - e1.op()), tol)?;
    let f = random_effect_from(d, rng, tol)?;
    let e2 = Effect::new(f.op().sandwich(&s)?, tol)?;
    Ok((e1, e2))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdditivityReport {
    pub trials: usize,
    /// max |f(E₁) + f(E₂) − f(E₁ + E₂)| over the sampled pairs.
    pub max_violation: f64,
    pub worst_trial: usize,
    pub identity_value: f64,
    pub identity_violation: f64,
    pub passed: bool,
}

/// Samples coexisting pairs and measures the additivity defect. Trial 0 is
/// always the pair E₁ = E₂ = I/2; the rest come from [`coexisting_pair`].
pub fn check_additivity<F: FrameFunction + ?Sized>(
    f: &F,
    trials: usize,
    seed: u64,
    tol: &ToleranceConfig,
) -> Result<AdditivityReport> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let d = f.dim();
    let mut rng = rng_from_seed(seed);
    let half = Effect::new(HermitianOperator::identity(d).scale(0.5), tol)?;
    let mut max_violation = 0.0_f64;
    let mut worst_trial = 0;
    for t in 0..trials {
        let (e1, e2) = if t == 0 {
            (half.clone(), half.clone())
        } else {
            coexisting_pair(d, &mut rng, tol)?
        };
        let sum = Effect::new(e1.op() + e2.op(), tol)?;
        let v = (f.evaluate(&e1) + f.evaluate(&e2) - f.evaluate(&sum)).abs();
        if v > max_violation {
            max_violation = v;
            worst_trial = t;
        }
    }
    let identity_value = f.evaluate(&Effect::identity(d));
    let identity_violation = (identity_value - 1.0).abs();
    Ok(AdditivityReport {
        trials,
        max_violation,
        worst_trial,
        identity_value,
        identity_violation,
        passed: max_violation <= tol.residual && identity_violation <= tol.residual,
    })
}

/// Smallest and largest value of `f` over `samples` seeded random effects
/// plus the zero and identity effects.
pub fn sample_range<F: FrameFunction + ?Sized>(
    f: &F,
    samples: usize,
    seed: u64,
    tol: &ToleranceConfig,
) -> Result<(f64, f64)> {
    let d = f.dim();
    let mut rng = rng_from_seed(seed);
    let mut lo = f
        .evaluate(&Effect::zero(d))
        .min(f.evaluate(&Effect::identity(d)));
    let mut hi = f
        .evaluate(&Effect::zero(d))
        .max(f.evaluate(&Effect::identity(d)));
    for _ in 0..samples {
        let v = f.evaluate(&random_effect_from(d, &mut rng, tol)?);
        lo = lo.min(v);
        hi = hi.max(v);
    }
    Ok((lo, hi))
}

/// Component j is f(basis_j); every element must be an effect.
pub fn frame_vector<F: FrameFunction + ?Sized>(
    f: &F,
    basis: &OperatorBasis,
    tol: &ToleranceConfig,
) -> Result<Vec<f64>> {
    check_frame_dim(f, basis.dim())?;
    basis
        .elements()
        .iter()
        .map(|op| Ok(f.evaluate(&Effect::new(op.clone(), tol)?)))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// Effects in the verification set of [`reconstruct_density`].
pub const VERIFICATION_EFFECTS: usize = 200;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReconstructionReport {
    pub rho_hat: HermitianOperator,
    pub trace: f64,
    pub min_eigenvalue: f64,
    /// max |f(E) − Tr(ρ̂E)| over the verification effects.
    pub max_deviation: f64,
    pub test_effects: usize,
    pub verdict: Verdict,
    pub violated: Vec<String>,
}

/// Recovers ρ̂ from the values of `f` on a MIC-POM.
///
/// With C the change of basis from MIC-POM coordinates to coordinates in
/// the orthonormal basis `onb`, the orthonormal coordinates of ρ̂ are
/// C⁻ᵀ f_M. The result is checked against `f` on a seeded set of random
/// effects.
pub fn reconstruct_density<F: FrameFunction + ?Sized>(
    f: &F,
    mic: &MicPom,
    onb: &OperatorBasis,
    seed: u64,
    tol: &ToleranceConfig,
) -> Result<ReconstructionReport> {
    if onb.kind() != BasisKind::Orthonormal {
        return Err(Error::InvalidArgument(
            "reconstruction needs an orthonormal operator basis".into(),
        ));
    }
    if onb.dim() != mic.dim() {
        return Err(Error::DimensionMismatch {
            expected: mic.dim(),
            found: onb.dim(),
        });
    }
    let f_mic = frame_vector(f, mic.basis(), tol)?;
    let change = change_of_basis(mic.basis(), onb)?;
    let c_onb = change.apply_inverse_transpose(&f_mic);
    let rho_hat = onb.recombine(&c_onb)?;

    let d = mic.dim();
    let mut rng = rng_from_seed(seed);
    let mut max_deviation = 0.0_f64;
    for _ in 0..VERIFICATION_EFFECTS {
        let e = random_effect_from(d, &mut rng, tol)?;
        let dev = (f.evaluate(&e) - hs_inner(&rho_hat, e.op())?).abs();
        max_deviation = max_deviation.max(dev);
    }

    let trace = rho_hat.trace();
    let min_eigenvalue = eig_hermitian(&rho_hat, tol)?.min();
    let mut violated = Vec::new();
    if !((trace - 1.0).abs() <= tol.residual) {
        violated.push("unit-trace".to_string());
    }
    if !(min_eigenvalue >= -tol.psd_slack) {
        violated.push("positivity".to_string());
    }
    if !(max_deviation < tol.residual) {
        violated.push("born-rule".to_string());
    }
    Ok(ReconstructionReport {
        rho_hat,
        trace,
        min_eigenvalue,
        max_deviation,
        test_effects: VERIFICATION_EFFECTS,
        verdict: if violated.is_empty() {
            Verdict::Pass
        } else {
            Verdict::Fail
        },
        violated,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConsistencyReport {
    /// ‖D⁻ᵀ f_B − f_M‖ with D mapping B-coordinates to M-coordinates.
    pub residual: f64,
    /// max over certificate witnesses G of |f(G) − g·f_B| and |f(G) − g″·f_M|.
    pub witness_residual: f64,
}

fn max_element_distance(a: &[HermitianOperator], b: &[HermitianOperator]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Compares D⁻ᵀ f_B with f_M for a certified pair (B, M).
pub fn consistency_dt<F: FrameFunction + ?Sized>(
    f: &F,
    b: &AugmentedBasis,
    m: &MicPom,
    cert: &SpanCertificate,
    tol: &ToleranceConfig,
) -> Result<ConsistencyReport> {
    let d = b.dim();
    if cert.dim != d || m.dim() != d {
        return Err(Error::InvalidCertificate(format!(
            "certificate dimension {} does not match bases of dimension {d}",
            cert.dim
        )));
    }
    let check = verify_certificate(cert, tol)?;
    if !check.passed() {
        return Err(Error::InvalidCertificate(check.failures.join("; ")));
    }
    let mic_ops = m.pom().operators();
    if max_element_distance(&cert.augmented_elements, b.elements()) > tol.residual
        || max_element_distance(&cert.mic_elements, &mic_ops) > tol.residual
    {
        return Err(Error::InvalidCertificate(
            "certificate was issued for different bases".into(),
        ));
    }

    let f_b = frame_vector(f, b.basis()?, tol)?;
    let f_m = frame_vector(f, m.basis(), tol)?;
    let change = change_of_basis(b.basis()?, m.basis())?;
    let pulled = change.apply_inverse_transpose(&f_b);
    let residual = pulled
        .iter()
        .zip(&f_m)
        .map(|(x, y)| (x - y).powi(2))
        .sum::<f64>()
        .sqrt();

    let mut witness_residual = 0.0_f64;
    for (k, g) in cert.witnesses.iter().enumerate() {
        let value = f.evaluate(&Effect::new(g.clone(), tol)?);
        let via_b: f64 = cert.augmented_coeffs[k]
            .iter()
            .zip(&f_b)
            .map(|(x, y)| x * y)
            .sum();
        let via_m: f64 = cert.mic_coeffs[k]
            .iter()
            .zip(&f_m)
            .map(|(x, y)| x * y)
            .sum();
        witness_residual = witness_residual
            .max((value - via_b).abs())
            .max((value - via_m).abs());
    }
    Ok(ConsistencyReport {
        residual,
        witness_residual,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RestrictionReport {
    /// Zero-based element index.
    pub index: usize,
    /// a_j = max{x : x B_j is an effect}.
    pub a_j: f64,
    pub f_bj: f64,
    /// max |F_j(x) − x f(B_j)| over the grid.
    pub max_deviation: f64,
    pub worst_x: f64,
    pub samples: usize,
}

/// Evaluates F_j(x) = f(x B_j) on `samples` evenly spaced points of
/// [0, a_j] (both ends included) and compares with the line x·f(B_j).
pub fn restriction_linearity_check<F: FrameFunction + ?Sized>(
    f: &F,
    b: &AugmentedBasis,
    index: usize,
    samples: usize,
    tol: &ToleranceConfig,
) -> Result<RestrictionReport> {
    check_frame_dim(f, b.dim())?;
    let n = b.elements().len();
    if index >= n {
        return Err(Error::InvalidArgument(format!(
            "element index {index} out of range 0..{n}"
        )));
    }
    if samples < 2 {
        return Err(Error::InvalidArgument("need at least 2 samples".into()));
    }
    let bj = Effect::new(b.elements()[index].clone(), tol)?;
    let a_j = max_scale(&bj, tol)?;
    let f_bj = f.evaluate(&bj);
    let mut max_deviation = 0.0_f64;
    let mut worst_x = 0.0;
    for i in 0..samples {
        let x = a_j * i as f64 / (samples - 1) as f64;
        let fx = f.evaluate(&bj.scaled(x, tol)?);
        let dev = (fx - x * f_bj).abs();
        if dev > max_deviation {
            max_deviation = dev;
            worst_x = x;
        }
    }
    Ok(RestrictionReport {
        index,
        a_j,
        f_bj,
        max_deviation,
        worst_x,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::augmented::{augmented_basis_from_onb, computational_onb};
    use crate::basis::orthonormal_operator_basis;
    use crate::cone::{default_epsilon, intersection_span_certificate};
    use crate::effect::{random_density, sic_mic_pom};

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn square0() -> SquareFrame {
        SquareFrame {
            state: DensityOperator::basis_state(2, 0),
        }
    }

    #[test]
    fn born_frame_is_additive() {
        let f = BornFrame {
            state: random_density(3, 4).unwrap(),
        };
        let r = check_additivity(&f, 50, 1, &tol()).unwrap();
        assert!(r.max_violation < 1e-12);
        assert!(r.identity_violation < 1e-12);
        assert!(r.passed);
    }

    #[test]
    fn square_frame_violates_on_half_identity() {
        // f(I/2) = 1/4, f(I) = 1: defect |1/4 + 1/4 - 1| = 1/2.
        let r = check_additivity(&square0(), 1, 0, &tol()).unwrap();
        assert!((r.max_violation - 0.5).abs() < 1e-15);
        assert_eq!(r.worst_trial, 0);
        assert!(!r.passed);
        assert!(check_additivity(&square0(), 0, 0, &tol()).is_err());
    }

    #[test]
    fn sampled_pairs_coexist() {
        let mut rng = rng_from_seed(3);
        for _ in 0..20 {
            let (e1, e2) = coexisting_pair(3, &mut rng, &tol()).unwrap();
            assert!(crate::effect::coexists(&e1, &e2, &tol()).unwrap());
        }
    }

    #[test]
    fn frame_vector_examples() {
        let sic = sic_mic_pom(2, &tol()).unwrap();
        let mixed = BornFrame {
            state: DensityOperator::maximally_mixed(2),
        };
        for v in frame_vector(&mixed, sic.basis(), &tol()).unwrap() {
            assert!((v - 0.25).abs() < 1e-15);
        }

        let f = BornFrame {
            state: random_density(2, 8).unwrap(),
        };
        let b = augmented_basis_from_onb(&computational_onb(2), &tol()).unwrap();
        let fv = frame_vector(&f, b.basis().unwrap(), &tol()).unwrap();
        for (v, bj) in fv.iter().zip(b.elements()) {
            assert_eq!(*v, hs_inner(f.state.op(), bj).unwrap());
        }

        let tab = TabulatedFrame::from_frame(&f, sic.basis().clone(), &tol()).unwrap();
        let back = frame_vector(&tab, &tab.basis, &tol()).unwrap();
        for (x, y) in back.iter().zip(&tab.values) {
            assert!((x - y).abs() < 1e-14);
        }
    }

    #[test]
    fn frame_vector_rejects_non_effect_basis() {
        let w = orthonormal_operator_basis(2).unwrap();
        let f = BornFrame {
            state: DensityOperator::maximally_mixed(2),
        };
        assert!(matches!(
            frame_vector(&f, &w, &tol()),
            Err(Error::NotAnEffect { .. })
        ));
    }

    #[test]
    fn reconstructs_maximally_mixed_and_pure_states() {
        let sic = sic_mic_pom(2, &tol()).unwrap();
        let w = orthonormal_operator_basis(2).unwrap();
        let f = BornFrame {
            state: DensityOperator::maximally_mixed(2),
        };
        let r = reconstruct_density(&f, &sic, &w, 0, &tol()).unwrap();
        assert!((&r.rho_hat - f.state.op()).norm() < 1e-12);
        assert_eq!(r.verdict, Verdict::Pass);

        let f = BornFrame {
            state: DensityOperator::basis_state(2, 0),
        };
        let r = reconstruct_density(&f, &sic, &w, 0, &tol()).unwrap();
        assert!((r.trace - 1.0).abs() < 1e-12);
        assert!(r.min_eigenvalue >= -1e-9);
        assert!(r.max_deviation < 1e-8);
    }

    #[test]
    fn square_frame_reconstruction_fails_verification() {
        let sic = sic_mic_pom(2, &tol()).unwrap();
        let w = orthonormal_operator_basis(2).unwrap();
        let r = reconstruct_density(&square0(), &sic, &w, 0, &tol()).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        assert!(r.violated.contains(&"born-rule".to_string()));
    }

    #[test]
    fn consistency_on_qubit_canonical_pair() {
        let b = augmented_basis_from_onb(&computational_onb(2), &tol()).unwrap();
        let m = sic_mic_pom(2, &tol()).unwrap();
        let cert = intersection_span_certificate(&b, &m, default_epsilon(2), 0, &tol()).unwrap();
        let f = BornFrame {
            state: DensityOperator::maximally_mixed(2),
        };
        let r = consistency_dt(&f, &b, &m, &cert, &tol()).unwrap();
        assert!(r.residual < 1e-10);
        assert!(r.witness_residual < 1e-10);

        let r = consistency_dt(&square0(), &b, &m, &cert, &tol()).unwrap();
        assert!(r.residual > 1e-3);
    }

    #[test]
    fn consistency_rejects_foreign_certificate() {
        let b = augmented_basis_from_onb(&computational_onb(2), &tol()).unwrap();
        let m = sic_mic_pom(2, &tol()).unwrap();
        let other = crate::effect::random_mic_pom(2, 3, &tol()).unwrap();
        let cert =
            intersection_span_certificate(&b, &other, default_epsilon(2), 0, &tol()).unwrap();
        let f = BornFrame {
            state: DensityOperator::maximally_mixed(2),
        };
        assert!(matches!(
            consistency_dt(&f, &b, &m, &cert, &tol()),
            Err(Error::InvalidCertificate(_))
        ));
    }

    #[test]
    fn restriction_linearity() {
        let b = augmented_basis_from_onb(&computational_onb(2), &tol()).unwrap();
        let f = BornFrame {
            state: random_density(2, 1).unwrap(),
        };
        for j in 0..4 {
            let r = restriction_linearity_check(&f, &b, j, 100, &tol()).unwrap();
            assert!(r.max_deviation < 1e-12);
        }

        // F_j(x) = (x p)^2 with p = Tr(ρ B_j); at x = 1/2 the defect is
        // |p²/4 − p²/2| = p²/4.
        let sq = square0();
        let p = hs_inner(sq.state.op(), &b.elements()[0]).unwrap();
        let bj = Effect::new(b.elements()[0].clone(), &tol()).unwrap();
        let at_half = sq.evaluate(&bj.scaled(0.5, &tol()).unwrap()) - 0.5 * sq.evaluate(&bj);
        assert!((at_half.abs() - p * p / 4.0).abs() < 1e-15);
        let r = restriction_linearity_check(&sq, &b, 0, 100, &tol()).unwrap();
        assert!(r.max_deviation > 0.01);
        let zero = sq.evaluate(&bj.scaled(0.0, &tol()).unwrap());
        assert_eq!(zero, 0.0);
    }

    #[test]
    fn born_values_stay_in_unit_interval() {
        let f = BornFrame {
            state: random_density(3, 2).unwrap(),
        };
        let (lo, hi) = sample_range(&f, 50, 0, &tol()).unwrap();
        assert_eq!(lo, 0.0);
        assert!((hi - 1.0).abs() < 1e-12);
    }

    #[test]
    fn frame_json_round_trip() {
        let frame = Frame::AdversarialSquare(square0());
        let text = serde_json::to_string(&FrameJson::from(&frame)).unwrap();
        assert!(text.contains("\"kind\":\"adversarial-square\""));
        let back: FrameJson = serde_json::from_str(&text).unwrap();
        let back = back.into_frame(&tol()).unwrap();
        let e = Effect::new(HermitianOperator::diagonal(&[0.3, 0.6]), &tol()).unwrap();
        assert_eq!(back.evaluate(&e), frame.evaluate(&e));
    }
}
