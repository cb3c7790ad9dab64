//! Effects, POMs, MIC-POMs and density operators.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::basis::{BasisKind, OperatorBasis};
use crate::eigen::eig_hermitian;
use crate::error::{Error, Result};
use crate::operator::HermitianOperator;
use crate::random::{check_dim, ginibre, random_hermitian, random_unit_vector, rng_from_seed};
use crate::tolerance::ToleranceConfig;

/// Outcome of a spectral effect test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EffectCheck {
    pub is_effect: bool,
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
    /// The eigenvalue outside `[-psd_slack, 1 + psd_slack]`, if any.
    pub witness: Option<f64>,
}

pub fn is_effect(h: &HermitianOperator, tol: &ToleranceConfig) -> Result<EffectCheck> {
    let eig = eig_hermitian(h, tol)?;
    let (lo, hi) = (eig.min(), eig.max());
    let witness = if hi > 1.0 + tol.psd_slack {
        Some(hi)
    } else if lo < -tol.psd_slack {
        Some(lo)
    } else {
        None
    };
    Ok(EffectCheck {
        is_effect: witness.is_none(),
        min_eigenvalue: lo,
        max_eigenvalue: hi,
        witness,
    })
}

/// Hermitian operator with spectrum in [0, 1].
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Effect(HermitianOperator);

impl Effect {
    pub fn new(op: HermitianOperator, tol: &ToleranceConfig) -> Result<Self> {
        let check = is_effect(&op, tol)?;
        match check.witness {
            None => Ok(Self(op)),
            Some(eigenvalue) => Err(Error::NotAnEffect { eigenvalue }),
        }
    }

    pub fn identity(d: usize) -> Self {
        Self(HermitianOperator::identity(d))
    }

    pub fn zero(d: usize) -> Self {
        Self(HermitianOperator::zeros(d))
    }

    pub fn op(&self) -> &HermitianOperator {
        &self.0
    }

    pub fn into_inner(self) -> HermitianOperator {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn scaled(&self, x: f64, tol: &ToleranceConfig) -> Result<Self> {
        Self::new(self.0.scale(x), tol)
    }
}

impl AsRef<HermitianOperator> for Effect {
    fn as_ref(&self) -> &HermitianOperator {
        &self.0
    }
}

/// True iff `e1 + e2` is an effect.
pub fn coexists(e1: &Effect, e2: &Effect, tol: &ToleranceConfig) -> Result<bool> {
    e1.op().check_same_dim(e2.op())?;
    Ok(is_effect(&(e1.op() + e2.op()), tol)?.is_effect)
}

/// a_E = 1/λ_max(E), the largest x with xE an effect.
pub fn max_scale(e: &Effect, tol: &ToleranceConfig) -> Result<f64> {
    let top = eig_hermitian(e.op(), tol)?.max();
    if top <= tol.psd_slack {
        return Err(Error::ZeroOperator);
    }
    Ok(1.0 / top)
}

/// Named invariant broken by a candidate POM.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PomViolation {
    pub invariant: &'static str,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PomReport {
    pub len: usize,
    pub dim: usize,
    /// ‖Σ_j E_j − I‖ (Hilbert-Schmidt).
    pub sum_deviation: f64,
    pub violations: Vec<PomViolation>,
}

impl PomReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks length, dimensions, effect spectra and the sum-to-identity rule.
pub fn validate_pom(ops: &[HermitianOperator], tol: &ToleranceConfig) -> Result<PomReport> {
    let mut violations = Vec::new();
    let dim = ops.first().map(|o| o.dim()).unwrap_or(0);
    if ops.len() < 2 {
        violations.push(PomViolation {
            invariant: "length",
            detail: format!("a POM needs at least 2 effects, got {}", ops.len()),
        });
    }
    if let Some(bad) = ops.iter().position(|o| o.dim() != dim) {
        violations.push(PomViolation {
            invariant: "dimension",
            detail: format!("element {bad} has dimension {}", ops[bad].dim()),
        });
        return Ok(PomReport {
            len: ops.len(),
            dim,
            sum_deviation: f64::NAN,
            violations,
        });
    }
    for (j, op) in ops.iter().enumerate() {
        let check = is_effect(op, tol)?;
        if let Some(w) = check.witness {
            violations.push(PomViolation {
                invariant: "effect",
                detail: format!("element {j} has eigenvalue {w}"),
            });
        }
    }
    let sum_deviation = if ops.is_empty() {
        f64::NAN
    } else {
        (&HermitianOperator::sum(ops)? - &HermitianOperator::identity(dim)).norm()
    };
    if !(sum_deviation <= tol.residual) {
        violations.push(PomViolation {
            invariant: "sum-to-identity",
            detail: format!("‖Σ E_j − I‖ = {sum_deviation:e}"),
        });
    }
    Ok(PomReport {
        len: ops.len(),
        dim,
        sum_deviation,
        violations,
    })
}

/// Finite sequence of effects summing to the identity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Pom {
    effects: Vec<Effect>,
}

impl Pom {
    pub fn new(ops: Vec<HermitianOperator>, tol: &ToleranceConfig) -> Result<Self> {
        let report = validate_pom(&ops, tol)?;
        if let Some(v) = report.violations.first() {
            return Err(Error::NotPom(format!("{}: {}", v.invariant, v.detail)));
        }
        Ok(Self {
            effects: ops.into_iter().map(Effect).collect(),
        })
    }

    pub fn effects(&self) -> &[Effect] {
        &self.effects
    }

    pub fn operators(&self) -> Vec<HermitianOperator> {
        self.effects.iter().map(|e| e.op().clone()).collect()
    }

    pub fn dim(&self) -> usize {
        self.effects[0].dim()
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }

    pub fn to_json(&self) -> PomJson {
        PomJson {
            dim: self.dim(),
            effects: self.operators(),
        }
    }
}

/// Wire form `{ "dim": d, "effects": [operator-json, ...] }`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PomJson {
    pub dim: usize,
    pub effects: Vec<HermitianOperator>,
}

impl PomJson {
    pub fn check_dims(&self) -> Result<()> {
        for e in &self.effects {
            if e.dim() != self.dim {
                return Err(Error::DimensionMismatch {
                    expected: self.dim,
                    found: e.dim(),
                });
            }
        }
        Ok(())
    }
}

/// POM of d² linearly independent effects; doubles as an operator basis.
#[derive(Debug, Clone)]
pub struct MicPom {
    pom: Pom,
    basis: OperatorBasis,
}

impl MicPom {
    pub fn new(pom: Pom, tol: &ToleranceConfig) -> Result<Self> {
        let basis = OperatorBasis::new(pom.operators(), BasisKind::MicPom, tol)?;
        Ok(Self { pom, basis })
    }

    pub fn from_operators(ops: Vec<HermitianOperator>, tol: &ToleranceConfig) -> Result<Self> {
        Self::new(Pom::new(ops, tol)?, tol)
    }

    pub fn pom(&self) -> &Pom {
        &self.pom
    }

    pub fn basis(&self) -> &OperatorBasis {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.pom.dim()
    }
}

/// Tetrahedral SIC for a qubit: M_j = (I + s_j·σ)/4.
pub fn sic_mic_pom(d: usize, tol: &ToleranceConfig) -> Result<MicPom> {
    if d != 2 {
        return Err(Error::UnsupportedDimension(d));
    }
    let r2 = std::f64::consts::SQRT_2;
    let bloch = [
        [0.0, 0.0, 1.0],
        [2.0 * r2 / 3.0, 0.0, -1.0 / 3.0],
        [-r2 / 3.0, (2.0f64 / 3.0).sqrt(), -1.0 / 3.0],
        [-r2 / 3.0, -(2.0f64 / 3.0).sqrt(), -1.0 / 3.0],
    ];
    let ops = bloch
        .iter()
        .map(|s| bloch_operator(s, 0.25))
        .collect::<Result<Vec<_>>>()?;
    MicPom::from_operators(ops, tol)
}

/// weight · (I + s·σ).
pub(crate) fn bloch_operator(s: &[f64; 3], weight: f64) -> Result<HermitianOperator> {
    use nalgebra::DMatrix;
    use num_complex::Complex64 as C;
    let m = DMatrix::from_row_slice(
        2,
        2,
        &[
            C::new(weight * (1.0 + s[2]), 0.0),
            C::new(weight * s[0], -weight * s[1]),
            C::new(weight * s[0], weight * s[1]),
            C::new(weight * (1.0 - s[2]), 0.0),
        ],
    );
    HermitianOperator::from_matrix(m)
}

/// Retry cap for [`random_mic_pom`].
pub const MIC_POM_RETRIES: usize = 32;

/// Fraction of the identity carried by the rescaled rank-one part.
const MIC_POM_WEIGHT: f64 = 0.5;

/// Random MIC-POM: d² random rank-one operators A_j, rescaled so their sum S
/// has λ_max = 1/2, then completed to the identity by adding (I − S')/d²
/// to each element. Effect and rank conditions are re-verified; failures
/// draw a fresh set from the same stream.
pub fn random_mic_pom(d: usize, seed: u64, tol: &ToleranceConfig) -> Result<MicPom> {
    check_dim(d)?;
    let mut rng = rng_from_seed(seed);
    let n = d * d;
    for _ in 0..MIC_POM_RETRIES {
        let rank_one: Vec<HermitianOperator> = (0..n)
            .map(|_| HermitianOperator::outer(&random_unit_vector(d, &mut rng)))
            .collect();
        let s = HermitianOperator::sum(&rank_one)?;
        let top = eig_hermitian(&s, tol)?.max();
        let scale = MIC_POM_WEIGHT / top;
        let scaled: Vec<HermitianOperator> = rank_one.iter().map(|a| a.scale(scale)).collect();
        let remainder = &HermitianOperator::identity(d) - &s.scale(scale);
        let share = remainder.scale(1.0 / n as f64);
        let ops: Vec<HermitianOperator> = scaled.iter().map(|a| a + &share).collect();
        if let Ok(mic) = MicPom::from_operators(ops, tol) {
            return Ok(mic);
        }
    }
    Err(Error::RetryLimit {
        seed,
        attempts: MIC_POM_RETRIES,
    })
}

/// Positive semidefinite, unit-trace operator.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct DensityOperator(HermitianOperator);

impl DensityOperator {
    pub fn new(op: HermitianOperator, tol: &ToleranceConfig) -> Result<Self> {
        let tr = op.trace();
        if (tr - 1.0).abs() > tol.residual {
            return Err(Error::NotDensity(format!("trace {tr}")));
        }
        let lo = eig_hermitian(&op, tol)?.min();
        if lo < -tol.psd_slack {
            return Err(Error::NotDensity(format!("eigenvalue {lo}")));
        }
        Ok(Self(op))
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self(HermitianOperator::identity(d).scale(1.0 / d as f64))
    }

    /// |j⟩⟨j|.
    pub fn basis_state(d: usize, j: usize) -> Self {
        Self(HermitianOperator::basis_projector(d, j))
    }

    pub fn op(&self) -> &HermitianOperator {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }
}

/// X X† / Tr(X X†) with X Ginibre.
pub fn random_density_from<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<DensityOperator> {
    check_dim(d)?;
    let x = ginibre(d, rng);
    let p = HermitianOperator::from_matrix(&x * x.adjoint())?;
    let tr = p.trace();
    Ok(DensityOperator(p.scale(1.0 / tr)))
}

pub fn random_density(d: usize, seed: u64) -> Result<DensityOperator> {
    random_density_from(d, &mut rng_from_seed(seed))
}

/// Random Hermitian operator whose spectrum is mapped affinely onto a
/// random subinterval [lo, hi] of [0, 1].
pub fn random_effect_from<R: Rng + ?Sized>(
    d: usize,
    rng: &mut R,
    tol: &ToleranceConfig,
) -> Result<Effect> {
    let h = random_hermitian(d, rng)?;
    let eig = eig_hermitian(&h, tol)?;
    let (min, max) = (eig.min(), eig.max());
    let u: f64 = rng.random();
    let v: f64 = rng.random();
    let (lo, hi) = if u < v { (u, v) } else { (v, u) };
    let spread = max - min;
    let op = eig.map_spectrum(|x| {
        if spread > 0.0 {
            (lo + (hi - lo) * (x - min) / spread).clamp(0.0, 1.0)
        } else {
            lo
        }
    })?;
    Effect::new(op, tol)
}

pub fn random_effect(d: usize, seed: u64, tol: &ToleranceConfig) -> Result<Effect> {
    random_effect_from(d, &mut rng_from_seed(seed), tol)
}
