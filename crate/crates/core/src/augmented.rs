//! Augmented bases: d² linearly independent rank-one effects whose first d
//! elements are c·|e_j⟩⟨e_j| for an orthonormal basis {e_j}, and whose sum
//! is an effect.
//!
//! The canonical construction completes the d projectors with the
//! projectors onto (e_j + e_k)/√2 and (e_j + i·e_k)/√2 for j < k, sums them
//! into G (Tr G = d²), and divides everything by Γ = λ_max(G).

use nalgebra::DVector;
use num_complex::Complex64;
use serde::Serialize;

use crate::basis::{BasisKind, OperatorBasis};
use crate::effect::{is_effect, Effect, Pom};
use crate::eigen::eig_hermitian;
use crate::error::{Error, Result};
use crate::linalg::numerical_rank;
use crate::operator::HermitianOperator;
use crate::tolerance::ToleranceConfig;

/// Columns of the identity.
pub fn computational_onb(d: usize) -> Vec<DVector<Complex64>> {
    (0..d)
        .map(|j| {
            let mut v = DVector::zeros(d);
            v[j] = Complex64::new(1.0, 0.0);
            v
        })
        .collect()
}

fn orthonormality_deviation(onb: &[DVector<Complex64>]) -> f64 {
    let mut dev = 0.0_f64;
    for (j, u) in onb.iter().enumerate() {
        for (k, v) in onb.iter().enumerate() {
            let want = if j == k { 1.0 } else { 0.0 };
            dev = dev.max((u.dotc(v) - Complex64::new(want, 0.0)).norm());
        }
    }
    dev
}

fn check_onb(onb: &[DVector<Complex64>], tol: &ToleranceConfig) -> Result<usize> {
    let d = onb.len();
    if d < 2 {
        return Err(Error::UnsupportedDimension(d));
    }
    if let Some(v) = onb.iter().find(|v| v.len() != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: v.len(),
        });
    }
    let deviation = orthonormality_deviation(onb);
    if !(deviation <= tol.residual) {
        return Err(Error::NotOrthonormal { deviation });
    }
    Ok(d)
}

/// Π_1..Π_d = |e_j⟩⟨e_j|, then for each j < k the projectors onto
/// (e_j + e_k)/√2 and (e_j + i·e_k)/√2.
pub fn complete_projector_basis(
    onb: &[DVector<Complex64>],
    tol: &ToleranceConfig,
) -> Result<Vec<HermitianOperator>> {
    let d = check_onb(onb, tol)?;
    let r = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let mut out: Vec<HermitianOperator> = onb.iter().map(HermitianOperator::outer).collect();
    for j in 0..d {
        for k in (j + 1)..d {
            out.push(HermitianOperator::outer(&((&onb[j] + &onb[k]) * r)));
            out.push(HermitianOperator::outer(&((&onb[j] + &onb[k] * i) * r)));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct AugmentedBasis {
    dim: usize,
    elements: Vec<HermitianOperator>,
    c: f64,
    gamma: f64,
    onb: Vec<DVector<Complex64>>,
    view: Option<OperatorBasis>,
}

/// Canonical augmented basis B_j = Π_j / Γ with c = 1/Γ.
pub fn augmented_basis_from_onb(
    onb: &[DVector<Complex64>],
    tol: &ToleranceConfig,
) -> Result<AugmentedBasis> {
    let projectors = complete_projector_basis(onb, tol)?;
    let gamma = projector_sum_top(&projectors, tol)?;
    AugmentedBasis::build(onb, &projectors, 1.0 / gamma, gamma, tol)
}

/// Augmented basis with B_j = c·Π_j for a caller-chosen c. Accepted only if
/// 0 < c < 1 and c·G is still an effect, i.e. c ≤ 1/Γ.
pub fn augmented_basis_with_scale(
    onb: &[DVector<Complex64>],
    c: f64,
    tol: &ToleranceConfig,
) -> Result<AugmentedBasis> {
    if !(c > 0.0 && c < 1.0) {
        return Err(Error::InvalidScale {
            c,
            reason: "c must lie in (0, 1)".into(),
        });
    }
    let projectors = complete_projector_basis(onb, tol)?;
    let gamma = projector_sum_top(&projectors, tol)?;
    if c * gamma > 1.0 + tol.psd_slack {
        return Err(Error::InvalidScale {
            c,
            reason: format!(
                "sum of elements has eigenvalue {} > 1 (need c ≤ 1/Γ = {})",
                c * gamma,
                1.0 / gamma
            ),
        });
    }
    AugmentedBasis::build(onb, &projectors, c, gamma, tol)
}

fn projector_sum_top(projectors: &[HermitianOperator], tol: &ToleranceConfig) -> Result<f64> {
    let g = HermitianOperator::sum(projectors)?;
    Ok(eig_hermitian(&g, tol)?.max())
}

impl AugmentedBasis {
    fn build(
        onb: &[DVector<Complex64>],
        projectors: &[HermitianOperator],
        c: f64,
        gamma: f64,
        tol: &ToleranceConfig,
    ) -> Result<Self> {
        let elements: Vec<_> = projectors.iter().map(|p| p.scale(c)).collect();
        let view = OperatorBasis::new(elements.clone(), BasisKind::Augmented, tol)?;
        Ok(Self {
            dim: onb.len(),
            elements,
            c,
            gamma,
            onb: onb.to_vec(),
            view: Some(view),
        })
    }

    /// Assembles a candidate without enforcing the definition; use
    /// [`validate_augmented`] to check it.
    pub fn from_parts(
        onb: Vec<DVector<Complex64>>,
        elements: Vec<HermitianOperator>,
        c: f64,
        gamma: f64,
        tol: &ToleranceConfig,
    ) -> Result<Self> {
        let dim = onb.len();
        if elements.len() != dim * dim {
            return Err(Error::WrongBasisSize {
                expected: dim * dim,
                found: elements.len(),
            });
        }
        for e in &elements {
            if e.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: e.dim(),
                });
            }
        }
        let view = OperatorBasis::new(elements.clone(), BasisKind::Augmented, tol).ok();
        Ok(Self {
            dim,
            elements,
            c,
            gamma,
            onb,
            view,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn elements(&self) -> &[HermitianOperator] {
        &self.elements
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn onb(&self) -> &[DVector<Complex64>] {
        &self.onb
    }

    /// The elements as an operator basis; fails if they are linearly dependent.
    pub fn basis(&self) -> Result<&OperatorBasis> {
        self.view.as_ref().ok_or(Error::SingularBasis {
            rank: 0,
            expected: self.dim * self.dim,
            smallest: 0.0,
        })
    }

    pub fn element_sum(&self) -> Result<HermitianOperator> {
        HermitianOperator::sum(&self.elements)
    }

    /// I − Σ_j B_j, the element completing the basis to a POM.
    pub fn completion_element(&self) -> Result<HermitianOperator> {
        Ok(&HermitianOperator::identity(self.dim) - &self.element_sum()?)
    }

    /// ⟦B_1, …, B_{d²}, I − Σ B_j⟧.
    pub fn completion_pom(&self, tol: &ToleranceConfig) -> Result<Pom> {
        let mut ops = self.elements.clone();
        ops.push(self.completion_element()?);
        Pom::new(ops, tol)
    }

    pub fn effects(&self, tol: &ToleranceConfig) -> Result<Vec<Effect>> {
        self.elements
            .iter()
            .map(|e| Effect::new(e.clone(), tol))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionCheck {
    pub name: &'static str,
    pub passed: bool,
    pub witness: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AugmentedReport {
    pub conditions: Vec<ConditionCheck>,
}

impl AugmentedReport {
    pub fn passed(&self) -> bool {
        self.conditions.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&ConditionCheck> {
        self.conditions.iter().find(|c| c.name == name)
    }
}

/// Checks every defining property and reports a numeric witness for each:
/// `scaled-projectors` (0 < c < 1 and B_j = c|e_j⟩⟨e_j| for j ≤ d),
/// `sum-is-effect`, `rank-one` and `linear-independence`.
pub fn validate_augmented(b: &AugmentedBasis, tol: &ToleranceConfig) -> Result<AugmentedReport> {
    let d = b.dim;
    let mut conditions = Vec::with_capacity(4);

    let c_ok = b.c > 0.0 && b.c < 1.0;
    let onb_dev = orthonormality_deviation(&b.onb);
    let mut proj_dev = 0.0_f64;
    for j in 0..d {
        let target = HermitianOperator::outer(&b.onb[j]).scale(b.c);
        proj_dev = proj_dev.max((&b.elements[j] - &target).norm());
    }
    let form_ok = proj_dev <= tol.residual && onb_dev <= tol.residual;
    conditions.push(ConditionCheck {
        name: "scaled-projectors",
        passed: c_ok && form_ok,
        witness: if c_ok { proj_dev.max(onb_dev) } else { b.c },
        detail: if !c_ok {
            format!("c = {} not in (0, 1)", b.c)
        } else {
            format!("max ‖B_j − c|e_j><e_j|‖ = {proj_dev:e}, onb deviation = {onb_dev:e}")
        },
    });

    let sum_check = is_effect(&b.element_sum()?, tol)?;
    conditions.push(ConditionCheck {
        name: "sum-is-effect",
        passed: sum_check.is_effect,
        witness: sum_check.witness.unwrap_or(sum_check.max_eigenvalue),
        detail: format!(
            "spectrum of Σ B_j in [{}, {}]",
            sum_check.min_eigenvalue, sum_check.max_eigenvalue
        ),
    });

    let mut worst_second = 0.0_f64;
    let mut worst_element = None;
    let mut not_effect = None;
    for (j, e) in b.elements.iter().enumerate() {
        let eig = eig_hermitian(e, tol)?;
        let second = if d > 1 { eig.values[1].abs() } else { 0.0 };
        let spread = eig.min().min(0.0).abs().max(second);
        if spread > worst_second {
            worst_second = spread;
            worst_element = Some(j);
        }
        if eig.max() > 1.0 + tol.psd_slack || eig.min() < -tol.psd_slack {
            not_effect.get_or_insert(j);
        }
    }
    let rank_one_ok = worst_second <= tol.psd_slack && not_effect.is_none();
    conditions.push(ConditionCheck {
        name: "rank-one",
        passed: rank_one_ok,
        witness: worst_second,
        detail: match (not_effect, worst_element) {
            (Some(j), _) => format!("element {j} is not an effect"),
            (None, Some(j)) if !rank_one_ok => {
                format!("element {j} has second eigenvalue of magnitude {worst_second:e}")
            }
            _ => "all elements rank one".into(),
        },
    });

    let mut coords = nalgebra::DMatrix::zeros(d * d, d * d);
    for (j, e) in b.elements.iter().enumerate() {
        coords.set_column(j, &e.to_real_coords());
    }
    let rank = numerical_rank(&coords, tol.rank_cutoff);
    conditions.push(ConditionCheck {
        name: "linear-independence",
        passed: rank.rank == d * d,
        witness: rank.rank as f64,
        detail: format!(
            "rank {} of {}, singular values in [{:e}, {:e}]",
            rank.rank,
            d * d,
            rank.smallest,
            rank.largest
        ),
    });

    Ok(AugmentedReport { conditions })
}
