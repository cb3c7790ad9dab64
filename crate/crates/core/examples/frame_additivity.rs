//! Compare a Born-rule frame with the squared-probability assignment, which
//! is normalized and bounded but not additive.

use gleason_cauchy::augmented::{augmented_basis_from_onb, computational_onb};
use gleason_cauchy::effect::DensityOperator;
use gleason_cauchy::frame::{
    check_additivity, restriction_linearity_check, BornFrame, FrameFunction, SquareFrame,
};
use gleason_cauchy::tolerance::ToleranceConfig;

fn describe(
    name: &str,
    f: &dyn FrameFunction,
    tol: &ToleranceConfig,
) -> gleason_cauchy::error::Result<()> {
    let r = check_additivity(f, 100, 5, tol)?;
    println!(
        "{name:<8} f(I) = {:.3}  max additivity defect {:.3e} (trial {})",
        r.identity_value, r.max_violation, r.worst_trial
    );
    let b = augmented_basis_from_onb(&computational_onb(f.dim()), tol)?;
    for j in 0..f.dim() * f.dim() {
        let line = restriction_linearity_check(f, &b, j, 100, tol)?;
        println!(
            "    line {j}: a_j = {:.4}  max |F(x) - x F(1)| = {:.3e}",
            line.a_j, line.max_deviation
        );
    }
    Ok(())
}

fn main() -> gleason_cauchy::error::Result<()> {
    let tol = ToleranceConfig::default();
    let state = DensityOperator::basis_state(2, 0);
    describe(
        "born",
        &BornFrame {
            state: state.clone(),
        },
        &tol,
    )?;
    describe("square", &SquareFrame { state }, &tol)?;
    Ok(())
}
