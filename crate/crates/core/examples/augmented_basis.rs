//! Build the canonical augmented basis for a few dimensions and print the
//! scale factor and the validation witnesses.

use gleason_cauchy::augmented::{augmented_basis_from_onb, computational_onb, validate_augmented};
use gleason_cauchy::random::{random_orthonormal_basis, rng_from_seed};
use gleason_cauchy::tolerance::ToleranceConfig;

fn main() -> gleason_cauchy::error::Result<()> {
    let tol = ToleranceConfig::default();
    println!(
        "{:>3} {:>12} {:>12} {:>14}",
        "d", "Gamma", "c", "Gamma (random)"
    );
    for d in 2..=6 {
        let b = augmented_basis_from_onb(&computational_onb(d), &tol)?;
        let onb = random_orthonormal_basis(d, &mut rng_from_seed(d as u64), &tol)?;
        let rotated = augmented_basis_from_onb(&onb, &tol)?;
        println!(
            "{d:>3} {:>12.9} {:>12.9} {:>14.9}",
            b.gamma(),
            b.c(),
            rotated.gamma()
        );
    }

    let b = augmented_basis_from_onb(&computational_onb(2), &tol)?;
    println!(
        "\nqubit: Gamma - (2 + 1/sqrt 2) = {:.2e}",
        b.gamma() - (2.0 + 0.5f64.sqrt())
    );
    for check in validate_augmented(&b, &tol)?.conditions {
        println!(
            "  {:<20} passed={} witness={:.3e}",
            check.name, check.passed, check.witness
        );
    }
    Ok(())
}
