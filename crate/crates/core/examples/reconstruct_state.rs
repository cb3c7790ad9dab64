//! Hide a random qutrit state behind a Born-rule frame function, query it
//! on a random MIC-POM and recover the state.

use gleason_cauchy::basis::orthonormal_operator_basis;
use gleason_cauchy::effect::{random_density, random_mic_pom};
use gleason_cauchy::frame::{frame_vector, reconstruct_density, BornFrame};
use gleason_cauchy::tolerance::ToleranceConfig;

fn main() -> gleason_cauchy::error::Result<()> {
    let tol = ToleranceConfig::default();
    let d = 3;
    let hidden = random_density(d, 7)?;
    let frame = BornFrame {
        state: hidden.clone(),
    };

    let mic = random_mic_pom(d, 8, &tol)?;
    let probabilities = frame_vector(&frame, mic.basis(), &tol)?;
    println!("outcome probabilities on the MIC-POM:");
    for (j, p) in probabilities.iter().enumerate() {
        println!("  E_{j:<2} {p:.6}");
    }
    println!("  sum  {:.6}", probabilities.iter().sum::<f64>());

    let onb = orthonormal_operator_basis(d)?;
    let report = reconstruct_density(&frame, &mic, &onb, 9, &tol)?;
    println!("trace            {:.12}", report.trace);
    println!("min eigenvalue   {:.3e}", report.min_eigenvalue);
    println!(
        "max |f - Tr(pE)| {:.3e} over {} effects",
        report.max_deviation, report.test_effects
    );
    println!(
        "|rho_hat - rho|  {:.3e}",
        (&report.rho_hat - hidden.op()).norm()
    );
    println!("verdict          {:?}", report.verdict);
    Ok(())
}
