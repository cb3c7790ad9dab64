//! Decompose an effect into rank-one pieces, then certify that the cones of
//! an augmented basis and of a random MIC-POM share d² independent effects.

use gleason_cauchy::augmented::{augmented_basis_from_onb, computational_onb};
use gleason_cauchy::cone::{
    cone_decompose_spectral, default_epsilon, intersection_span_certificate, verify_certificate,
    SpanCertificate,
};
use gleason_cauchy::effect::{random_effect, random_mic_pom};
use gleason_cauchy::tolerance::ToleranceConfig;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let tol = ToleranceConfig::default();
    let d = 3;

    let e = random_effect(d, 1, &tol)?;
    let (_, dec) = cone_decompose_spectral(&e, &tol)?;
    println!(
        "spectral decomposition: {} nonzero coefficients, residual {:.2e}",
        dec.support(tol.residual),
        dec.residual
    );

    let b = augmented_basis_from_onb(&computational_onb(d), &tol)?;
    let m = random_mic_pom(d, 2, &tol)?;
    let cert = intersection_span_certificate(&b, &m, default_epsilon(d), 2, &tol)?;
    println!(
        "certificate: rank {}, epsilon {}, delta {:.4}, gamma {:.4}, strategy {:?}",
        cert.rank, cert.epsilon, cert.delta, cert.gamma, cert.strategy
    );

    // Round trip through JSON, as a third party receiving the file would.
    let text = serde_json::to_string(&cert)?;
    let received: SpanCertificate = serde_json::from_str(&text)?;
    let check = verify_certificate(&received, &tol)?;
    println!(
        "re-verified ({} bytes): passed={} min coefficient {:.3e} |E_delta - I/d| = {:.6}",
        text.len(),
        check.passed(),
        check.min_coeff,
        check.e_delta_distance
    );
    Ok(())
}
