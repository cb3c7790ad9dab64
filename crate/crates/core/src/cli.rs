//! Command-line front end. Every subcommand prints one JSON report; the
//! exit code is 0 when all checks pass, 1 when a verification verdict
//! fails and 2 for invalid input.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use crate::augmented::{
    augmented_basis_from_onb, augmented_basis_with_scale, computational_onb, validate_augmented,
};
use crate::basis::{orthonormal_operator_basis, BasisKind, OperatorBasis};
use crate::cauchy::{
    check_condition, check_linear, grid_from_unit, parse_rational, unboundedness_witness,
    Condition, ExtensionBase, ExtensionView, GridAdditiveFunction, QSqrt2, QSqrt2Additive,
    SearchParams,
};
use crate::cone::{
    default_epsilon, intersection_span_certificate, verify_certificate, SpanCertificate,
};
use crate::effect::{
    is_effect, random_density, random_mic_pom, sic_mic_pom, validate_pom, DensityOperator, PomJson,
};
use crate::eigen::eig_hermitian;
use crate::error::Error;
use crate::frame::{
    check_additivity, reconstruct_density, restriction_linearity_check, sample_range, BornFrame,
    Frame, FrameFunction, FrameJson, SquareFrame, Verdict,
};
use crate::operator::HermitianOperator;
use crate::random::{random_orthonormal_basis, rng_from_seed};
use crate::tolerance::ToleranceConfig;

#[derive(Debug, Parser)]
#[command(
    name = "gleason",
    version,
    about = "Frame functions, effect cones and additive functions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write the report to this file instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Indent the JSON report.
    #[arg(long, global = true)]
    pretty: bool,

    /// Override the residual tolerance.
    #[arg(long, global = true, value_name = "TOL")]
    tol_residual: Option<f64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Reconstruct a density operator from frame values on a MIC-POM.
    Reconstruct(ReconstructArgs),
    /// Build or re-verify a certificate that two effect cones share a spanning set.
    CertifyCone(CertifyArgs),
    /// Build an augmented basis and check its defining properties.
    Augbasis(AugArgs),
    /// Test a frame function for additivity and normalization.
    VerifyFrame(VerifyFrameArgs),
    /// Exact tools for additive functions on an interval.
    #[command(subcommand)]
    Cauchy(Box<CauchyCommand>),
    /// Validate a POM, MIC-POM, effect or density operator file.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MicChoice {
    Random,
    Sic,
}

#[derive(Debug, Args)]
struct ReconstructArgs {
    #[arg(long, required_unless_present = "frame")]
    dim: Option<usize>,
    #[arg(long)]
    seed: u64,
    /// Frame file; without it a hidden state is drawn from the seed.
    #[arg(long, value_name = "PATH")]
    frame: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "random")]
    mic: MicChoice,
}

#[derive(Debug, Args)]
struct CertifyArgs {
    #[arg(long, required_unless_present = "verify")]
    dim: Option<usize>,
    #[arg(long, required_unless_present = "verify")]
    seed: Option<u64>,
    #[arg(long)]
    epsilon: Option<f64>,
    /// Re-verify a stored certificate instead of building one.
    #[arg(long, value_name = "PATH", conflicts_with_all = ["dim", "seed", "epsilon"])]
    verify: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct AugArgs {
    #[arg(long)]
    dim: usize,
    /// Use a random orthonormal basis drawn from this seed instead of the computational one.
    #[arg(long)]
    seed: Option<u64>,
    /// Scale factor c; defaults to the largest admissible value.
    #[arg(long)]
    c: Option<f64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FrameKind {
    Born,
    AdversarialSquare,
}

#[derive(Debug, Args)]
struct VerifyFrameArgs {
    #[arg(long, value_name = "PATH", required_unless_present = "kind")]
    frame: Option<PathBuf>,
    /// Built-in frame instead of a file.
    #[arg(long, value_enum, conflicts_with = "frame", requires = "dim")]
    kind: Option<FrameKind>,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Grid points per restriction line.
    #[arg(long, default_value_t = 100)]
    samples: usize,
}

#[derive(Debug, Subcommand)]
enum CauchyCommand {
    /// Grid function with f(a/N) = v and its linearity check.
    Grid {
        #[arg(long, value_parser = rational, allow_hyphen_values = true)]
        a: BigRational,
        #[arg(long)]
        n: u64,
        #[arg(long, value_parser = rational, allow_hyphen_values = true)]
        v: BigRational,
    },
    /// Point x in (0, a] where alpha·p + beta·q exceeds the bound.
    Witness {
        #[arg(long, value_parser = rational, allow_hyphen_values = true)]
        alpha: BigRational,
        #[arg(long, value_parser = rational, allow_hyphen_values = true)]
        beta: BigRational,
        #[arg(long, value_parser = rational, allow_hyphen_values = true)]
        bound: BigRational,
        #[arg(long, value_parser = rational, default_value = "1")]
        interval: BigRational,
    },
    /// Evaluate the real-line extension of a stored additive function.
    Extend {
        #[arg(long = "in", value_name = "PATH")]
        input: PathBuf,
        #[arg(long, value_parser = rational, allow_hyphen_values = true)]
        x: BigRational,
        /// Coefficient of √2 in the input point.
        #[arg(long, value_parser = rational, allow_hyphen_values = true, default_value = "0")]
        sqrt2: BigRational,
        /// Evaluate n·f(x/n) with this n instead of the minimal one.
        #[arg(long)]
        modulus: Option<u64>,
    },
    /// Search for a counterexample to a regularity condition.
    Condition {
        #[arg(long, value_parser = rational, allow_hyphen_values = true)]
        alpha: BigRational,
        #[arg(long, value_parser = rational, allow_hyphen_values = true)]
        beta: BigRational,
        #[arg(long, value_parser = condition)]
        which: Condition,
        #[arg(long, value_parser = rational, allow_hyphen_values = true)]
        bound: Option<BigRational>,
        #[arg(long, value_parser = rational)]
        epsilon: Option<BigRational>,
        #[arg(long, value_parser = rational, default_value = "1")]
        interval: BigRational,
        #[arg(long, default_value_t = 64)]
        budget: usize,
        #[arg(long, default_value_t = 16)]
        depth: usize,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct ValidateArgs {
    #[arg(long, value_name = "PATH")]
    pom: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    mic: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    effect: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    density: Option<PathBuf>,
}

fn rational(s: &str) -> Result<BigRational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn condition(s: &str) -> Result<Condition, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Failure that aborts a subcommand before a verdict exists.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::CertificateNotFound { .. } | Error::RetryLimit { .. } => 1,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type CmdResult = Result<Value, Failure>;

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure {
        code: 2,
        message: format!("{}: {e}", path.display()),
    })?;
    serde_json::from_str(&text).map_err(|e| Failure {
        code: 2,
        message: format!("{}: {e}", path.display()),
    })
}

/// Adds the shared fields and derives the verdict from `violated`.
fn finish(mut body: Value, violated: Vec<String>, tol: &ToleranceConfig) -> Value {
    let map = body.as_object_mut().expect("reports are JSON objects");
    map.insert(
        "verdict".into(),
        json!(if violated.is_empty() { "pass" } else { "fail" }),
    );
    map.insert("violated".into(), json!(violated));
    map.insert("tolerances".into(), json!(tol));
    body
}

fn verdict_failed(report: &Value) -> bool {
    report["verdict"] == "fail"
}

/// Parses `args` (including the program name), runs the subcommand and
/// writes the report to standard output or `--out`.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = io::stdout();
    let stderr = io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

/// [`run`] with explicit output streams.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };

    let tol = match cli.tol_residual {
        None => Ok(ToleranceConfig::default()),
        Some(r) => ToleranceConfig::default().with_residual(r),
    };
    let result = tol
        .map_err(Failure::from)
        .and_then(|tol| dispatch(&cli.command, &tol));
    let (report, code) = match result {
        Ok(report) => {
            let code = if verdict_failed(&report) { 1 } else { 0 };
            (report, code)
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            (json!({ "error": f.message, "exit_code": f.code }), f.code)
        }
    };

    let text = if cli.pretty {
        serde_json::to_string_pretty(&report)
    } else {
        serde_json::to_string(&report)
    }
    .expect("reports serialize");
    match &cli.out {
        Some(path) => {
            if let Err(e) = fs::write(path, format!("{text}\n")) {
                let _ = writeln!(err, "error: {}: {e}", path.display());
                return 2;
            }
        }
        None => {
            let _ = writeln!(out, "{text}");
        }
    }
    code
}

fn dispatch(command: &Command, tol: &ToleranceConfig) -> CmdResult {
    match command {
        Command::Reconstruct(a) => reconstruct(a, tol),
        Command::CertifyCone(a) => certify_cone(a, tol),
        Command::Augbasis(a) => augbasis(a, tol),
        Command::VerifyFrame(a) => verify_frame(a, tol),
        Command::Cauchy(c) => cauchy(c, tol),
        Command::Validate(a) => validate(a, tol),
    }
}

fn reconstruct(args: &ReconstructArgs, tol: &ToleranceConfig) -> CmdResult {
    let (state_seed, mic_seed, check_seed) = (
        args.seed,
        args.seed.wrapping_add(1),
        args.seed.wrapping_add(2),
    );
    let (frame, hidden): (Frame, Option<HermitianOperator>) = match &args.frame {
        Some(path) => (read_json::<FrameJson>(path)?.into_frame(tol)?, None),
        None => {
            let d = args.dim.expect("clap enforces --dim without --frame");
            let state = random_density(d, state_seed)?;
            let op = state.op().clone();
            (Frame::Born(BornFrame { state }), Some(op))
        }
    };
    let d = frame.dim();
    if let Some(dim) = args.dim {
        if dim != d {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: d,
            }
            .into());
        }
    }
    let mic = match args.mic {
        MicChoice::Random => random_mic_pom(d, mic_seed, tol)?,
        MicChoice::Sic => sic_mic_pom(d, tol)?,
    };
    let onb = orthonormal_operator_basis(d)?;
    let report = reconstruct_density(&frame, &mic, &onb, check_seed, tol)?;
    let distance = hidden.map(|h| (&report.rho_hat - &h).norm());
    let violated = report.violated.clone();
    let mut body = serde_json::to_value(&report).map_err(Error::from)?;
    let map = body.as_object_mut().expect("object");
    map.remove("verdict");
    map.remove("violated");
    map.insert("command".into(), json!("reconstruct"));
    map.insert("dim".into(), json!(d));
    map.insert(
        "seeds".into(),
        json!({ "state": state_seed, "mic": mic_seed, "verification": check_seed }),
    );
    map.insert(
        "mic".into(),
        json!(match args.mic {
            MicChoice::Random => "random",
            MicChoice::Sic => "sic",
        }),
    );
    map.insert("hidden_state_distance".into(), json!(distance));
    debug_assert!(matches!(report.verdict, Verdict::Pass) == violated.is_empty());
    Ok(finish(body, violated, tol))
}

fn certify_cone(args: &CertifyArgs, tol: &ToleranceConfig) -> CmdResult {
    if let Some(path) = &args.verify {
        let value: Value = read_json(path)?;
        let cert_value = match value.get("certificate") {
            Some(inner) if inner.is_object() => inner.clone(),
            _ => value,
        };
        let cert: SpanCertificate = serde_json::from_value(cert_value).map_err(|e| Failure {
            code: 2,
            message: format!("{}: {e}", path.display()),
        })?;
        let check = verify_certificate(&cert, tol)?;
        let violated = check.failures.clone();
        let body = json!({
            "command": "certify-cone",
            "mode": "verify",
            "certificate": path.display().to_string(),
            "check": check,
        });
        return Ok(finish(body, violated, tol));
    }
    let d = args.dim.expect("clap enforces --dim");
    let seed = args.seed.expect("clap enforces --seed");
    let epsilon = args.epsilon.unwrap_or_else(|| default_epsilon(d));
    let b = augmented_basis_from_onb(&computational_onb(d), tol)?;
    let m = random_mic_pom(d, seed, tol)?;
    let cert = intersection_span_certificate(&b, &m, epsilon, seed, tol)?;
    // Re-check the serialized form, as an independent consumer would.
    let round_trip: SpanCertificate =
        serde_json::from_value(serde_json::to_value(&cert).map_err(Error::from)?)
            .map_err(Error::from)?;
    let check = verify_certificate(&round_trip, tol)?;
    let violated = check.failures.clone();
    let body = json!({
        "command": "certify-cone",
        "mode": "build",
        "dim": d,
        "seed": seed,
        "certificate": cert,
        "check": check,
    });
    Ok(finish(body, violated, tol))
}

fn augbasis(args: &AugArgs, tol: &ToleranceConfig) -> CmdResult {
    let d = args.dim;
    if d < 2 {
        return Err(Error::UnsupportedDimension(d).into());
    }
    let onb = match args.seed {
        Some(seed) => random_orthonormal_basis(d, &mut rng_from_seed(seed), tol)?,
        None => computational_onb(d),
    };
    let b = match args.c {
        Some(c) => augmented_basis_with_scale(&onb, c, tol)?,
        None => augmented_basis_from_onb(&onb, tol)?,
    };
    let report = validate_augmented(&b, tol)?;
    let violated = report
        .conditions
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.name.to_string())
        .collect();
    let body = json!({
        "command": "augbasis",
        "dim": d,
        "seed": args.seed,
        "onb": if args.seed.is_some() { "random" } else { "computational" },
        "c": b.c(),
        "gamma": b.gamma(),
        "elements": b.elements(),
        "completion_element": b.completion_element()?,
        "conditions": report.conditions,
    });
    Ok(finish(body, violated, tol))
}

fn verify_frame(args: &VerifyFrameArgs, tol: &ToleranceConfig) -> CmdResult {
    let frame = match (&args.frame, args.kind) {
        (Some(path), _) => read_json::<FrameJson>(path)?.into_frame(tol)?,
        (None, Some(kind)) => {
            let d = args.dim.expect("clap enforces --dim with --kind");
            match kind {
                FrameKind::Born => Frame::Born(BornFrame {
                    state: random_density(d, args.seed)?,
                }),
                FrameKind::AdversarialSquare => Frame::AdversarialSquare(SquareFrame {
                    state: DensityOperator::basis_state(d, 0),
                }),
            }
        }
        (None, None) => unreachable!("clap requires --frame or --kind"),
    };
    let d = frame.dim();
    let additivity = check_additivity(&frame, args.trials, args.seed, tol)?;
    let (lo, hi) = sample_range(&frame, args.trials, args.seed.wrapping_add(1), tol)?;
    let b = augmented_basis_from_onb(&computational_onb(d), tol)?;
    let restriction = (0..d * d)
        .map(|j| restriction_linearity_check(&frame, &b, j, args.samples.max(2), tol))
        .collect::<Result<Vec<_>, _>>()?;

    let mut violated = Vec::new();
    if additivity.max_violation > tol.residual {
        violated.push("additivity".to_string());
    }
    if additivity.identity_violation > tol.residual {
        violated.push("normalization".to_string());
    }
    if lo < -tol.psd_slack || hi > 1.0 + tol.psd_slack {
        violated.push("range".to_string());
    }
    let body = json!({
        "command": "verify-frame",
        "dim": d,
        "seed": args.seed,
        "additivity": additivity,
        "range": { "min": lo, "max": hi, "samples": args.trials },
        "restriction": restriction,
    });
    Ok(finish(body, violated, tol))
}

fn cauchy(command: &CauchyCommand, tol: &ToleranceConfig) -> CmdResult {
    match command {
        CauchyCommand::Grid { a, n, v } => {
            let g = grid_from_unit(a.clone(), *n, v.clone())?;
            let lin = check_linear(&g)?;
            let violated = if lin.is_linear {
                vec![]
            } else {
                vec!["linearity".to_string()]
            };
            let body = json!({
                "command": "cauchy grid",
                "function": g,
                "linearity": lin,
            });
            Ok(finish(body, violated, tol))
        }
        CauchyCommand::Witness {
            alpha,
            beta,
            bound,
            interval,
        } => {
            let f = QSqrt2Additive::new(alpha.clone(), beta.clone());
            let w = unboundedness_witness(&f, bound, interval)?;
            let violated = if w.verify(&f) {
                vec![]
            } else {
                vec!["witness".to_string()]
            };
            let body = json!({
                "command": "cauchy witness",
                "model": f,
                "nonlinear": f.is_nonlinear(),
                "witness": w,
            });
            Ok(finish(body, violated, tol))
        }
        CauchyCommand::Extend {
            input,
            x,
            sqrt2,
            modulus,
        } => {
            let base = read_extension_base(input)?;
            let point = QSqrt2::new(x.clone(), sqrt2.clone());
            if let Err(e) = base.check_invariants() {
                let body = json!({
                    "command": "cauchy extend",
                    "x": point,
                    "invariant_error": e.to_string(),
                });
                return Ok(finish(body, vec!["base-invariants".into()], tol));
            }
            let view = ExtensionView::new(base)?;
            let value = view.f_real(&point)?;
            let mirror = view.f_real(&-&point)?;
            let antisymmetric = &value.value + &mirror.value == BigRational::from_integer(0.into());
            let explicit = match modulus {
                None => None,
                Some(n) => {
                    if point.is_negative() {
                        return Err(Error::InvalidArgument(
                            "an explicit modulus applies to nonnegative inputs".into(),
                        )
                        .into());
                    }
                    let v = view.f_plus_with_modulus(&point, &BigInt::from(*n))?;
                    Some(
                        json!({ "modulus": n, "value": v.to_string(), "agrees": v == value.value }),
                    )
                }
            };
            let mut violated = Vec::new();
            if !antisymmetric {
                violated.push("antisymmetry".to_string());
            }
            if explicit.as_ref().is_some_and(|e| e["agrees"] == false) {
                violated.push("modulus-independence".to_string());
            }
            let body = json!({
                "command": "cauchy extend",
                "result": value,
                "explicit_modulus": explicit,
            });
            Ok(finish(body, violated, tol))
        }
        CauchyCommand::Condition {
            alpha,
            beta,
            which,
            bound,
            epsilon,
            interval,
            budget,
            depth,
        } => {
            let f = QSqrt2Additive::new(alpha.clone(), beta.clone());
            let params = SearchParams {
                a: interval.clone(),
                bound: bound.clone(),
                epsilon: epsilon.clone(),
                budget: *budget,
                depth: *depth,
            };
            let report = check_condition(&f, *which, &params)?;
            let violated = if report.holds_on_searched_region {
                vec![]
            } else {
                vec![serde_json::to_value(which)
                    .ok()
                    .and_then(|v| v.as_str().map(String::from))
                    .unwrap_or_default()]
            };
            let body = json!({
                "command": "cauchy condition",
                "model": f,
                "params": params,
                "report": report,
            });
            Ok(finish(body, violated, tol))
        }
    }
}

/// Accepts a bare base, a bare grid table, or a `cauchy grid` report.
fn read_extension_base(path: &Path) -> Result<ExtensionBase, Failure> {
    let value: Value = read_json(path)?;
    let candidate = match value.get("function") {
        Some(inner) if value.get("command").is_some() => inner.clone(),
        _ => value,
    };
    if candidate.get("kind").is_some() {
        return serde_json::from_value(candidate).map_err(|e| Error::from(e).into());
    }
    let g: GridAdditiveFunction = serde_json::from_value(candidate).map_err(Error::from)?;
    Ok(ExtensionBase::Grid(g))
}

fn validate(args: &ValidateArgs, tol: &ToleranceConfig) -> CmdResult {
    if let Some(path) = args.pom.as_ref().or(args.mic.as_ref()) {
        let is_mic = args.mic.is_some();
        let pom: PomJson = read_json(path)?;
        pom.check_dims()?;
        let report = validate_pom(&pom.effects, tol)?;
        let mut violated: Vec<String> = report
            .violations
            .iter()
            .map(|v| v.invariant.to_string())
            .collect();
        let mut rank = Value::Null;
        if is_mic {
            let n = pom.dim * pom.dim;
            if pom.effects.len() != n {
                violated.push("count".to_string());
            }
            match OperatorBasis::new(pom.effects.clone(), BasisKind::MicPom, tol) {
                Ok(b) => rank = json!(b.rank_info()),
                Err(Error::SingularBasis { rank: r, .. }) => {
                    rank = json!({ "rank": r });
                    violated.push("linear-independence".to_string());
                }
                Err(Error::WrongBasisSize { .. }) => {}
                Err(e) => return Err(e.into()),
            }
        }
        violated.dedup();
        let body = json!({
            "command": "validate",
            "kind": if is_mic { "mic" } else { "pom" },
            "report": report,
            "rank": rank,
        });
        return Ok(finish(body, violated, tol));
    }
    if let Some(path) = &args.effect {
        let op: HermitianOperator = read_json(path)?;
        let check = is_effect(&op, tol)?;
        let violated = if check.is_effect {
            vec![]
        } else {
            vec!["effect".to_string()]
        };
        let body = json!({ "command": "validate", "kind": "effect", "report": check });
        return Ok(finish(body, violated, tol));
    }
    let path = args.density.as_ref().expect("clap requires one input");
    let op: HermitianOperator = read_json(path)?;
    let trace = op.trace();
    let min_eigenvalue = eig_hermitian(&op, tol)?.min();
    let mut violated = Vec::new();
    if (trace - 1.0).abs() > tol.residual {
        violated.push("unit-trace".to_string());
    }
    if min_eigenvalue < -tol.psd_slack {
        violated.push("positivity".to_string());
    }
    let body = json!({
        "command": "validate",
        "kind": "density",
        "report": { "trace": trace, "min_eigenvalue": min_eigenvalue },
    });
    Ok(finish(body, violated, tol))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("gleason").chain(args.iter().copied());
        let code = run_with(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn unknown_flag_is_usage_error() {
        let (code, _, err) = run_capture(&["reconstruct", "--dim", "2", "--seed", "1", "--bogus"]);
        assert_eq!(code, 2);
        assert!(err.contains("Usage"));
    }

    #[test]
    fn help_exits_zero() {
        let (code, out, _) = run_capture(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("reconstruct"));
    }

    #[test]
    fn reconstruct_reports_tolerances() {
        let (code, out, _) = run_capture(&["reconstruct", "--dim", "2", "--seed", "1"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert!(v["max_deviation"].as_f64().unwrap() < 1e-8);
        assert_eq!(v["tolerances"]["residual"], 1e-8);
        assert_eq!(v["verdict"], "pass");
    }

    #[test]
    fn cauchy_grid_and_witness() {
        let (code, out, _) =
            run_capture(&["cauchy", "grid", "--a", "1", "--n", "10", "--v", "7/100"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["linearity"]["slope"], "7/10");

        let (code, out, _) = run_capture(&[
            "cauchy",
            "witness",
            "--alpha",
            "1",
            "--beta",
            "0",
            "--bound",
            "10",
            "--interval",
            "1",
        ]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["witness"]["x"]["p"], "17");
        assert_eq!(v["witness"]["x"]["q"], "-12");
    }

    #[test]
    fn bad_rational_is_invalid_input() {
        let (code, _, _) = run_capture(&["cauchy", "grid", "--a", "1/0", "--n", "1", "--v", "1"]);
        assert_eq!(code, 2);
        let (code, out, _) = run_capture(&["cauchy", "grid", "--a", "1", "--n", "0", "--v", "1"]);
        assert_eq!(code, 2);
        assert!(out.contains("\"error\""));
    }
}
