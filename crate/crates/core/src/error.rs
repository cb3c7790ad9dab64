use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),

    #[error("operator is not Hermitian (asymmetry {asymmetry:e})")]
    NotHermitian { asymmetry: f64 },

    #[error("operator has non-finite entries")]
    NonFinite,

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("basis is numerically singular: rank {rank} < {expected} (smallest singular value {smallest:e})")]
    SingularBasis {
        rank: usize,
        expected: usize,
        smallest: f64,
    },

    #[error("expected {expected} basis elements, found {found}")]
    WrongBasisSize { expected: usize, found: usize },

    #[error("not an effect: eigenvalue {eigenvalue} outside [0, 1]")]
    NotAnEffect { eigenvalue: f64 },

    #[error("not a POM: {0}")]
    NotPom(String),

    #[error("not a density operator: {0}")]
    NotDensity(String),

    #[error("vectors are not orthonormal (deviation {deviation:e})")]
    NotOrthonormal { deviation: f64 },

    #[error("zero operator has no maximal scale")]
    ZeroOperator,

    #[error("scale c = {c} rejected: {reason}")]
    InvalidScale { c: f64, reason: String },

    #[error("random MIC-POM generation failed after {attempts} attempts (seed {seed})")]
    RetryLimit { seed: u64, attempts: usize },

    #[error("epsilon {epsilon} too large: E_delta has eigenvalue {eigenvalue} outside [0, 1]")]
    EpsilonTooLarge { epsilon: f64, eigenvalue: f64 },

    #[error("span certificate not found: {stage}")]
    CertificateNotFound { stage: String },

    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),

    #[error("invalid tolerance configuration: {0}")]
    InvalidTolerance(String),

    #[error("grid table is not additive: f({left}) + f({right}) differs from f({left} + {right}) (in units of a/N)")]
    NotAdditive { left: u64, right: u64 },

    #[error("grid table must satisfy f(0) = 0")]
    NonzeroAtOrigin,

    #[error("input {0} is outside the exact domain of the model")]
    NotRepresentable(String),

    #[error("cannot parse exact rational from {0:?}")]
    ParseRational(String),

    #[error("degenerate model: {0}")]
    Degenerate(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
