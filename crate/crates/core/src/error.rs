use thiserror::Error;

/// Errors surfaced by the numerical pipeline.
///
/// Anything that is a legitimate *outcome* (an energy that cannot be
/// classified, a non-converged diagnostic) is reported through result types,
/// not through this enum; `Error` is for contract violations and genuine
/// failures.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("operation requires a not-identically-zero polynomial")]
    ZeroPolynomial,

    #[error("{what} requires torus dimension {required}, model has {got}")]
    DimensionUnsupported {
        what: &'static str,
        required: usize,
        got: usize,
    },

    #[error("sampling function v is not real-valued: coefficient at k={k:?} violates a(-k) = conj(a(k)) by {violation:.3e}")]
    NonHermitian { k: Vec<i64>, violation: f64 },

    #[error("singular phase: |c| = {cabs:.3e} at orbit site {site} (phase offset {phase:?})")]
    SingularPhase {
        site: i64,
        phase: Vec<f64>,
        cabs: f64,
    },

    #[error("quadrature did not converge: last two estimates {previous} and {last}")]
    QuadratureNonConvergence { previous: f64, last: f64 },

    #[error("polynomial root finding did not converge (degree {degree})")]
    RootsNonConvergence { degree: usize },

    #[error("m-function solve did not converge: residual {residual:.3e} at truncation size {m_size}")]
    MNonConvergence { residual: f64, m_size: usize },

    #[error("{what} requires Im E > 0, got Im E = {im_e}")]
    NeedsComplexEnergy { what: &'static str, im_e: f64 },

    #[error("projective point lies in the kernel of the matrix")]
    KernelHit,

    #[error("Mobius derivative pole at z (chart phi_2); switch charts")]
    ChartPole,

    #[error("sections degenerate: |s_+ - s_-| = {gap:.3e}, energy too close to the spectrum")]
    DivisionDegenerate { gap: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
