use thiserror::Error;

/// Errors raised by the toolkit. Each variant carries a stable kebab-case
/// code (see [`Error::code`]) used in CLI diagnostics and reports.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty-quadrature: {0}")]
    EmptyQuadrature(String),
    #[error("bad-exponent: {0}")]
    BadExponent(String),
    #[error("bad-alpha: {0}")]
    BadAlpha(String),
    #[error("bad-radius: {0}")]
    BadRadius(String),
    #[error("bad-radii: {0}")]
    BadRadii(String),
    #[error("bad-range: {0}")]
    BadRange(String),
    #[error("bad-lambda: {0}")]
    BadLambda(String),
    #[error("bad-grid: {0}")]
    BadGrid(String),
    #[error("bad-value: {0}")]
    BadValue(String),
    #[error("bad-kernel: {0}")]
    BadKernel(String),
    #[error("bad-weight: {0}")]
    BadWeight(String),
    #[error("grid-mismatch: {0}")]
    GridMismatch(String),
    #[error("not-a-direction: {0}")]
    NotADirection(String),
    #[error("not-locally-integrable: {0}")]
    NotLocallyIntegrable(String),
    #[error("kernel-not-cancelling: defect {0}")]
    KernelNotCancelling(f64),
    #[error("divergent-tail: {0}")]
    DivergentTail(String),
    #[error("marginal-divergence: {0}")]
    MarginalDivergence(String),
    #[error("no-extremal: {0}")]
    NoExtremal(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::EmptyQuadrature(_) => "empty-quadrature",
            Error::BadExponent(_) => "bad-exponent",
            Error::BadAlpha(_) => "bad-alpha",
            Error::BadRadius(_) => "bad-radius",
            Error::BadRadii(_) => "bad-radii",
            Error::BadRange(_) => "bad-range",
            Error::BadLambda(_) => "bad-lambda",
            Error::BadGrid(_) => "bad-grid",
            Error::BadValue(_) => "bad-value",
            Error::BadKernel(_) => "bad-kernel",
            Error::BadWeight(_) => "bad-weight",
            Error::GridMismatch(_) => "grid-mismatch",
            Error::NotADirection(_) => "not-a-direction",
            Error::NotLocallyIntegrable(_) => "not-locally-integrable",
            Error::KernelNotCancelling(_) => "kernel-not-cancelling",
            Error::DivergentTail(_) => "divergent-tail",
            Error::MarginalDivergence(_) => "marginal-divergence",
            Error::NoExtremal(_) => "no-extremal",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
