use thiserror::Error;

pub type Result<T, E = PrvoError> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PrvoError {
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("covariance is not positive semidefinite (min eigenvalue {min_eigenvalue})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("invalid interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },

    #[error("degenerate polynomial")]
    DegeneratePolynomial,

    #[error("polynomial degree {0} exceeds 4")]
    DegreeTooHigh(usize),

    #[error("degenerate relative velocity")]
    DegenerateRelativeVelocity,

    #[error("degree assumption violated (residual {residual:e} at held-out node)")]
    DegreeAssumptionViolated { residual: f64 },

    #[error("variance vanishes along path")]
    VanishingVariance,

    #[error("unreachable confidence {0}")]
    UnreachableConfidence(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("in collision at mean")]
    InCollisionAtMean,
}
