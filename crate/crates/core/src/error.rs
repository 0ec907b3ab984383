use thiserror::Error;

/// Errors raised by the capacity library.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The operation is undefined exactly at the threshold μκ = 1.
    #[error("unsupported at threshold μκ = 1 (kappa = {kappa}, mu = {mu})")]
    AtThreshold { kappa: f64, mu: f64 },

    /// The closed form requested does not cover these parameters.
    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),

    /// η(z) has a vanishing denominator (μκ = 1, z = 0).
    #[error("singular point of the spectral symbol at z = {z}")]
    Singular { z: f64 },

    /// Adaptive quadrature ran out of evaluations.
    #[error(
        "quadrature did not converge after {evaluations} evaluations (estimate {estimate}, error {error_estimate})"
    )]
    Quadrature {
        estimate: f64,
        error_estimate: f64,
        evaluations: usize,
    },

    /// A root or multiplier search failed.
    #[error("solver failure: {0}")]
    Solver(String),

    /// A requested matrix size exceeds the configured cap.
    #[error("matrix size {requested} exceeds the cap of {cap} (set GAUSSMEM_MAX_N to raise it)")]
    Resource { requested: usize, cap: usize },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for failures of a numerical method, as opposed to invalid input.
    pub fn is_solver_failure(&self) -> bool {
        matches!(self, Error::Quadrature { .. } | Error::Solver(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
