use thiserror::Error;

use crate::steady::SteadyState;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument outside the domain of a formula (e.g. a non-positive
    /// frequency).
    #[error("domain error: {0}")]
    Domain(String),

    /// A physical parameter set that violates the model invariants.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParam { name: &'static str, reason: String },

    /// A vanishing denominator in a closed-form steady-state expression.
    #[error("degenerate denominator in {0}")]
    Degenerate(&'static str),

    #[error("self-consistent steady state did not converge after {iterations} iterations")]
    NonConvergence {
        iterations: usize,
        last: Box<SteadyState>,
    },

    /// The drift matrix has an eigenvalue with non-negative real part.
    #[error("unstable drift matrix (max Re λ = {max_real_eig:.6e} rad/s)")]
    Unstable { max_real_eig: f64 },

    /// A covariance matrix or derived quantity that is not a valid quantum
    /// state beyond round-off.
    #[error("unphysical state: {0}")]
    Physicality(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("usage error: {0}")]
    Usage(String),
}

impl Error {
    /// Process exit code used by the command line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Usage(_) | Error::InvalidParam { .. } => 2,
            _ => 3,
        }
    }
}
