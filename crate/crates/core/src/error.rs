use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid chain: {0}")]
    InvalidSpec(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The analytic formula set does not cover these parameters.
    #[error("outside analytic regime: {0}; use the numeric eigensolver")]
    Regime(String),

    #[error("parity mismatch: {0}")]
    Domain(String),

    #[error("delta = {delta} < 1: relabel the couplings and pass 1/delta = {inverse} instead")]
    Convention { delta: f64, inverse: f64 },

    #[error("node {node} out of range 1..={n_sites}")]
    NodeOutOfRange { node: usize, n_sites: usize },

    #[error("eigensolver did not converge: index {index} after {iterations} iterations (off-diagonal {residual:e})")]
    NoConvergence {
        index: usize,
        iterations: usize,
        residual: f64,
    },

    #[error("internal consistency: {0}")]
    Consistency(String),

    /// The smallest positive eigenvalue is so small that the first peak lies
    /// beyond any usable time window.
    #[error("peak horizon unreachable: lambda_min = {lambda_min:e}")]
    Horizon { lambda_min: f64 },

    #[error("resource limit: {0}")]
    Resource(String),
}

impl Error {
    /// True for precondition failures, as opposed to numeric breakdowns.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidSpec(_)
                | Error::InvalidArgument(_)
                | Error::Regime(_)
                | Error::Domain(_)
                | Error::Convention { .. }
                | Error::NodeOutOfRange { .. }
                | Error::Resource(_)
        )
    }
}
