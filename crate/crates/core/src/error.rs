use num_complex::Complex64;
use thiserror::Error;

/// Failure modes shared by the special functions, the Mellin engine and the
/// verification chain.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{function} has a pole at or near {at}")]
    Pole {
        function: &'static str,
        at: Complex64,
    },

    /// The computation produced a best-effort `value`, but its error estimate
    /// is above the requested tolerance.
    #[error("{what} did not converge: estimate {estimate:e} > tolerance {tolerance:e}")]
    NonConvergence {
        what: &'static str,
        value: Complex64,
        estimate: f64,
        tolerance: f64,
        work: usize,
    },

    #[error("prefactor 1 - 2^(1-s) vanishes near s = {at}")]
    DivisionHazard { at: Complex64 },

    #[error("{what}: argument {at} outside the supported domain ({reason})")]
    Domain {
        what: &'static str,
        at: Complex64,
        reason: &'static str,
    },

    #[error("partial-sum supremum {sup} exceeds bound {bound}")]
    BoundExceeded { sup: f64, bound: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    pub fn is_non_convergence(&self) -> bool {
        matches!(self, Error::NonConvergence { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
