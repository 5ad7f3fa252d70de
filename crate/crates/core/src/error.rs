use std::fmt;

use thiserror::Error;

/// How an integral fails to converge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Divergence {
    /// Integrand decays like `1/t`; the integral grows like a logarithm.
    Logarithmic,
    /// Integrand does not decay fast enough for even a logarithm.
    Power,
}

impl fmt::Display for Divergence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Divergence::Logarithmic => f.write_str("logarithmic"),
            Divergence::Power => f.write_str("power"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("divergent integral ({0})")]
    DivergentIntegral(Divergence),

    #[error("parity mismatch: J({alpha1}, ·) and J({alpha2}, ·) are not rational multiples")]
    ParityMismatch { alpha1: i64, alpha2: i64 },

    #[error("arithmetic on a divergent value")]
    DivergentArithmetic,

    #[error("incompatible transcendental scales: {0} vs {1}")]
    ScaleMismatch(String, String),

    #[error("mixed-degree polynomial operation: degree {0} vs {1}")]
    MixedDegree(u32, u32),

    #[error("symmetry violation: {0}")]
    SymmetryViolation(String),

    #[error("unsupported jet order {0} (maximum is 4)")]
    UnsupportedOrder(u32),

    #[error("tolerance not met: estimate {value:e} with error {error:e} after {subdivisions} subdivisions")]
    ToleranceNotMet {
        value: f64,
        error: f64,
        subdivisions: usize,
    },

    #[error("cancellation failure: {0}")]
    CancellationFailure(String),

    #[error("identity mismatch: {0}")]
    IdentityMismatch(String),

    #[error("precondition violated: {0}")]
    PreconditionViolation(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
