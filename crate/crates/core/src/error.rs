use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A parameter violated a documented constraint.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// The instance is larger than the exhaustive routines accept.
    #[error("unsupported size: {0}")]
    UnsupportedSize(String),

    /// A precondition on the numeric input did not hold (e.g. asymmetric matrix).
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// The simplex method hit its iteration cap.
    #[error("degenerate pivot limit reached after {iterations} iterations")]
    DegeneratePivotLimit { iterations: usize },

    /// The SDP iteration did not reach the requested accuracy.
    ///
    /// `lower` is the best objective of a feasible-rounded primal point and
    /// `upper` the best dual-type bound found, when available.
    #[error("SDP did not converge after {iterations} iterations (bounds [{lower}, {upper}])")]
    SdpNoConvergence {
        iterations: usize,
        lower: f64,
        upper: f64,
    },

    /// Two vectors in a vector system span the same ray.
    #[error("vectors {0} and {1} span the same ray")]
    DuplicateRay(usize, usize),

    /// Malformed serialized input.
    #[error("malformed input: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parameter(msg.into()))
}
