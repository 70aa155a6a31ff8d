use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or inconsistent input: infeasible allocations, dimension
    /// mismatches, out-of-range parameters, unparsable rationals.
    #[error("invalid input: {0}")]
    Input(String),

    /// Fictitious play hit its iteration cap before the value bounds closed.
    #[error("fictitious play did not converge after {iterations} iterations (value bounds [{lower}, {upper}])")]
    Convergence {
        iterations: u64,
        lower: f64,
        upper: f64,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }
}
