use thiserror::Error;

/// Failures raised by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("iteration did not converge: {0}")]
    ConvergenceFailure(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("matrix is not numerically positive definite (pivot {pivot} = {value:e})")]
    FactorizationFailure { pivot: usize, value: f64 },

    #[error("parameter window violated: {0}")]
    ConditionViolated(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl Error {
    /// Process exit code used by the command line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidConfig(_)
            | Error::InvalidArgument(_)
            | Error::ConditionViolated(_)
            | Error::Io(_) => 2,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
