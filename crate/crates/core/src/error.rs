use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("space mismatch: {0}")]
    SpaceMismatch(String),

    #[error("resource limit: {what} needs {requested}, cap is {cap}")]
    ResourceLimit {
        what: String,
        requested: usize,
        cap: usize,
    },

    #[error("singular parameters: {0}")]
    Singular(String),

    #[error("no convergence after {iterations} iterations (last residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error(
        "step size underflow at t = {time}: step {step:e}, generator spectral radius ~ {spectral_radius:e}"
    )]
    Stiffness {
        time: f64,
        step: f64,
        spectral_radius: f64,
    },

    #[error("unsupported model: {0}")]
    Unsupported(String),

    #[error("no oscillation: {0}")]
    NoOscillation(String),

    #[error("linear algebra failure: {0}")]
    Linalg(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

impl From<ndarray_linalg::error::LinalgError> for Error {
    fn from(e: ndarray_linalg::error::LinalgError) -> Self {
        Error::Linalg(e.to_string())
    }
}
