use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes shared by the numerical modules.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("shape mismatch: expected {expected} samples, got {got}")]
    Shape { expected: usize, got: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The iteration budget ran out; `best` is the last estimate and
    /// `residual` the figure of merit it was judged by.
    #[error("no convergence after {iterations} iterations (residual {residual:e}, best estimate {best})")]
    Convergence {
        iterations: usize,
        residual: f64,
        best: f64,
    },

    /// The ground state at these parameters is not bound (mu0 >= 0), or the
    /// amplitude condition cannot be met on the bound branch.
    #[error("no localized state (mu0 = {mu0})")]
    NotLocalized { mu0: f64 },

    #[error("no localized solution for u = {u}, n_c = {n_c} anywhere in the scanned radii")]
    NoLocalizedSolution { u: f64, n_c: f64 },

    #[error("need at least {needed} localized points, got {got}")]
    InsufficientPoints { needed: usize, got: usize },

    #[error("degenerate fit data: {0}")]
    Rank(String),

    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    /// True for the outcomes that mean "no bound condensate here" rather
    /// than a numerical failure.
    pub fn is_not_localized(&self) -> bool {
        matches!(
            self,
            Error::NotLocalized { .. } | Error::NoLocalizedSolution { .. }
        )
    }
}
