use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function it was passed to.
    #[error("{what} = {value} is outside its domain {domain}")]
    Domain {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },

    /// The target of a monotone root search is not enclosed by the bracket.
    #[error("target {target} is not bracketed by f({lo}) = {f_lo} and f({hi}) = {f_hi}")]
    Bracket {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
        target: f64,
    },

    #[error("{routine} did not converge within {max_iters} iterations")]
    IterationLimit {
        routine: &'static str,
        max_iters: usize,
    },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// A probability vector or transition matrix is malformed.
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    /// A hypothesis required by a result does not hold (for example `C12 <= C1 - C2`).
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A computation would exceed its configured resource budget.
    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("frontier is empty")]
    EmptyFrontier,

    #[error("malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(what: &'static str, value: f64, domain: &'static str) -> Error {
    Error::Domain {
        what,
        value,
        domain,
    }
}
