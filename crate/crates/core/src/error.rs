use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("vector contains a non-finite coordinate at index {0}")]
    NonFinite(usize),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("invalid norm exponent p = {0}; expected 1 < p < inf")]
    InvalidExponent(f64),

    #[error("norming functional of the zero vector is undefined")]
    ZeroVector,

    #[error("subspace has no orthonormal basis")]
    MissingOrthonormalBasis,

    #[error("linear program failed: {0}")]
    Lp(#[from] crate::lp::LpError),

    #[error("descent solver did not reach tolerance {tol:e} within {iterations} iterations")]
    IterationCap { tol: f64, iterations: usize },

    #[error("{norm} solver certificate gap {gap:e} exceeds tolerance {tol:e}")]
    CertificateGap { norm: String, gap: f64, tol: f64 },

    #[error("invalid compact set: {0}")]
    InvalidSet(String),

    #[error("compact set is empty")]
    EmptySet,

    #[error("greedy step {step}: {source}")]
    Step {
        step: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("operation requires a {expected} trace")]
    WrongMode { expected: &'static str },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("index out of range: {0}")]
    IndexRange(String),
}

impl Error {
    pub(crate) fn at_step(self, step: usize) -> Self {
        Error::Step {
            step,
            source: Box::new(self),
        }
    }
}
