use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} variables, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("too many variables: {0} (at most {max} supported)", max = crate::poly::MAX_VARS)]
    TooManyVariables(usize),

    #[error("dimension {dim} exceeds the supported maximum {max}")]
    DimensionTooLarge { dim: usize, max: usize },

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("computation limit exceeded: {0}")]
    ComputationLimit(String),

    #[error("genericity failure: {0}")]
    GenericityFailure(String),

    #[error("initial ideal generator {0} involves the last variable")]
    LastVariable(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("polyhedron is unbounded")]
    Unbounded,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
