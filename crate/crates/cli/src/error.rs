use thiserror::Error;

/// Exit codes: 0 success, 1 failed verification, 2 usage or input error,
/// 3 genericity failure, 4 resource limit.
#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] limshape::Error),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{0}")]
    Usage(String),

    #[error("{0} check(s) failed")]
    ChecksFailed(usize),
}

impl CliError {
    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        CliError::Io { path: path.as_ref().display().to_string(), source }
    }

    pub fn exit_code(&self) -> i32 {
        use limshape::Error as E;
        match self {
            CliError::ChecksFailed(_) => 1,
            CliError::Usage(_) | CliError::Io { .. } => 2,
            CliError::Core(e) => match e {
                E::GenericityFailure(_) | E::LastVariable(_) => 3,
                E::ComputationLimit(_) => 4,
                E::SingularMatrix => 1,
                E::Dimension { .. }
                | E::TooManyVariables(_)
                | E::DimensionTooLarge { .. }
                | E::Parse(_)
                | E::InvalidConfig(_)
                | E::Precondition(_)
                | E::Unbounded => 2,
            },
        }
    }
}
