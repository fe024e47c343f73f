use thiserror::Error;

/// Everything the command line can fail with; each variant has its own
/// process exit status.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot parse instance: {0}")]
    Parse(String),
    #[error("unsupported algorithm: {0}")]
    UnknownAlgorithm(String),
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    #[error("malformed witness: {0}")]
    MalformedWitness(String),
    #[error("invalid request: {0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) | CliError::Parse(_) => 3,
            CliError::UnknownAlgorithm(_) => 4,
            CliError::Resource(_) => 5,
            CliError::MalformedWitness(_) => 6,
            CliError::Usage(_) => 7,
        }
    }
}

impl From<binapprox::Error> for CliError {
    fn from(e: binapprox::Error) -> Self {
        match e {
            binapprox::Error::Resource(msg) => CliError::Resource(msg),
            other => CliError::Usage(other.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
