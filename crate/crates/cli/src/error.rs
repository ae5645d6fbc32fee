use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Domain(#[from] photon_clusters::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("cannot parse output: {0}")]
    Parse(String),
    #[error("{0} verification check(s) failed")]
    VerifyFailed(usize),
    /// Help or version text requested; not a failure.
    #[error("{0}")]
    Display(String),
}

impl CliError {
    /// 0 success, 1 numeric domain error, 2 usage error, 3 verification failure.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Display(_) => 0,
            CliError::Usage(_) => 2,
            CliError::VerifyFailed(_) => 3,
            CliError::Domain(_) | CliError::Io(_) | CliError::Csv(_) | CliError::Parse(_) => 1,
        }
    }
}

pub fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}
