use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("unknown check: {0}")]
    UnknownCheck(String),
    #[error("unknown suite: {0}")]
    UnknownSuite(String),
    #[error("check {check} is not part of suite {suite}")]
    NotInSuite { check: String, suite: String },
    #[error("malformed config: {0}")]
    Config(String),
    #[error("malformed report: {0}")]
    Report(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
