use std::path::PathBuf;

use advice_soco_core::Error as CoreError;
use thiserror::Error;

/// Exit status for invalid flags, config files, instances and guard failures.
pub const EXIT_CONFIG: i32 = 2;
/// Exit status when a model assumption or checked inequality is violated.
pub const EXIT_MODEL: i32 = 3;
/// Exit status for I/O and other failures.
pub const EXIT_OTHER: i32 = 1;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{0}")]
    Core(#[from] CoreError),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Read { .. } => EXIT_CONFIG,
            CliError::Invariant(_) => EXIT_MODEL,
            CliError::Core(e) => match e {
                CoreError::ModelViolation(_)
                | CoreError::InvalidDecision { .. }
                | CoreError::InfeasibleRound { .. } => EXIT_MODEL,
                CoreError::InvalidParameter { .. }
                | CoreError::Config(_)
                | CoreError::SpaceTooLarge { .. }
                | CoreError::Lp(_) => EXIT_CONFIG,
            },
            CliError::Write { .. } | CliError::Io(_) => EXIT_OTHER,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_the_contract() {
        assert_eq!(CliError::config("x").exit_code(), 2);
        assert_eq!(CliError::from(CoreError::InvalidParameter {
            name: "delta",
            reason: "must be positive".into(),
        }).exit_code(), 2);
        assert_eq!(CliError::from(CoreError::ModelViolation("x".into())).exit_code(), 3);
        assert_eq!(CliError::from(CoreError::InfeasibleRound { round: 2 }).exit_code(), 3);
        assert_eq!(CliError::Invariant("x".into()).exit_code(), 3);
    }
}
