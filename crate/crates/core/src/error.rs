use alloc::string::String;
use core::fmt;

/// Everything that can go wrong in the core crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A decision lies outside the decision space.
    InvalidDecision { round: usize },
    /// No point of finite cost exists for the argmin oracle in this round.
    InfeasibleRound { round: usize },
    /// A hyperparameter or construction parameter is out of range.
    InvalidParameter { name: &'static str, reason: String },
    /// The instance violates an assumption of the requested method
    /// (non-convex cost, non-metric switching, ...).
    ModelViolation(String),
    /// The decision space is too large for an exact enumeration.
    SpaceTooLarge { size: usize, limit: usize },
    /// Malformed instance or grid configuration.
    Config(String),
    /// An LP came back infeasible or unbounded.
    Lp(LpStatus),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Infeasible,
    Unbounded,
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// Errors caused by a model assumption rather than by bad configuration.
    pub fn is_model_violation(&self) -> bool {
        matches!(self, Error::ModelViolation(_) | Error::InfeasibleRound { .. })
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidDecision { round } => {
                write!(f, "decision in round {round} lies outside the decision space")
            }
            Error::InfeasibleRound { round } => {
                write!(f, "round {round}: every candidate point has infinite cost")
            }
            Error::InvalidParameter { name, reason } => {
                write!(f, "invalid parameter `{name}`: {reason}")
            }
            Error::ModelViolation(msg) => write!(f, "model violation: {msg}"),
            Error::SpaceTooLarge { size, limit } => {
                write!(f, "decision space has {size} points, exact method supports at most {limit}")
            }
            Error::Config(msg) => write!(f, "configuration error: {msg}"),
            Error::Lp(LpStatus::Infeasible) => write!(f, "linear program is infeasible"),
            Error::Lp(LpStatus::Unbounded) => write!(f, "linear program is unbounded"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
