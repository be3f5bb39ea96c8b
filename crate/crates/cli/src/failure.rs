use std::fmt;
use std::process::ExitCode;

use forcing_lab::Error;

/// Why a command stopped, mapped onto the process exit status.
#[derive(Debug)]
pub enum Failure {
    /// Bad flags, unreadable inputs, malformed traces or families.
    Usage(String),
    /// A decoder or check rejected its input.
    Check(String),
    /// A construction broke one of its own invariants.
    Internal(String),
}

impl Failure {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            Failure::Check(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Internal(_) => 3,
        })
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "usage error: {m}"),
            Failure::Check(m) => write!(f, "check failed: {m}"),
            Failure::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::FamilySpec(_)
            | Error::InvalidArgument(_)
            | Error::Parse(_)
            | Error::BadArity { .. }
            | Error::EmptyFamily { .. }
            | Error::PayloadExhausted { .. } => Failure::Usage(msg),
            Error::IncompatibleCommitment { .. } | Error::WitnessViolation(_) => {
                Failure::Internal(msg)
            }
            Error::Incompatible { .. }
            | Error::BudgetExceeded { .. }
            | Error::NoMarker { .. }
            | Error::NoSubRoundMarker { .. }
            | Error::NoAntichainHit { .. }
            | Error::ConsistencyFailure { .. }
            | Error::RetryBudgetExceeded { .. } => Failure::Check(msg),
        }
    }
}

pub type Outcome<T> = Result<T, Failure>;

pub fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}
