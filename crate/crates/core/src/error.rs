use thiserror::Error;

/// Errors raised by constructions, decoders and verifiers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("conditions disagree at cell ({row}, {col})")]
    Incompatible { row: usize, col: usize },

    #[error("search budget of {budget} exhausted before deciding index {index}")]
    BudgetExceeded { index: usize, budget: usize },

    #[error("dense family is empty or has fewer than {needed} sets (has {available})")]
    EmptyFamily { needed: usize, available: usize },

    #[error("payload exhausted after {consumed} bits")]
    PayloadExhausted { consumed: usize },

    #[error("no marker found for coding step {step} within {budget} positions")]
    NoMarker { step: usize, budget: usize },

    #[error("no marker found at stage {stage}, sub-round {round} within {budget} positions")]
    NoSubRoundMarker {
        stage: usize,
        round: usize,
        budget: usize,
    },

    #[error("family arity {found} does not fit the requested construction (expected {expected})")]
    BadArity { expected: usize, found: usize },

    #[error("antichain witness violation: {0}")]
    WitnessViolation(String),

    #[error("no antichain member hit by the {side} filter at round {round}")]
    NoAntichainHit { round: usize, side: Side },

    #[error("decoded history is inconsistent at round {round}: {detail}")]
    ConsistencyFailure { round: usize, detail: String },

    #[error("reveal-and-retry search at stage {stage} exceeded its budget of {budget} attempts")]
    RetryBudgetExceeded { stage: usize, budget: usize },

    #[error("commitment at stage {stage} disagrees with finalized row {row} at column {col}")]
    IncompatibleCommitment {
        stage: usize,
        row: usize,
        col: usize,
    },

    #[error("invalid family specification: {0}")]
    FamilySpec(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}

/// Which of the two entangled filters an event refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    G,
    H,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Side::G => f.write_str("g"),
            Side::H => f.write_str("h"),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
