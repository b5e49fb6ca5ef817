use thiserror::Error;

/// Errors produced while building or evaluating a game.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cannot parse rational {input:?}: {reason}")]
    Parse { input: String, reason: &'static str },

    #[error("invalid amount: {0}")]
    InvalidAmount(String),

    #[error("prior has no atoms")]
    EmptyPrior,

    #[error("{0}")]
    InvalidPrior(String),

    #[error("invalid sampler: {0}")]
    InvalidSampler(String),

    #[error("invalid strategy: {0}")]
    InvalidStrategy(String),

    #[error("invalid prior knowledge: {0}")]
    InvalidKnowledge(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("strategy requirement unmet: {0}")]
    Requirement(#[from] RequirementError),

    #[error("impossible observation: x = {x} cannot arise under the prior")]
    ImpossibleObservation { x: String },
}

/// A strategy asked for information the scenario does not provide.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RequirementError {
    #[error("strategy `{strategy}` needs an open envelope but the envelope is closed")]
    MissingObservation { strategy: String },

    #[error("strategy `{strategy}` needs {needs} prior knowledge")]
    MissingPrior { strategy: String, needs: &'static str },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
