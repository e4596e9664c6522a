use thiserror::Error;

use crate::parser::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unknown graph type `{0}`")]
    UnknownGraphType(String),

    #[error("time out of range: t = {t}, trace ends at {length}")]
    TimeOutOfRange { t: usize, length: usize },

    #[error("insufficient trace: {0}")]
    InsufficientTrace(String),

    #[error("agent {agent} out of range 1..={num_agents}")]
    AgentOutOfRange { agent: usize, num_agents: usize },

    #[error("state component {component} out of range (state dimension {state_dim})")]
    ComponentOutOfRange { component: usize, state_dim: usize },

    #[error("expand graphs first: graph operator over {0} graphs")]
    ExpandGraphsFirst(usize),

    #[error("negative weights unsupported (edge {src}->{dst} has weight {weight})")]
    NegativeWeight { src: usize, dst: usize, weight: f64 },

    #[error("positive weights required (edge {src}->{dst} has weight {weight})")]
    NonPositiveWeight { src: usize, dst: usize, weight: f64 },

    #[error("avg requires N′ (the number of neighbors satisfying the label and distance)")]
    AvgRequiresCount,

    #[error("knowledge mask for observer {mask} used where observer {expected} was requested")]
    ObserverMismatch { mask: usize, expected: usize },

    #[error("refinement would hide the known state of agent {subject} at t = {t}")]
    HidesKnownState { subject: usize, t: usize },

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid formula: {0}")]
    InvalidFormula(String),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("{0}")]
    Data(String),
}

impl Error {
    pub(crate) fn model(msg: impl Into<String>) -> Self {
        Error::InvalidModel(msg.into())
    }
}
