use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("empty initial state space")]
    EmptyInitialStates,

    #[error("initial state {index} is infeasible at phase 0")]
    InfeasibleInitialState { index: usize },

    #[error("state explosion: more than {budget} states at phase {phase}")]
    StateExplosion { phase: usize, budget: usize },

    #[error("no extendable individuals: every individual is at the final phase")]
    NoExtendableIndividuals,

    #[error("width unknown: the adapter declares no antichain bound")]
    WidthUnknown,

    #[error("homogeneous mode requested but the adapter's transitions are phase-dependent")]
    NotHomogeneous,

    #[error("dimension mismatch: expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("state outside box universe: coordinate {coordinate} = {value} exceeds Δ^L = {limit}")]
    OutsideBoxUniverse {
        coordinate: usize,
        value: u64,
        limit: f64,
    },

    #[error("epsilon must lie in (0, 1), got {0}")]
    InvalidEpsilon(f64),

    #[error("invalid trimming parameters: {0}")]
    InvalidParameters(String),

    #[error("no feasible state at the final phase")]
    NoFeasibleState,

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("instance too large: {what} = {size} exceeds limit {limit}")]
    InstanceTooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },
}
