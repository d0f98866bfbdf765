use thiserror::Error;

/// Errors raised while building tables or evaluating measures.
#[derive(Debug, Error)]
pub enum Error {
    #[error("negative mass {value} at state ({state})")]
    NegativeMass { state: String, value: f64 },

    #[error("non-finite mass at state ({state})")]
    NonFiniteMass { state: String },

    #[error("masses sum to {sum}, which is not within 1e-9 of 1")]
    MassSumOutOfTolerance { sum: f64 },

    #[error("duplicate state label {state:?} in variable {variable:?}")]
    DuplicateState { variable: String, state: String },

    #[error("state tuple ({state}) listed more than once")]
    DuplicateEntry { state: String },

    #[error("duplicate variable name {0:?}")]
    DuplicateVariable(String),

    #[error("variable {0:?} has no states")]
    EmptyAlphabet(String),

    #[error("unknown variable {0:?}")]
    UnknownVariable(String),

    #[error("unknown state {state:?} for variable {variable:?}")]
    UnknownState { variable: String, state: String },

    #[error("state tuple has {found} labels, expected {expected}")]
    TupleLength { expected: usize, found: usize },

    #[error("a table needs at least one predictor besides the target")]
    NoPredictorVariables,

    #[error("variable set is empty")]
    EmptyVarSet,

    #[error("variable index {0} is out of range")]
    InvalidVariableIndex(usize),

    #[error("variable sets overlap")]
    OverlappingVarSets,

    #[error("at least one predictor is required")]
    NoPredictors,

    #[error("exactly two predictors are required, got {0}")]
    WrongPredictorCount(usize),

    #[error("target state {0} has zero probability")]
    ZeroProbabilityTargetState(String),

    #[error("channel row {row} sums to {sum}")]
    ChannelRowNotNormalized { row: usize, sum: f64 },

    #[error("channel row {row} has a negative or non-finite entry")]
    ChannelEntryInvalid { row: usize },

    #[error("channel has {found} rows, expected {expected}")]
    IndexMismatch { expected: usize, found: usize },

    #[error("channel arity mismatch: expected {expected} columns, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("problem too large for exhaustive oracle: {0}")]
    TooLargeForOracle(String),

    #[error("solver result {value} exceeds the I_min bound {bound}")]
    BoundViolation { value: f64, bound: f64 },

    #[error("no feasible channel was found")]
    Infeasible,

    #[error("unknown corpus case {0:?}")]
    UnknownCase(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
