use thiserror::Error;

#[derive(Debug, Error)]
pub enum FdError {
    #[error("invalid solver configuration: {0}")]
    Config(String),

    #[error("singular banded system (zero pivot in column {0}); check the dt/dx combination")]
    Singular(usize),

    #[error("non-finite value in the solution at t = {0}")]
    NonFinite(f64),

    #[error("state has {got} nodes, grid expects {expected}")]
    GridMismatch { expected: usize, got: usize },

    #[error("trace extraction needs at least {need} nodes, have {got}")]
    InsufficientNodes { need: usize, got: usize },

    #[error("trace order {0} not supported (only 3 and 4)")]
    TraceOrder(usize),

    #[error("record time {0} outside [0, T]")]
    RecordTime(f64),

    #[error("least-squares fit failed: {0}")]
    Fit(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
