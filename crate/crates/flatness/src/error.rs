use genfun::GenfunError;
use gevrey::GevreyError;
use kawahara_fd::FdError;
use series_core::SeriesError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FlatError {
    #[error("invalid plan parameters: {0}")]
    Params(String),

    #[error("plan has J_max = {plan} but the family only reaches {family}")]
    JMax { plan: usize, family: usize },

    #[error("time index {index} out of range for {len} samples")]
    TimeIndex { index: usize, len: usize },

    #[error("x = {0} outside [-1, 0]")]
    Position(f64),

    #[error(
        "tail bound diverges for J_max = {j_max}, s = {s}; increase J_max or s"
    )]
    DivergentTail { j_max: usize, s: f64 },

    #[error("time-series differentiation failed: {0}")]
    TimeFit(String),

    #[error(transparent)]
    Fd(#[from] FdError),

    #[error(transparent)]
    Genfun(#[from] GenfunError),

    #[error(transparent)]
    Gevrey(#[from] GevreyError),

    #[error(transparent)]
    Series(#[from] SeriesError),
}
