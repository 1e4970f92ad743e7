use series_core::SeriesError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GenfunError {
    #[error("series order {got} too small for J_max = {j_max}; minimum is {min}")]
    OrderTooSmall { j_max: usize, got: usize, min: usize },

    #[error("target order {0} must be at least 4 to hold the initial data")]
    TargetTooShort(usize),

    #[error("rhs must be expanded about 0, got base point {0}")]
    BasePoint(f64),

    #[error("need 0 <= k <= j <= J_max, got k = {k}, j = {j}, J_max = {j_max}")]
    IndexRange { k: usize, j: usize, j_max: usize },

    #[error("order exhausted: {k} applications of P need order >= {needed}, have {got}")]
    OrderExhausted { k: usize, needed: usize, got: usize },

    #[error("at least 16 quadrature points required, got {0}")]
    QuadPoints(usize),

    #[error(transparent)]
    Series(#[from] SeriesError),
}
