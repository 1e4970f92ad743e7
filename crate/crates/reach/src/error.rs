use crate::Membership;
use flatness::FlatError;
use genfun::GenfunError;
use gevrey::GevreyError;
use kawahara_fd::FdError;
use series_core::SeriesError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ReachError {
    #[error("series order {got} too small, need at least {needed}")]
    Order { needed: usize, got: usize },

    #[error("target is not in the reachable set: {0}")]
    Membership(Box<Membership>),

    #[error("need 0 < tau < T, got tau = {tau}, T = {t_final}")]
    Window { tau: f64, t_final: f64 },

    #[error("{got} coefficients exceed the family's J_max = {j_max}")]
    TooManyCoefficients { got: usize, j_max: usize },

    #[error("invalid target: {0}")]
    Target(String),

    #[error(transparent)]
    Flat(#[from] FlatError),

    #[error(transparent)]
    Genfun(#[from] GenfunError),

    #[error(transparent)]
    Gevrey(#[from] GevreyError),

    #[error(transparent)]
    Fd(#[from] FdError),

    #[error(transparent)]
    Series(#[from] SeriesError),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
