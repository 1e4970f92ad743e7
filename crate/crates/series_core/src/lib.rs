//! Truncated power series and derivative jets.
//!
//! `PowerSeries` holds Taylor coefficients about a base point and carries its
//! truncation order explicitly; `Jet` holds plain derivative values at a point.

pub mod dd;
mod error;
mod jet;
mod series;

pub use error::SeriesError;
pub use jet::{binomial_row, jet_compose_affine, jet_mul, Jet};
pub use series::{ps_apply_p, ps_derivative, ps_eval, PowerSeries};

/// Ratio of largest intermediate magnitude to result magnitude above which a
/// cancellation warning is logged.
pub const CANCELLATION_RATIO: f64 = 1e12;

/// `n!` as a float (exact up to 22!).
pub fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// Falling factorial `(m+k)!/m!`.
pub fn falling(m: usize, k: usize) -> f64 {
    (m + 1..=m + k).fold(1.0, |acc, i| acc * i as f64)
}
