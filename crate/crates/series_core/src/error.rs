use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SeriesError {
    #[error("derivative order exceeds truncation: k = {k}, order = {order}")]
    DerivativeOrder { k: usize, order: usize },

    #[error("series order {got} too small, need at least {needed}")]
    OrderTooSmall { needed: usize, got: usize },

    #[error("non-finite coefficient at index {0}")]
    NonFinite(usize),

    #[error("empty coefficient array")]
    Empty,

    #[error("base points differ: {0} vs {1}")]
    BaseMismatch(f64, f64),

    #[error("jet mismatch: points ({p0}, {p1}), orders ({m0}, {m1})")]
    JetMismatch { p0: f64, p1: f64, m0: usize, m1: usize },

    #[error("affine scale must be nonzero")]
    ZeroScale,
}
