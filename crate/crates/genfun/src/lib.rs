//! Generating functions `f_j`, `g_j` of the Kawahara flat parameterization.
//!
//! Each family member solves `P f_j = −f_{j−1}` with homogeneous data at
//! `x = 0`; the seeds `f_0`, `g_0` carry a unit third resp. fourth derivative.

mod closed;
mod convolution;
mod error;
mod family;
mod envelope;

pub use closed::{a_const, b_const, f0_closed, f0_closed_derivative, g0_closed, g0_closed_derivative};
pub use convolution::{convolution_fj, convolution_gj, SampledFunction};
pub use error::GenfunError;
pub use family::{
    build_family, min_order_for_tail, series_solve_p, verify_pk_identity, FamilyDump,
    GeneratingFamily, PkDiscrepancy, Trace, Variant, F0_IC, G0_IC,
};
pub use envelope::{p_power_sides, term_envelope, PPowerSides};
