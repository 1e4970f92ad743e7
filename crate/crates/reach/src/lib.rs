//! Reachable targets: membership diagnostics, terminal Taylor data
//! `c_n = (−1)^n ∂_x³P^n u1(0)`, `b_n = (−1)^n ∂_x⁴P^n u1(0)`, trajectory plans
//! interpolating them at `T`, and the end-to-end steering experiment from zero.

mod coeffs;
mod error;
mod experiment;
mod plan;
mod target;

pub use coeffs::{
    extract_coefficients, max_extractable, reconstruct_target, truncation_tail,
    unique_continuation, CoefficientGrowth, ReachCoefficients, UniqueContinuation,
};
pub use error::ReachError;
pub use experiment::{run_reach_experiment, ReachReport, ReachRun};
pub use plan::{plan_reach, BETA_ORDER};
pub use target::{
    check_membership, r0_constant, Membership, ReachTarget, TargetFile, ENTIRE_RADIUS,
    MEMBERSHIP_TOL,
};
