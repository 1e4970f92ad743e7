//! Initial-boundary-value solver for `u_t + u_x + u_xxx − u_xxxxx = 0` on
//! `[−1, 0]` with `u(0) = u_x(0) = u_xx(0) = 0`, `u(−1) = h1`, `u_x(−1) = h2`.
//!
//! Space is discretized with a summation-by-parts first-derivative operator
//! `D` (`P_h = D + D³ − D⁵`); the five boundary conditions are imposed as
//! constraints of a weighted θ-step, so the discrete energy of free evolution
//! is nonincreasing.

pub mod banded;
mod error;
pub mod export;
pub mod grid;
pub mod norms;
pub mod sbp;
mod signal;
pub mod solver;
pub mod traces;

pub use banded::{Banded, BandedLu};
pub use error::FdError;
pub use export::{snapshot_csv, write_trajectory, Manifest};
pub use grid::{nodes, spacing, GridState};
pub use norms::{norms, weighted_l2, Norms};
pub use signal::{BoundarySignal, SignalFn};
pub use solver::{solve, step, Operators, Solver, SolverConfig, Source};
pub use traces::{
    boundary_traces, fd_weights, trace_time_jets, SpectralTraces, TraceJets, TraceStencil,
};

impl Operators {
    pub fn norms(&self, u: &[f64]) -> Norms {
        let ux = self.d1.mul_vec(u);
        let uxx = self.d1.mul_vec(&ux);
        norms::from_parts(&self.weights, u, &ux, &uxx)
    }
}
