//! Flat parameterization of the controlled Kawahara equation by the outputs
//! `y = ∂_x³u(0, t)`, `z = ∂_x⁴u(0, t)`:
//! `u = Σ_j f_j(x) y^{(j)}(t) + g_j(x) z^{(j)}(t)`, boundary controls read off at
//! `x = −1`, and the null-control pipeline built on it.

mod controls;
mod error;
mod experiment;
mod plan;
mod series;
pub mod tail;
pub mod timefit;

pub use controls::{synthesize_controls, ControlSignal};
pub use error::FlatError;
pub use experiment::{
    family_for, glue_error, run_null_control_experiment, NullControlReport, NullControlRun,
};
pub use plan::{
    plan_null_control, NullPlan, PlanParams, TraceDiagnostics, TrajectoryPlan, GLUE_FRACTION,
    SPATIAL_ORDERS, SPATIAL_TOL,
};
pub use series::{evaluate_flat_solution, FlatSeries, FlatValue};
pub use tail::TailModel;
