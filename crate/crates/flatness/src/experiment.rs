use crate::plan::{plan_null_control, NullPlan, PlanParams, TraceDiagnostics};
use crate::series::FlatSeries;
use crate::{synthesize_controls, ControlSignal, FlatError};
use genfun::{build_family, min_order_for_tail, GeneratingFamily, Variant};
use kawahara_fd::{norms, GridState, Solver, SolverConfig};
use log::info;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct NullControlReport {
    pub final_l2: f64,
    pub free_final_l2: f64,
    pub initial_l2: f64,
    pub initial_sup: f64,
    /// Largest `|flat series − free evolution|` over the glue window.
    pub glue_error: f64,
    /// Truncation bound of the series at `x = −1` (value, i.e. `h1`).
    pub tail_bound: f64,
    pub tail_bound_h2: f64,
    pub traces: TraceDiagnostics,
    pub params: PlanParams,
    pub solver: SolverConfig,
}

#[derive(Debug, Clone)]
pub struct NullControlRun {
    pub report: NullControlReport,
    pub planned: NullPlan,
    pub controls: ControlSignal,
    pub final_state: GridState,
}

/// Family sized for `plan.j_max` with a negligible coefficient tail.
pub fn family_for(j_max: usize) -> Result<GeneratingFamily, FlatError> {
    Ok(build_family(j_max, min_order_for_tail(j_max), Variant::Full)?)
}

/// Sup of `|flat series − ū|` over the stored glue states.
pub fn glue_error(planned: &NullPlan, fam: &GeneratingFamily) -> Result<f64, FlatError> {
    let series = FlatSeries::new(&planned.plan, fam)?;
    let mut err = 0.0f64;
    for (st, &n) in planned.glue_states.iter().zip(&planned.glue_indices) {
        for (x, u) in st.x.iter().zip(&st.u) {
            err = err.max((series.derivative(*x, n, 0, 0)? - u).abs());
        }
    }
    Ok(err)
}

/// Plan, synthesize, and replay the controls on the solver from `u0`.
pub fn run_null_control_experiment(
    u0: &GridState,
    params: &PlanParams,
    cfg: &SolverConfig,
) -> Result<NullControlRun, FlatError> {
    let planned = plan_null_control(u0, params, cfg)?;
    let fam = family_for(params.j_max)?;
    let controls = synthesize_controls(&planned.plan, &fam)?;
    let glue = glue_error(&planned, &fam)?;
    let solver = Solver::new(&planned.cfg)?;
    let final_state = solver.run(u0, &controls.boundary_signal(), None, |_| Ok(()))?;
    let n0 = norms(u0);
    let report = NullControlReport {
        final_l2: norms(&final_state).l2,
        free_final_l2: norms(&planned.free_final).l2,
        initial_l2: n0.l2,
        initial_sup: n0.sup,
        glue_error: glue,
        tail_bound: controls.tail_h1,
        tail_bound_h2: controls.tail_h2,
        traces: planned.diagnostics.clone(),
        params: *params,
        solver: planned.cfg.clone(),
    };
    info!(
        "null control: final L2 {:.3e}, free {:.3e}, glue {:.3e}",
        report.final_l2, report.free_final_l2, report.glue_error
    );
    Ok(NullControlRun {
        report,
        planned,
        controls,
        final_state,
    })
}
