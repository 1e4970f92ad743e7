use crate::{
    check_membership, extract_coefficients, max_extractable, plan_reach, truncation_tail,
    Membership, ReachCoefficients, ReachError, ReachTarget,
};
use flatness::{family_for, synthesize_controls, ControlSignal, TrajectoryPlan};
use kawahara_fd::{norms, weighted_l2, GridState, Solver, SolverConfig};
use log::info;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct ReachReport {
    pub target_error_sup: f64,
    pub target_error_l2: f64,
    pub target_l2: f64,
    pub target_sup: f64,
    /// Truncation bound of the control series at `x = −1`.
    pub tail_bound: f64,
    pub tail_bound_h2: f64,
    /// Bound at `x = −1` on the target terms beyond `J_max` that the plan omits.
    pub target_tail: f64,
    pub membership: Membership,
    pub coefficients: ReachCoefficients,
    pub tau: f64,
    #[serde(rename = "T")]
    pub t_final: f64,
    #[serde(rename = "J_max")]
    pub j_max: usize,
    #[serde(rename = "K")]
    pub k: f64,
    pub solver: SolverConfig,
}

#[derive(Debug, Clone)]
pub struct ReachRun {
    pub report: ReachReport,
    pub plan: TrajectoryPlan,
    pub controls: ControlSignal,
    pub final_state: GridState,
}

/// Extract, plan, synthesize, and replay the controls from `u0 = 0`.
pub fn run_reach_experiment(
    target: &ReachTarget,
    tau: f64,
    t_final: f64,
    j_max: usize,
    k: f64,
    cfg: &SolverConfig,
) -> Result<ReachRun, ReachError> {
    let membership = check_membership(target)?;
    if !membership.passed() {
        return Err(ReachError::Membership(Box::new(membership)));
    }
    if !(tau > 0.0 && tau < t_final) {
        return Err(ReachError::Window { tau, t_final });
    }
    let cfg = cfg.with_horizon(t_final)?;
    let depth = max_extractable(target);
    let all = extract_coefficients(target, depth)?;
    let n = depth.min(j_max);
    let co = ReachCoefficients {
        c: all.c[..=n].to_vec(),
        b: all.b[..=n].to_vec(),
        n,
    };
    let times: Vec<f64> = (0..=cfg.steps()).map(|i| i as f64 * cfg.dt).collect();
    let plan = plan_reach(&co, tau, t_final, &times, j_max, k)?;
    let fam = family_for(j_max)?;
    let controls = synthesize_controls(&plan, &fam)?;

    let solver = Solver::new(&cfg)?;
    let u0 = GridState::zeros(cfg.nx);
    let final_state = solver.run(&u0, &controls.boundary_signal(), None, |_| Ok(()))?;
    let goal: Vec<f64> = final_state.x.iter().map(|&x| target.u1.eval(x)).collect();
    let diff: Vec<f64> = final_state.u.iter().zip(&goal).map(|(u, g)| u - g).collect();
    let w = &solver.operators().weights;
    let tn = norms(&GridState {
        x: final_state.x.clone(),
        u: goal,
        t: t_final,
    });
    let report = ReachReport {
        target_error_sup: diff.iter().fold(0.0f64, |a, v| a.max(v.abs())),
        target_error_l2: weighted_l2(w, &diff),
        target_l2: tn.l2,
        target_sup: tn.sup,
        tail_bound: controls.tail_h1,
        tail_bound_h2: controls.tail_h2,
        target_tail: truncation_tail(&all, n),
        membership,
        coefficients: co,
        tau,
        t_final,
        j_max,
        k,
        solver: cfg,
    };
    info!(
        "reach: L2 error {:.3e} of target {:.3e}",
        report.target_error_l2, report.target_l2
    );
    Ok(ReachRun {
        report,
        plan,
        controls,
        final_state,
    })
}
