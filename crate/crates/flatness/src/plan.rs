use crate::timefit::{time_degree, time_derivatives};
use crate::FlatError;
use gevrey::{phi_jet, BumpParams, MAX_JET_ORDER};
use kawahara_fd::{GridState, Solver, SolverConfig, SpectralTraces, TraceStencil};
use log::{debug, warn};
use serde::{Deserialize, Serialize};
use series_core::{jet_compose_affine, jet_mul, Jet};

/// Highest trace time-derivative order attempted through `P^m`.
pub const SPATIAL_ORDERS: usize = 4;
/// Relative error estimate above which a spatial order is rejected.
pub const SPATIAL_TOL: f64 = 1e-3;
/// Glue window `(τ, τ + GLUE_FRACTION·(T − τ)]`.
pub const GLUE_FRACTION: f64 = 0.05;
/// Lead of the time-fit window before `τ`, as a fraction of `T − τ`.
pub const FIT_LEAD: f64 = 0.25;

/// Derivatives of the flat outputs on the sample grid. Rows run over
/// `j = 0..=J_max + 1`; the extra row is the one consumed by `∂_t` of the
/// truncated series and by its residual bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPlan {
    pub times: Vec<f64>,
    #[serde(rename = "J_max")]
    pub j_max: usize,
    pub y_derivs: Vec<Vec<f64>>,
    pub z_derivs: Vec<Vec<f64>>,
    pub s: f64,
    pub tau: f64,
    #[serde(rename = "T")]
    pub t_final: f64,
}

impl TrajectoryPlan {
    pub fn zeros(times: Vec<f64>, j_max: usize, s: f64, tau: f64, t_final: f64) -> Self {
        let row = vec![0.0; times.len()];
        TrajectoryPlan {
            y_derivs: vec![row.clone(); j_max + 2],
            z_derivs: vec![row; j_max + 2],
            times,
            j_max,
            s,
            tau,
            t_final,
        }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Writes the jets of `y` and `z` (order `J_max + 1`) at sample `n`.
    pub fn set_sample(&mut self, n: usize, y: &Jet, z: &Jet) {
        for j in 0..=self.j_max + 1 {
            self.y_derivs[j][n] = y.values[j];
            self.z_derivs[j][n] = z.values[j];
        }
    }

    /// Largest `|y^{(j)}|`, `|z^{(j)}|` over the samples, per row.
    pub fn row_maxima(&self) -> (Vec<f64>, Vec<f64>) {
        let m = |rows: &Vec<Vec<f64>>| {
            rows.iter()
                .map(|r| r.iter().fold(0.0f64, |a, v| a.max(v.abs())))
                .collect()
        };
        (m(&self.y_derivs), m(&self.z_derivs))
    }

    pub fn is_finite(&self) -> bool {
        self.y_derivs
            .iter()
            .chain(&self.z_derivs)
            .all(|r| r.iter().all(|v| v.is_finite()))
    }

    pub(crate) fn active(&self, t: f64) -> bool {
        t > self.tau + 1e-12 * self.t_final
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanParams {
    pub s: f64,
    /// Sharpness `K` of the Gevrey step.
    #[serde(rename = "K")]
    pub k: f64,
    pub tau: f64,
    #[serde(rename = "T")]
    pub t_final: f64,
    #[serde(rename = "J_max")]
    pub j_max: usize,
}

impl PlanParams {
    pub fn new(s: f64, tau: f64, t_final: f64, j_max: usize) -> Self {
        PlanParams {
            s,
            k: 1.0,
            tau,
            t_final,
            j_max,
        }
    }

    pub fn validate(&self) -> Result<(), FlatError> {
        let bad = |m: String| Err(FlatError::Params(m));
        if !(self.tau > 0.0 && self.tau < self.t_final && self.t_final.is_finite()) {
            return bad(format!("need 0 < tau < T, got tau = {}, T = {}", self.tau, self.t_final));
        }
        if !(2.5..5.0).contains(&self.s) {
            return bad(format!("s = {} outside [2.5, 5)", self.s));
        }
        if self.j_max + 1 > MAX_JET_ORDER {
            return bad(format!("J_max = {} exceeds {}", self.j_max, MAX_JET_ORDER - 1));
        }
        Ok(())
    }
}

/// How the trace time-derivatives `∂_t^m ∂_x^{3,4} ū(0, t)` were obtained.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceDiagnostics {
    /// Orders `1..=spatial_cap` come from the spatial `(−P)^m` route.
    pub spatial_cap: usize,
    /// Relative error estimate of the spatial route for `m = 1, 2, …`.
    pub spatial_rel_err: Vec<f64>,
    /// Orders differentiated in time from the order-`spatial_cap` series.
    pub fallback_orders: Vec<usize>,
    pub time_fit_degree: usize,
}

/// A null-control plan together with the free evolution it was built from.
#[derive(Debug, Clone)]
pub struct NullPlan {
    pub plan: TrajectoryPlan,
    pub diagnostics: TraceDiagnostics,
    /// Free-evolution states inside the glue window.
    pub glue_states: Vec<GridState>,
    /// Indices of `glue_states` in `plan.times`.
    pub glue_indices: Vec<usize>,
    pub free_final: GridState,
    pub cfg: SolverConfig,
}

struct Samples {
    index: Vec<usize>,
    t: Vec<f64>,
    d3: Vec<Vec<f64>>,
    d4: Vec<Vec<f64>>,
    err3: Vec<f64>,
    err4: Vec<f64>,
}

fn rel_error(err: f64, rows: &[f64]) -> f64 {
    let scale = rows.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if err == 0.0 {
        0.0
    } else if scale == 0.0 {
        f64::INFINITY
    } else {
        err / scale
    }
}

/// Null-control plan: `y = φ_s((t − τ)/(T − τ)) ∂_x³ū(0, t)` and
/// `z = φ_s(·) ∂_x⁴ū(0, t)` with `ū` the free evolution of `u0`.
/// Samples are the solver steps on `[0, T]`; rows vanish for `t ≤ τ`.
pub fn plan_null_control(
    u0: &GridState,
    params: &PlanParams,
    cfg: &SolverConfig,
) -> Result<NullPlan, FlatError> {
    params.validate()?;
    let cfg = cfg.with_horizon(params.t_final)?;
    u0.check(cfg.nx)?;
    let (tau, t_final, j_max) = (params.tau, params.t_final, params.j_max);
    let rows = j_max + 1;
    let m_spatial = SPATIAL_ORDERS.min(rows);

    let solver = Solver::new(&cfg)?;
    let ops = solver.operators();
    let stencil = TraceStencil::new(cfg.h());
    let spectral = SpectralTraces::new(&ops.x, &ops.weights, m_spatial)?;
    let steps = cfg.steps();
    let times: Vec<f64> = (0..=steps).map(|n| n as f64 * cfg.dt).collect();
    let mut plan = TrajectoryPlan::zeros(times.clone(), j_max, params.s, tau, t_final);
    let glue_end = tau + GLUE_FRACTION * (t_final - tau);
    // the time fit starts before τ so that τ is not an endpoint of it
    let fit_start = (tau - FIT_LEAD * (t_final - tau)).max(0.5 * tau);

    let mut smp = Samples {
        index: Vec::new(),
        t: Vec::new(),
        d3: vec![Vec::new(); m_spatial + 1],
        d4: vec![Vec::new(); m_spatial + 1],
        err3: vec![0.0; m_spatial + 1],
        err4: vec![0.0; m_spatial + 1],
    };
    let mut glue_states = Vec::new();
    let mut glue_indices = Vec::new();
    let mut n = 0usize;
    let free_final = solver.run(u0, &Default::default(), None, |st| {
        if st.t >= fit_start - 1e-12 * t_final {
            let jets = spectral.evaluate(&st.u);
            smp.index.push(n);
            smp.t.push(st.t);
            smp.d3[0].push(stencil.d3(&st.u));
            smp.d4[0].push(stencil.d4(&st.u));
            for m in 1..=m_spatial {
                smp.d3[m].push(jets.d3[m]);
                smp.d4[m].push(jets.d4[m]);
                smp.err3[m] = smp.err3[m].max(jets.err3[m]);
                smp.err4[m] = smp.err4[m].max(jets.err4[m]);
            }
            if plan.active(st.t) && st.t <= glue_end * (1.0 + 1e-12) {
                glue_states.push(st.clone());
                glue_indices.push(n);
            }
        }
        n += 1;
        Ok(())
    })?;

    let spatial_rel_err: Vec<f64> = (1..=m_spatial)
        .map(|m| rel_error(smp.err3[m], &smp.d3[m]).max(rel_error(smp.err4[m], &smp.d4[m])))
        .collect();
    let spatial_cap = spatial_rel_err
        .iter()
        .take_while(|e| **e <= SPATIAL_TOL)
        .count();

    // trace jets, [m][sample]
    let count = smp.t.len();
    let mut y_tr: Vec<Vec<f64>> = smp.d3[..=spatial_cap].to_vec();
    let mut z_tr: Vec<Vec<f64>> = smp.d4[..=spatial_cap].to_vec();
    let mut fallback_orders = Vec::new();
    let mut time_fit_degree = 0;
    if spatial_cap < rows {
        let extra = rows - spatial_cap;
        let a = smp.t.first().copied().unwrap_or(fit_start);
        let dy = time_derivatives(&smp.t, &y_tr[spatial_cap], a, t_final, extra)?;
        let dz = time_derivatives(&smp.t, &z_tr[spatial_cap], a, t_final, extra)?;
        y_tr.extend(dy.into_iter().skip(1));
        z_tr.extend(dz.into_iter().skip(1));
        fallback_orders = (spatial_cap + 1..=rows).collect();
        time_fit_degree = time_degree(count);
        warn!(
            "trace time-derivatives of order {:?} taken from a degree-{} time fit",
            fallback_orders, time_fit_degree
        );
    }
    debug!("spatial trace cap {spatial_cap}, rel errors {spatial_rel_err:?}");

    let bump = BumpParams::new(params.s, params.k)?;
    let span = t_final - tau;
    for (k, &ni) in smp.index.iter().enumerate() {
        if !plan.active(smp.t[k]) {
            continue;
        }
        let r = (smp.t[k] - tau) / span;
        let phi = jet_compose_affine(&phi_jet(r, &bump, rows)?, 1.0 / span, tau)?;
        let y = Jet::new(phi.point, (0..=rows).map(|m| y_tr[m][k]).collect())?;
        let z = Jet::new(phi.point, (0..=rows).map(|m| z_tr[m][k]).collect())?;
        plan.set_sample(ni, &jet_mul(&phi, &y)?, &jet_mul(&phi, &z)?);
    }
    if !plan.is_finite() {
        return Err(FlatError::Params("plan contains non-finite entries".into()));
    }
    Ok(NullPlan {
        plan,
        diagnostics: TraceDiagnostics {
            spatial_cap,
            spatial_rel_err,
            fallback_orders,
            time_fit_degree,
        },
        glue_states,
        glue_indices,
        free_final,
        cfg,
    })
}
