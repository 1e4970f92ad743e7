use crate::banded::{Banded, BandedLu};
use crate::grid::{nodes, spacing, GridState};
use crate::sbp;
use crate::signal::BoundarySignal;
use crate::FdError;
use log::debug;
use nalgebra::Vector5;
use serde::{Deserialize, Serialize};

pub const MIN_NX: usize = 32;
pub const CFL: f64 = 0.5;

/// Source term `s(x, t)` added to the right-hand side.
pub type Source<'a> = &'a (dyn Fn(f64, f64) -> f64 + Sync);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub nx: usize,
    pub dt: f64,
    pub theta: f64,
    #[serde(rename = "T")]
    pub t_final: f64,
    /// Coefficient of the extra `μ₀ ∂_x⁴` term (Benney–Lin); 0 for Kawahara.
    pub mu0: f64,
    /// Leading implicit Euler steps that damp incompatible initial data.
    pub startup_steps: usize,
    pub refine_iters: usize,
}

impl SolverConfig {
    /// `dt = CFL·h`, shortened so that it divides `T`.
    pub fn new(nx: usize, t_final: f64) -> Result<Self, FdError> {
        let target = CFL * spacing(nx);
        let steps = (t_final / target).ceil().max(1.0);
        let cfg = SolverConfig {
            nx,
            dt: t_final / steps,
            theta: 0.5,
            t_final,
            mu0: 0.0,
            startup_steps: 4,
            refine_iters: 2,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), FdError> {
        let bad = |m: String| Err(FdError::Config(m));
        if self.nx < MIN_NX {
            return bad(format!("nx = {} < {MIN_NX}", self.nx));
        }
        if !(self.t_final.is_finite() && self.t_final > 0.0) {
            return bad(format!("T = {} must be positive", self.t_final));
        }
        if !(self.dt.is_finite() && self.dt > 0.0 && self.dt <= self.t_final * (1.0 + 1e-12)) {
            return bad(format!("dt = {} must lie in (0, T]", self.dt));
        }
        if !(0.5..=1.0).contains(&self.theta) {
            return bad(format!("theta = {} outside [0.5, 1]", self.theta));
        }
        if !(self.mu0.is_finite() && self.mu0 >= 0.0) {
            return bad(format!("mu0 = {} must be >= 0", self.mu0));
        }
        Ok(())
    }

    /// Same settings on the horizon `[0, t_final]`, with `dt` shortened as
    /// needed so that it divides `t_final`.
    pub fn with_horizon(&self, t_final: f64) -> Result<Self, FdError> {
        let steps = (t_final / self.dt * (1.0 - 1e-12)).ceil().max(1.0);
        let cfg = SolverConfig {
            t_final,
            dt: t_final / steps,
            ..self.clone()
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn steps(&self) -> usize {
        (self.t_final / self.dt).round() as usize
    }

    pub fn h(&self) -> f64 {
        spacing(self.nx)
    }
}

/// Spatial operators on the grid of a configuration.
#[derive(Debug, Clone)]
pub struct Operators {
    pub x: Vec<f64>,
    pub h: f64,
    /// Diagonal norm (quadrature weights).
    pub weights: Vec<f64>,
    pub d1: Banded,
    pub d2: Banded,
    pub d3: Banded,
    /// Discrete `∂ + ∂³ − ∂⁵ + μ₀∂⁴`.
    pub p: Banded,
    /// Rows of `u(−1), u_x(−1), u(0), u_x(0), u_xx(0)`.
    pub constraints: [Vec<f64>; 5],
}

impl Operators {
    pub fn new(nx: usize, mu0: f64) -> Self {
        let n = nx + 2;
        let h = spacing(nx);
        let d1 = sbp::first_derivative(n, h);
        let d2 = d1.matmul(&d1);
        let d3 = d2.matmul(&d1);
        let d4 = d3.matmul(&d1);
        let d5 = d4.matmul(&d1);
        let mut p = d1.combine(1.0, &d3, 1.0).combine(1.0, &d5, -1.0);
        if mu0 != 0.0 {
            p = p.combine(1.0, &d4, mu0);
        }
        let row = |m: &Banded, i: usize| -> Vec<f64> { (0..n).map(|j| m.get(i, j)).collect() };
        let unit = |i: usize| -> Vec<f64> {
            let mut e = vec![0.0; n];
            e[i] = 1.0;
            e
        };
        let constraints = [
            unit(0),
            row(&d1, 0),
            unit(n - 1),
            row(&d1, n - 1),
            row(&d2, n - 1),
        ];
        Operators {
            x: nodes(nx),
            h,
            weights: sbp::norm_weights(n, h),
            d1,
            d2,
            d3,
            p,
            constraints,
        }
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn apply_p(&self, u: &[f64]) -> Vec<f64> {
        self.p.mul_vec(u)
    }

    /// `(u(0), u_x(0), u_xx(0))` on the grid.
    pub fn right_boundary(&self, u: &[f64]) -> [f64; 3] {
        let c = &self.constraints;
        [dot(&c[2], u), dot(&c[3], u), dot(&c[4], u)]
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// One θ-step as the saddle-point system
/// `[W/dt + θWP, Cᵀ; C, 0] [u; λ] = [r; g]`. The multipliers of the two left
/// conditions are ordered before `u` and the three right ones after it, so the
/// whole system is banded and is factored with partial pivoting in one piece.
#[derive(Debug, Clone)]
struct Kkt {
    theta: f64,
    m: Banded,
    lu: BandedLu,
}

const LEFT: usize = 2;

impl Kkt {
    fn new(ops: &Operators, dt: f64, theta: f64) -> Result<Self, FdError> {
        let n = ops.n();
        let w = &ops.weights;
        let mass: Vec<f64> = w.iter().map(|v| v / dt).collect();
        let a = Banded::diag(&mass).combine(1.0, &ops.p.scale_rows(w), theta);
        let c = &ops.constraints;
        let support = |row: &Vec<f64>| -> (usize, usize) {
            let lo = row.iter().position(|&v| v != 0.0).unwrap_or(0);
            let hi = row.iter().rposition(|&v| v != 0.0).unwrap_or(0);
            (lo, hi)
        };
        // column index of each multiplier in the bordered system
        let lam_col = |k: usize| if k < LEFT { k } else { n + k };
        let mut kl = a.kl();
        let mut ku = a.ku();
        for (k, row) in c.iter().enumerate() {
            let (lo, hi) = support(row);
            let r = lam_col(k);
            for j in [lo + LEFT, hi + LEFT] {
                kl = kl.max(r.saturating_sub(j));
                ku = ku.max(j.saturating_sub(r));
            }
        }
        let mut m = Banded::zeros(n + 5, kl, ku);
        for i in 0..n {
            for j in a.row_range(i) {
                m.set(i + LEFT, j + LEFT, a.get(i, j));
            }
        }
        for (k, row) in c.iter().enumerate() {
            let r = lam_col(k);
            for (j, &v) in row.iter().enumerate() {
                if v != 0.0 {
                    m.set(r, j + LEFT, v);
                    m.set(j + LEFT, r, v);
                }
            }
        }
        let lu = m.factor()?;
        Ok(Kkt { theta, m, lu })
    }

    fn solve(&self, r: &[f64], g: &Vector5<f64>, refine: usize) -> Vec<f64> {
        let n = r.len();
        let mut b = Vec::with_capacity(n + 5);
        b.extend_from_slice(&[g[0], g[1]]);
        b.extend_from_slice(r);
        b.extend_from_slice(&[g[2], g[3], g[4]]);
        let mut x = self.lu.solve(&b);
        for _ in 0..refine {
            let mx = self.m.mul_vec(&x);
            let res: Vec<f64> = b.iter().zip(&mx).map(|(p, q)| p - q).collect();
            let dx = self.lu.solve(&res);
            for (xi, di) in x.iter_mut().zip(&dx) {
                *xi += di;
            }
        }
        x[LEFT..LEFT + n].to_vec()
    }
}

/// Solver with factorizations cached for repeated stepping.
#[derive(Debug, Clone)]
pub struct Solver {
    cfg: SolverConfig,
    ops: Operators,
    main: Kkt,
    startup: Option<Kkt>,
}

impl Solver {
    pub fn new(cfg: &SolverConfig) -> Result<Self, FdError> {
        cfg.validate()?;
        let ops = Operators::new(cfg.nx, cfg.mu0);
        let main = Kkt::new(&ops, cfg.dt, cfg.theta)?;
        let startup = if cfg.startup_steps > 0 && cfg.theta < 1.0 {
            Some(Kkt::new(&ops, cfg.dt, 1.0)?)
        } else {
            None
        };
        debug!(
            "solver nx={} dt={:e} steps={} bandwidth P=({}, {})",
            cfg.nx,
            cfg.dt,
            cfg.steps(),
            ops.p.kl(),
            ops.p.ku()
        );
        Ok(Solver {
            cfg: cfg.clone(),
            ops,
            main,
            startup,
        })
    }

    pub fn config(&self) -> &SolverConfig {
        &self.cfg
    }

    pub fn operators(&self) -> &Operators {
        &self.ops
    }

    pub fn step(&self, state: &GridState, bc: &BoundarySignal) -> Result<GridState, FdError> {
        self.step_with_source(state, bc, None)
    }

    pub fn step_with_source(
        &self,
        state: &GridState,
        bc: &BoundarySignal,
        source: Option<Source>,
    ) -> Result<GridState, FdError> {
        state.check(self.cfg.nx)?;
        let dt = self.cfg.dt;
        let index = (state.t / dt).round() as usize;
        let sys = match &self.startup {
            Some(s) if index < self.cfg.startup_steps => s,
            _ => &self.main,
        };
        let theta = sys.theta;
        let t0 = state.t;
        let t1 = (index + 1) as f64 * dt;
        let w = &self.ops.weights;
        let pu = self.ops.apply_p(&state.u);
        let mut r: Vec<f64> = (0..w.len())
            .map(|i| w[i] * (state.u[i] / dt - (1.0 - theta) * pu[i]))
            .collect();
        if let Some(s) = source {
            for (i, ri) in r.iter_mut().enumerate() {
                let x = self.ops.x[i];
                *ri += w[i] * (theta * s(x, t1) + (1.0 - theta) * s(x, t0));
            }
        }
        let (h1, h2) = bc.at(t1);
        let g = Vector5::new(h1, h2, 0.0, 0.0, 0.0);
        let u = sys.solve(&r, &g, self.cfg.refine_iters);
        if !u.iter().all(|v| v.is_finite()) {
            return Err(FdError::NonFinite(t1));
        }
        Ok(GridState {
            x: state.x.clone(),
            u,
            t: t1,
        })
    }

    /// Steps from `u0` to `T`, handing every state (including `u0`) to `observe`.
    pub fn run<F>(
        &self,
        u0: &GridState,
        bc: &BoundarySignal,
        source: Option<Source>,
        mut observe: F,
    ) -> Result<GridState, FdError>
    where
        F: FnMut(&GridState) -> Result<(), FdError>,
    {
        let mut state = u0.clone();
        observe(&state)?;
        let steps = self.cfg.steps();
        let start = (state.t / self.cfg.dt).round() as usize;
        for _ in start..steps {
            state = self.step_with_source(&state, bc, source)?;
            observe(&state)?;
        }
        Ok(state)
    }

    /// States at the requested times, each snapped to the nearest step.
    pub fn solve(
        &self,
        u0: &GridState,
        bc: &BoundarySignal,
        record: &[f64],
    ) -> Result<Vec<GridState>, FdError> {
        let t_final = self.cfg.t_final;
        let mut want = Vec::with_capacity(record.len());
        for &t in record {
            if !(t >= -1e-12 && t <= t_final * (1.0 + 1e-12)) {
                return Err(FdError::RecordTime(t));
            }
            want.push((t / self.cfg.dt).round() as usize);
        }
        let mut out: Vec<Option<GridState>> = vec![None; record.len()];
        let mut index = 0;
        self.run(u0, bc, None, |s| {
            for (k, &w) in want.iter().enumerate() {
                if w == index {
                    out[k] = Some(s.clone());
                }
            }
            index += 1;
            Ok(())
        })?;
        Ok(out.into_iter().map(|s| s.expect("every index is visited")).collect())
    }
}

/// One step with a freshly assembled solver.
pub fn step(state: &GridState, cfg: &SolverConfig, bc: &BoundarySignal) -> Result<GridState, FdError> {
    Solver::new(cfg)?.step(state, bc)
}

pub fn solve(
    u0: &GridState,
    cfg: &SolverConfig,
    bc: &BoundarySignal,
    record: &[f64],
) -> Result<Vec<GridState>, FdError> {
    Solver::new(cfg)?.solve(u0, bc, record)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        assert!(SolverConfig::new(16, 1.0).is_err());
        let c = SolverConfig::new(64, 1.0).unwrap();
        assert_eq!(c.steps() as f64 * c.dt, 1.0);
        assert!(c.dt <= 0.5 / 65.0);
        let mut bad = c.clone();
        bad.theta = 0.3;
        assert!(bad.validate().is_err());
        bad.theta = 0.5;
        bad.dt = 2.0;
        assert!(bad.validate().is_err());
    }

    #[test]
    fn zero_stays_zero() {
        let cfg = SolverConfig::new(40, 0.1).unwrap();
        let s = GridState::zeros(40);
        let out = step(&s, &cfg, &BoundarySignal::Homogeneous).unwrap();
        assert!(out.u.iter().all(|&v| v == 0.0));
        assert_eq!(out.t, cfg.dt);
    }

    #[test]
    fn constraints_hold_after_step() {
        let cfg = SolverConfig::new(64, 0.1).unwrap();
        let solver = Solver::new(&cfg).unwrap();
        let s = GridState::from_fn(64, |x| (3.0 * x).cos());
        let bc = BoundarySignal::function(|t| (1.0 + t, -0.5));
        let out = solver.step(&s, &bc).unwrap();
        let ops = solver.operators();
        let sup = out.u.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for v in ops.right_boundary(&out.u) {
            assert!(v.abs() <= 1e-9 * sup, "{v}");
        }
        assert!((out.u[0] - (1.0 + cfg.dt)).abs() < 1e-12);
        let ux = dot(&ops.constraints[1], &out.u);
        assert!((ux + 0.5).abs() < 1e-9);
    }

    #[test]
    fn grid_mismatch() {
        let cfg = SolverConfig::new(40, 0.1).unwrap();
        let s = GridState::zeros(41);
        assert!(matches!(
            step(&s, &cfg, &BoundarySignal::Homogeneous),
            Err(FdError::GridMismatch { .. })
        ));
    }
}
