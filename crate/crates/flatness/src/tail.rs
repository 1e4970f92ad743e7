//! A-posteriori bounds for the truncated flat series.

use crate::{FlatError, TrajectoryPlan};
use gevrey::GrowthFit;

const MAX_TERMS: usize = 2000;

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// `ln(2^j |x|^d / d!)`.
fn ln_envelope(j: usize, d: usize, x: f64) -> f64 {
    if d == 0 {
        return j as f64 * std::f64::consts::LN_2;
    }
    j as f64 * std::f64::consts::LN_2 + d as f64 * x.abs().ln() - ln_factorial(d)
}

/// Bound on `|y^{(j)}| + |z^{(j)}|`: the observed maxima on the plan's
/// rows, and beyond them (and wherever larger) a fitted Gevrey envelope.
#[derive(Debug, Clone)]
pub struct TailModel {
    pub j_max: usize,
    pub fit_y: GrowthFit,
    pub fit_z: GrowthFit,
    pub max_y: Vec<f64>,
    pub max_z: Vec<f64>,
}

impl TailModel {
    pub fn from_plan(plan: &TrajectoryPlan) -> Self {
        let (max_y, max_z) = plan.row_maxima();
        TailModel {
            j_max: plan.j_max,
            fit_y: GrowthFit::fit(&max_y, plan.s),
            fit_z: GrowthFit::fit(&max_z, plan.s),
            max_y,
            max_z,
        }
    }

    /// `ln(Ŷ_j + Ẑ_j)`; `−∞` when both vanish.
    fn ln_signal(&self, j: usize) -> f64 {
        let pick = |fit: &GrowthFit, obs: &[f64]| {
            let f = if fit.c > 0.0 { fit.bound(j) } else { 0.0 };
            obs.get(j).map_or(f, |o| o.max(f))
        };
        (pick(&self.fit_y, &self.max_y) + pick(&self.fit_z, &self.max_z)).ln()
    }

    fn series(&self, x: f64, shift: usize, s: f64) -> Result<f64, FlatError> {
        let mut sum = 0.0;
        let mut prev = f64::INFINITY;
        for j in self.j_max + 1..self.j_max + 1 + MAX_TERMS {
            let ln_sig = self.ln_signal(j);
            if ln_sig == f64::NEG_INFINITY {
                return Ok(sum);
            }
            let term = (ln_envelope(j, 5 * j + shift, x) + ln_sig).exp();
            if !term.is_finite() {
                break;
            }
            sum += term;
            if term < prev && term <= 1e-17 * sum {
                return Ok(sum);
            }
            prev = term;
        }
        Err(FlatError::DivergentTail { j_max: self.j_max, s })
    }

    /// Bound on the dropped terms `Σ_{j>J} f_j(x) y^{(j)} + g_j(x) z^{(j)}`.
    pub fn value_bound(&self, x: f64) -> Result<f64, FlatError> {
        self.series(x, 1, self.fit_y.s)
    }

    /// Bound on the `x`-derivative of the dropped terms, from
    /// `|f_j′(x)| ≤ 2^j |x|^{5j} / (5j)!`.
    pub fn slope_bound(&self, x: f64) -> Result<f64, FlatError> {
        self.series(x, 0, self.fit_y.s)
    }

    /// Bound on the PDE residual of the truncated series,
    /// `|f_J y^{(J+1)} + g_J z^{(J+1)}|`.
    pub fn residual_bound(&self, x: f64, t_index: usize, plan: &TrajectoryPlan) -> f64 {
        let j = self.j_max;
        let env = ln_envelope(j, 5 * j + 1, x).exp();
        env * (plan.y_derivs[j + 1][t_index].abs() + plan.z_derivs[j + 1][t_index].abs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use genfun::term_envelope;

    #[test]
    fn envelope_matches_term_bound() {
        for j in [0, 3, 9] {
            for x in [-1.0, -0.4] {
                let a = ln_envelope(j, 5 * j + 1, x).exp();
                assert!((a - term_envelope(j, x)).abs() <= 1e-13 * term_envelope(j, x));
            }
        }
    }

    #[test]
    fn zero_plan_has_zero_tail() {
        let plan = TrajectoryPlan::zeros(vec![0.0, 1.0], 4, 3.0, 0.5, 1.0);
        let tm = TailModel::from_plan(&plan);
        assert_eq!(tm.value_bound(-1.0).unwrap(), 0.0);
        assert_eq!(tm.slope_bound(-1.0).unwrap(), 0.0);
    }

    #[test]
    fn super_factorial_growth_diverges() {
        let mut plan = TrajectoryPlan::zeros(vec![0.0], 3, 3.0, 0.5, 1.0);
        for j in 0..=4 {
            plan.y_derivs[j][0] = ((2..=j).product::<usize>() as f64).powi(9);
        }
        let mut tm = TailModel::from_plan(&plan);
        tm.fit_y.s = 9.0;
        assert!(matches!(tm.value_bound(-1.0), Err(FlatError::DivergentTail { .. })));
    }
}
