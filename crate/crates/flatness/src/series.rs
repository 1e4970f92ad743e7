use crate::tail::TailModel;
use crate::{FlatError, TrajectoryPlan};
use genfun::GeneratingFamily;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FlatValue {
    pub value: f64,
    /// Bound on the terms `j > J_max` dropped from the series.
    pub tail_bound: f64,
}

/// The truncated series `Σ_{j≤J} f_j(x) y^{(j)}(t) + g_j(x) z^{(j)}(t)`.
#[derive(Debug, Clone)]
pub struct FlatSeries<'a> {
    plan: &'a TrajectoryPlan,
    fam: &'a GeneratingFamily,
    tail: TailModel,
}

impl<'a> FlatSeries<'a> {
    pub fn new(plan: &'a TrajectoryPlan, fam: &'a GeneratingFamily) -> Result<Self, FlatError> {
        if fam.j_max < plan.j_max {
            return Err(FlatError::JMax {
                plan: plan.j_max,
                family: fam.j_max,
            });
        }
        Ok(FlatSeries {
            plan,
            fam,
            tail: TailModel::from_plan(plan),
        })
    }

    pub fn tail(&self) -> &TailModel {
        &self.tail
    }

    fn check(&self, x: f64, t_index: usize) -> Result<(), FlatError> {
        if !(-1.0..=0.0).contains(&x) {
            return Err(FlatError::Position(x));
        }
        if t_index >= self.plan.len() {
            return Err(FlatError::TimeIndex {
                index: t_index,
                len: self.plan.len(),
            });
        }
        Ok(())
    }

    pub fn evaluate(&self, x: f64, t_index: usize) -> Result<FlatValue, FlatError> {
        Ok(FlatValue {
            value: self.derivative(x, t_index, 0, 0)?,
            tail_bound: self.tail.value_bound(x)?,
        })
    }

    /// `∂_x^kx ∂_t^kt` of the truncated series, `kt ≤ 1`; the time derivative
    /// shifts the row index `j → j + 1`.
    pub fn derivative(&self, x: f64, t_index: usize, kx: usize, kt: usize) -> Result<f64, FlatError> {
        self.check(x, t_index)?;
        if kt > 1 {
            return Err(FlatError::Params(format!("time derivative order {kt} > 1")));
        }
        let mut sum = 0.0;
        for j in 0..=self.plan.j_max {
            let y = self.plan.y_derivs[j + kt][t_index];
            let z = self.plan.z_derivs[j + kt][t_index];
            if y != 0.0 {
                sum += self.fam.f[j].eval_derivative(x, kx)? * y;
            }
            if z != 0.0 {
                sum += self.fam.g[j].eval_derivative(x, kx)? * z;
            }
        }
        Ok(sum)
    }

    /// `∂_t u + ∂_x u + ∂_x³u − ∂_x⁵u` of the truncated series.
    pub fn residual(&self, x: f64, t_index: usize) -> Result<f64, FlatError> {
        let ut = self.derivative(x, t_index, 0, 1)?;
        let pu = self.derivative(x, t_index, 1, 0)? + self.derivative(x, t_index, 3, 0)?
            - self.derivative(x, t_index, 5, 0)?;
        Ok(ut + pu)
    }

    /// Bound on [`FlatSeries::residual`] implied by the truncation.
    pub fn residual_bound(&self, x: f64, t_index: usize) -> Result<f64, FlatError> {
        self.check(x, t_index)?;
        Ok(self.tail.residual_bound(x, t_index, self.plan))
    }
}

/// Partial sum over `j ≤ J_max` at `(x, times[t_index])` with its tail bound.
pub fn evaluate_flat_solution(
    plan: &TrajectoryPlan,
    fam: &GeneratingFamily,
    x: f64,
    t_index: usize,
) -> Result<FlatValue, FlatError> {
    FlatSeries::new(plan, fam)?.evaluate(x, t_index)
}
