use crate::tail::TailModel;
use crate::{FlatError, TrajectoryPlan};
use genfun::GeneratingFamily;
use kawahara_fd::export::fmt_f64;
use kawahara_fd::BoundarySignal;
use serde::Serialize;
use std::fmt::Write as _;

/// Boundary inputs `h1 = u(−1, t)`, `h2 = u_x(−1, t)` on the plan's samples.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ControlSignal {
    pub times: Vec<f64>,
    pub h1: Vec<f64>,
    pub h2: Vec<f64>,
    /// Truncation bounds for `h1` and `h2`.
    pub tail_h1: f64,
    pub tail_h2: f64,
}

impl ControlSignal {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("t,h1,h2\n");
        for k in 0..self.times.len() {
            let _ = writeln!(
                s,
                "{},{},{}",
                fmt_f64(self.times[k]),
                fmt_f64(self.h1[k]),
                fmt_f64(self.h2[k])
            );
        }
        s
    }

    pub fn boundary_signal(&self) -> BoundarySignal {
        BoundarySignal::Table {
            times: self.times.clone(),
            h1: self.h1.clone(),
            h2: self.h2.clone(),
        }
    }
}

pub fn synthesize_controls(
    plan: &TrajectoryPlan,
    fam: &GeneratingFamily,
) -> Result<ControlSignal, FlatError> {
    if fam.j_max < plan.j_max {
        return Err(FlatError::JMax {
            plan: plan.j_max,
            family: fam.j_max,
        });
    }
    let n = plan.len();
    let mut h1 = vec![0.0; n];
    let mut h2 = vec![0.0; n];
    for j in 0..=plan.j_max {
        let (tf, tg) = (fam.traces_f[j], fam.traces_g[j]);
        let (y, z) = (&plan.y_derivs[j], &plan.z_derivs[j]);
        for k in 0..n {
            h1[k] += tf.value * y[k] + tg.value * z[k];
            h2[k] += tf.slope * y[k] + tg.slope * z[k];
        }
    }
    let tail = TailModel::from_plan(plan);
    Ok(ControlSignal {
        times: plan.times.clone(),
        h1,
        h2,
        tail_h1: tail.value_bound(-1.0)?,
        tail_h2: tail.slope_bound(-1.0)?,
    })
}
