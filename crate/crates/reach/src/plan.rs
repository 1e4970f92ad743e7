use crate::{ReachCoefficients, ReachError};
use flatness::TrajectoryPlan;
use gevrey::beta_jet_with;
use series_core::{jet_mul, Jet};

/// Gevrey order of the cutoff `β = 1 − φ_2`.
pub const BETA_ORDER: f64 = 2.0;

/// Jet of `Σ_n a_n (t − T)^n / n!` at `t` up to order `m`.
fn taylor_jet(a: &[f64], t: f64, t_final: f64, m: usize) -> Jet {
    let d = t - t_final;
    let values = (0..=m)
        .map(|k| {
            // Horner in d for Σ_{n≥k} a_n d^{n−k}/(n−k)!
            let mut acc = 0.0;
            for n in (k..a.len()).rev() {
                acc = acc * d / (n - k + 1) as f64 + a[n];
            }
            acc
        })
        .collect();
    Jet { point: t, values }
}

/// `y = f·β`, `z = g·β` with `f`, `g` the Taylor polynomials at `T` of the
/// coefficient data; rows `0..=j_max + 1` on `times`. `k` is the sharpness of `β`.
pub fn plan_reach(
    co: &ReachCoefficients,
    tau: f64,
    t_final: f64,
    times: &[f64],
    j_max: usize,
    k: f64,
) -> Result<TrajectoryPlan, ReachError> {
    if !(tau > 0.0 && tau < t_final) {
        return Err(ReachError::Window { tau, t_final });
    }
    let rows = j_max + 1;
    let mut plan = TrajectoryPlan::zeros(times.to_vec(), j_max, BETA_ORDER, tau, t_final);
    for (n, &t) in times.iter().enumerate() {
        if t <= tau {
            continue;
        }
        let beta = beta_jet_with(t, tau, t_final, rows, k)?;
        let y = jet_mul(&taylor_jet(&co.c, t, t_final, rows), &beta)?;
        let z = jet_mul(&taylor_jet(&co.b, t, t_final, rows), &beta)?;
        plan.set_sample(n, &y, &z);
    }
    Ok(plan)
}
