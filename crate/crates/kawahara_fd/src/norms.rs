use crate::grid::GridState;
use crate::sbp;
use serde::Serialize;

/// Discrete norms; integrals use the summation-by-parts quadrature and
/// derivatives the matching first-derivative operator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Norms {
    pub l2: f64,
    pub h1_semi: f64,
    pub h2_semi: f64,
    /// `(‖u‖² + ‖u_x‖² + ‖u_xx‖²)^{1/2}`.
    pub h2: f64,
    pub sup: f64,
}

pub fn weighted_l2(weights: &[f64], u: &[f64]) -> f64 {
    weights
        .iter()
        .zip(u)
        .map(|(w, v)| w * v * v)
        .sum::<f64>()
        .sqrt()
}

pub fn norms(state: &GridState) -> Norms {
    let n = state.u.len();
    if n < 18 {
        let sup = state.u.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let h = if n > 1 { 1.0 / (n - 1) as f64 } else { 1.0 };
        let l2 = (h * state.u.iter().map(|v| v * v).sum::<f64>()).sqrt();
        return Norms {
            l2,
            h1_semi: f64::NAN,
            h2_semi: f64::NAN,
            h2: f64::NAN,
            sup,
        };
    }
    let h = state.h();
    let d = sbp::first_derivative(n, h);
    let w = sbp::norm_weights(n, h);
    let ux = d.mul_vec(&state.u);
    let uxx = d.mul_vec(&ux);
    from_parts(&w, &state.u, &ux, &uxx)
}

pub(crate) fn from_parts(w: &[f64], u: &[f64], ux: &[f64], uxx: &[f64]) -> Norms {
    let l2 = weighted_l2(w, u);
    let h1_semi = weighted_l2(w, ux);
    let h2_semi = weighted_l2(w, uxx);
    Norms {
        l2,
        h1_semi,
        h2_semi,
        h2: (l2 * l2 + h1_semi * h1_semi + h2_semi * h2_semi).sqrt(),
        sup: u.iter().fold(0.0f64, |m, v| m.max(v.abs())),
    }
}
