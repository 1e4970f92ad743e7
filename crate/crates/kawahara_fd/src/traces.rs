use crate::grid::GridState;
use crate::FdError;
use nalgebra::{DMatrix, DVector};
use serde::Serialize;

/// Nodes used by the one-sided trace stencils at `x = 0`.
pub const TRACE_NODES: usize = 8;

/// Finite-difference weights for derivatives `0..=m` at `z` on the nodes `xs`
/// (Fornberg's recursion, which solves the same moment system as the
/// Vandermonde matrix without forming it). Row `k` holds the weights of `f^{(k)}`.
pub fn fd_weights(z: f64, xs: &[f64], m: usize) -> Vec<Vec<f64>> {
    let n = xs.len();
    let mut c = vec![vec![0.0; n]; m + 1];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = xs[0] - z;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - z;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// `∂_x³u(0)` and `∂_x⁴u(0)` from the `TRACE_NODES` nodes nearest `x = 0`.
#[derive(Debug, Clone)]
pub struct TraceStencil {
    w3: Vec<f64>,
    w4: Vec<f64>,
}

impl TraceStencil {
    pub fn new(h: f64) -> Self {
        // offsets in units of h, node k sits at −k h
        let xs: Vec<f64> = (0..TRACE_NODES).map(|k| -(k as f64)).collect();
        let w = fd_weights(0.0, &xs, 4);
        TraceStencil {
            w3: w[3].iter().map(|v| v / h.powi(3)).collect(),
            w4: w[4].iter().map(|v| v / h.powi(4)).collect(),
        }
    }

    fn apply(w: &[f64], u: &[f64]) -> f64 {
        let n = u.len();
        w.iter().enumerate().map(|(k, c)| c * u[n - 1 - k]).sum()
    }

    pub fn d3(&self, u: &[f64]) -> f64 {
        Self::apply(&self.w3, u)
    }

    pub fn d4(&self, u: &[f64]) -> f64 {
        Self::apply(&self.w4, u)
    }
}

/// Traces `∂_x^k u(0, t)` for each requested `k ∈ {3, 4}`.
pub fn boundary_traces(state: &GridState, orders: &[usize]) -> Result<Vec<f64>, FdError> {
    if state.u.len() < TRACE_NODES {
        return Err(FdError::InsufficientNodes {
            need: TRACE_NODES,
            got: state.u.len(),
        });
    }
    let st = TraceStencil::new(state.h());
    orders
        .iter()
        .map(|&k| match k {
            3 => Ok(st.d3(&state.u)),
            4 => Ok(st.d4(&state.u)),
            other => Err(FdError::TraceOrder(other)),
        })
        .collect()
}

/// Default Chebyshev degree for a grid of `n` nodes.
pub fn default_degree(n: usize) -> usize {
    ((2.0 * (n as f64).sqrt()) as usize).clamp(8, 32)
}

/// Chebyshev coefficients of the derivative in the same variable.
pub fn cheb_derivative(c: &[f64]) -> Vec<f64> {
    let n = c.len();
    if n <= 1 {
        return vec![0.0];
    }
    let mut d = vec![0.0; n + 1];
    for k in (1..n).rev() {
        d[k - 1] = d[k + 1] + 2.0 * k as f64 * c[k];
    }
    d[0] *= 0.5;
    d.truncate(n - 1);
    d
}

fn cheb_derivative_n(c: &[f64], k: usize) -> Vec<f64> {
    (0..k).fold(c.to_vec(), |acc, _| cheb_derivative(&acc))
}

fn at_one(c: &[f64]) -> f64 {
    c.iter().sum()
}

fn axpy(y: &mut [f64], a: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

/// `P` acting on Chebyshev coefficients in `ξ = 2x + 1`.
pub fn cheb_apply_p(c: &[f64]) -> Vec<f64> {
    let d1 = cheb_derivative(c);
    let d3 = cheb_derivative_n(&d1, 2);
    let d5 = cheb_derivative_n(&d3, 2);
    let mut out = vec![0.0; d1.len()];
    axpy(&mut out, 2.0, &d1);
    axpy(&mut out, 8.0, &d3);
    axpy(&mut out, -32.0, &d5);
    out
}

/// Time derivatives of the traces `∂_t^m ∂_x^k u(0, t) = (−1)^m ∂_x^k P^m u(0, t)`
/// for `k = 3, 4`.
#[derive(Debug, Clone, Serialize)]
pub struct TraceJets {
    pub d3: Vec<f64>,
    pub d4: Vec<f64>,
    /// Estimated uncertainty of each entry.
    pub err3: Vec<f64>,
    pub err4: Vec<f64>,
    /// Chebyshev degree selected for each order.
    pub degree3: Vec<usize>,
    pub degree4: Vec<usize>,
}

/// Values at `ξ = 1` of `2^k ∂_ξ^k (−P)^m T_i` for every basis index `i`.
fn functionals(degree: usize, m_max: usize, k: usize) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = (0..=degree)
        .map(|i| {
            let mut e = vec![0.0; degree + 1];
            e[i] = 1.0;
            e
        })
        .collect();
    let scale = 2f64.powi(k as i32);
    let mut out = Vec::with_capacity(m_max + 1);
    for m in 0..=m_max {
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        out.push(
            basis
                .iter()
                .map(|e| sign * scale * at_one(&cheb_derivative_n(e, k)))
                .collect(),
        );
        basis = basis.iter().map(|e| cheb_apply_p(e)).collect();
    }
    out
}

struct Level {
    degree: usize,
    /// Weighted design matrix and its pseudo-inverse.
    a: DMatrix<f64>,
    pinv: DMatrix<f64>,
    l3: Vec<Vec<f64>>,
    l4: Vec<Vec<f64>>,
}

/// Spectral trace differentiation on a fixed grid. The state is fitted in
/// weighted least squares by Chebyshev polynomials of several degrees; `P` is
/// applied in coefficient space (`ξ = 2x + 1`), and for every order the degree
/// with the smallest estimated error (fit residual and trailing coefficients
/// amplified by the functional) is kept.
pub struct SpectralTraces {
    sqrt_w: Vec<f64>,
    m_max: usize,
    levels: Vec<Level>,
}

impl SpectralTraces {
    pub fn new(x: &[f64], weights: &[f64], m_max: usize) -> Result<Self, FdError> {
        let n = x.len();
        let top = default_degree(n).max(8);
        let mut levels = Vec::new();
        for degree in (8..=top).step_by(2) {
            if degree + 1 > n {
                break;
            }
            let mut a = DMatrix::<f64>::zeros(n, degree + 1);
            for i in 0..n {
                let xi = 2.0 * x[i] + 1.0;
                let s = weights[i].sqrt();
                let (mut t0, mut t1) = (1.0, xi);
                a[(i, 0)] = s;
                if degree >= 1 {
                    a[(i, 1)] = s * xi;
                }
                for k in 2..=degree {
                    let t2 = 2.0 * xi * t1 - t0;
                    t0 = t1;
                    t1 = t2;
                    a[(i, k)] = s * t2;
                }
            }
            let pinv = a
                .clone()
                .pseudo_inverse(0.0)
                .map_err(|e| FdError::Fit(e.to_string()))?;
            levels.push(Level {
                degree,
                a,
                pinv,
                l3: functionals(degree, m_max, 3),
                l4: functionals(degree, m_max, 4),
            });
        }
        if levels.is_empty() {
            return Err(FdError::Fit(format!("{n} nodes are too few for a degree-8 fit")));
        }
        Ok(SpectralTraces {
            sqrt_w: weights.iter().map(|w| w.sqrt()).collect(),
            m_max,
            levels,
        })
    }

    pub fn m_max(&self) -> usize {
        self.m_max
    }

    pub fn evaluate(&self, u: &[f64]) -> TraceJets {
        let b = DVector::from_iterator(u.len(), u.iter().zip(&self.sqrt_w).map(|(v, s)| v * s));
        let mut best3 = vec![(f64::INFINITY, 0.0, 0); self.m_max + 1];
        let mut best4 = best3.clone();
        for lv in &self.levels {
            let c = &lv.pinv * &b;
            let res = (&lv.a * &c - &b).norm();
            let d = lv.degree;
            let scale = c.amax();
            let delta = res
                .max(c[d].abs())
                .max(c[d - 1].abs())
                .max(f64::EPSILON * scale * (d + 1) as f64);
            let pick = |ls: &Vec<Vec<f64>>, best: &mut Vec<(f64, f64, usize)>| {
                for (m, l) in ls.iter().enumerate() {
                    let val: f64 = l.iter().zip(c.iter()).map(|(a, b)| a * b).sum();
                    let amp: f64 = l.iter().map(|v| v.abs()).sum();
                    let err = delta * amp;
                    if err < best[m].0 {
                        best[m] = (err, val, d);
                    }
                }
            };
            pick(&lv.l3, &mut best3);
            pick(&lv.l4, &mut best4);
        }
        TraceJets {
            d3: best3.iter().map(|b| b.1).collect(),
            d4: best4.iter().map(|b| b.1).collect(),
            err3: best3.iter().map(|b| b.0).collect(),
            err4: best4.iter().map(|b| b.0).collect(),
            degree3: best3.iter().map(|b| b.2).collect(),
            degree4: best4.iter().map(|b| b.2).collect(),
        }
    }
}

/// One-off form of [`SpectralTraces::evaluate`].
pub fn trace_time_jets(x: &[f64], u: &[f64], weights: &[f64], m_max: usize) -> Result<TraceJets, FdError> {
    Ok(SpectralTraces::new(x, weights, m_max)?.evaluate(u))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fornberg_centered_second_derivative() {
        let w = fd_weights(0.0, &[-1.0, 0.0, 1.0], 2);
        assert_eq!(w[2], vec![1.0, -2.0, 1.0]);
        assert_eq!(w[1], vec![-0.5, 0.0, 0.5]);
    }

    #[test]
    fn one_sided_weights_are_exact_on_degree_seven() {
        let xs: Vec<f64> = (0..8).map(|k| -(k as f64)).collect();
        let w = fd_weights(0.0, &xs, 4);
        for p in 0..8 {
            for (m, row) in w.iter().enumerate() {
                let s: f64 = row.iter().zip(&xs).map(|(c, x)| c * x.powi(p)).sum();
                let e = if p as usize == m { (1..=m).product::<usize>() as f64 } else { 0.0 };
                assert!((s - e).abs() < 1e-9 * (1.0 + e), "p={p} m={m}");
            }
        }
    }

    #[test]
    fn chebyshev_derivative_of_t3() {
        // T3 = 4ξ³ − 3ξ, T3' = 12ξ² − 3 = 6 T2 + 3 T0
        let d = cheb_derivative(&[0.0, 0.0, 0.0, 1.0]);
        assert_eq!(d, vec![3.0, 0.0, 6.0]);
    }

    #[test]
    fn insufficient_nodes() {
        let s = GridState {
            x: vec![0.0; 5],
            u: vec![0.0; 5],
            t: 0.0,
        };
        assert!(boundary_traces(&s, &[3]).is_err());
    }
}
