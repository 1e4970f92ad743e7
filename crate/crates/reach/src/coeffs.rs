use crate::{ReachError, ReachTarget};
use genfun::{term_envelope, GeneratingFamily};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use series_core::PowerSeries;

/// Terminal Taylor data `c_n = y^{(n)}(T)`, `b_n = z^{(n)}(T)`, `n ≤ N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReachCoefficients {
    pub c: Vec<f64>,
    pub b: Vec<f64>,
    #[serde(rename = "N")]
    pub n: usize,
}

/// Fitted `|c_n|, |b_n| ≤ C H^n (5n)!`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoefficientGrowth {
    pub c: f64,
    pub h: f64,
}

impl ReachCoefficients {
    pub fn zeros(n: usize) -> Self {
        ReachCoefficients {
            c: vec![0.0; n + 1],
            b: vec![0.0; n + 1],
            n,
        }
    }

    /// Log-linear fit of `max(|c_n|, |b_n|)/(5n)!` over the nonzero entries;
    /// `H = 0` when fewer than two are nonzero.
    pub fn growth(&self) -> CoefficientGrowth {
        let pts: Vec<(f64, f64)> = (0..=self.n)
            .filter_map(|n| {
                let a = self.c[n].abs().max(self.b[n].abs());
                let lf: f64 = (2..=5 * n).map(|k| (k as f64).ln()).sum();
                (a > 0.0).then(|| (n as f64, a.ln() - lf))
            })
            .collect();
        match pts.len() {
            0 => CoefficientGrowth { c: 0.0, h: 0.0 },
            1 => CoefficientGrowth {
                c: pts[0].1.exp(),
                h: 0.0,
            },
            _ => {
                let k = pts.len() as f64;
                let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
                let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
                let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
                let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
                let slope = sxy / sxx;
                let lc = pts.iter().map(|p| p.1 - slope * p.0).fold(f64::NEG_INFINITY, f64::max);
                CoefficientGrowth {
                    c: lc.exp(),
                    h: slope.exp(),
                }
            }
        }
    }
}

/// `c_n = (−1)^n ∂_x³ P^n u1(0)`, `b_n = (−1)^n ∂_x⁴ P^n u1(0)` for `n ≤ N`.
pub fn extract_coefficients(t: &ReachTarget, n: usize) -> Result<ReachCoefficients, ReachError> {
    let needed = 5 * n + 4;
    if t.u1.order() < needed {
        return Err(ReachError::Order {
            needed,
            got: t.u1.order(),
        });
    }
    let mut co = ReachCoefficients::zeros(n);
    let mut p = t.u1.clone();
    for k in 0..=n {
        if k > 0 {
            p = p.apply_p()?;
        }
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        co.c[k] = sign * p.derivative_at_base(3);
        co.b[k] = sign * p.derivative_at_base(4);
    }
    Ok(co)
}

/// Deepest `N` that [`extract_coefficients`] accepts for this target.
pub fn max_extractable(t: &ReachTarget) -> usize {
    t.u1.order().saturating_sub(4) / 5
}

/// `Σ_n c_n f_n + b_n g_n`.
pub fn reconstruct_target(fam: &GeneratingFamily, co: &ReachCoefficients) -> Result<PowerSeries, ReachError> {
    if co.n > fam.j_max {
        return Err(ReachError::TooManyCoefficients {
            got: co.n + 1,
            j_max: fam.j_max,
        });
    }
    let mut u = PowerSeries::zeros(0.0, fam.order);
    for k in 0..=co.n {
        if co.c[k] != 0.0 {
            u = u.axpy(co.c[k], &fam.f[k])?;
        }
        if co.b[k] != 0.0 {
            u = u.axpy(co.b[k], &fam.g[k])?;
        }
    }
    Ok(u)
}

/// Bound at `x = −1` on the target terms `n ∈ (from, to]` that a plan
/// truncated at `from` leaves out: `Σ term_envelope(n, −1)(|c_n| + |b_n|)`.
pub fn truncation_tail(co: &ReachCoefficients, from: usize) -> f64 {
    (from + 1..=co.n)
        .map(|k| term_envelope(k, -1.0) * (co.c[k].abs() + co.b[k].abs()))
        .sum()
}

/// Rank of the map `a ↦ (∂_x^j P^n u(0))_{n ≤ N, j ≤ 4}` on polynomials of
/// degree `≤ 5N + 4`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UniqueContinuation {
    pub rank: usize,
    pub dim: usize,
}

impl UniqueContinuation {
    /// Full rank: vanishing data forces every coefficient to vanish.
    pub fn injective(&self) -> bool {
        self.rank == self.dim
    }
}

pub fn unique_continuation(n: usize) -> Result<UniqueContinuation, ReachError> {
    let dim = 5 * n + 5;
    let order = dim - 1;
    let mut m = DMatrix::<f64>::zeros(dim, dim);
    for col in 0..dim {
        let mut p = PowerSeries::monomial(0.0, col, 1.0, order);
        for k in 0..=n {
            if k > 0 {
                p = p.apply_p()?;
            }
            for j in 0..=4 {
                m[(5 * k + j, col)] = p.derivative_at_base(j);
            }
        }
    }
    // equilibrate rows: entries span many factorial scales
    for r in 0..dim {
        let s = m.row(r).amax();
        if s > 0.0 {
            m.row_mut(r).scale_mut(1.0 / s);
        }
    }
    let sv = m.singular_values();
    let tol = sv.max() * dim as f64 * f64::EPSILON;
    Ok(UniqueContinuation {
        rank: sv.iter().filter(|v| **v > tol).count(),
        dim,
    })
}
