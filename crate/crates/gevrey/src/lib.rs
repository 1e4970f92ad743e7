//! Gevrey step function `φ_s`, its derivative jets, and the cutoff `β`.

use series_core::{factorial, jet_compose_affine, Jet, SeriesError};
use thiserror::Error;

/// Largest derivative order served by [`phi_jet`].
pub const MAX_JET_ORDER: usize = 40;

/// Distance from `0` or `1` inside which the jet is replaced by its flat limit.
pub const ENDPOINT_CLAMP: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GevreyError {
    #[error("Gevrey order s must exceed 1, got {0}")]
    Order(f64),

    #[error("sharpness K must be positive, got {0}")]
    Sharpness(f64),

    #[error("jet order {0} exceeds cap {MAX_JET_ORDER}")]
    JetOrder(usize),

    #[error("need tau < T, got tau = {tau}, T = {t_final}")]
    Window { tau: f64, t_final: f64 },

    #[error(transparent)]
    Series(#[from] SeriesError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BumpParams {
    pub s: f64,
    pub k: f64,
    pub sigma: f64,
}

impl BumpParams {
    pub fn new(s: f64, k: f64) -> Result<Self, GevreyError> {
        if !(s > 1.0) || !s.is_finite() {
            return Err(GevreyError::Order(s));
        }
        if !(k > 0.0) || !k.is_finite() {
            return Err(GevreyError::Sharpness(k));
        }
        Ok(BumpParams {
            s,
            k,
            sigma: 1.0 / (s - 1.0),
        })
    }
}

/// Exponent `w(r) = K(1 − r)^{−σ} − K r^{−σ}`; `φ = 1/(1 + e^{w})`.
fn exponent(r: f64, p: &BumpParams) -> f64 {
    p.k * ((1.0 - r).powf(-p.sigma) - r.powf(-p.sigma))
}

/// `φ_s(r)`: 1 for `r ≤ 0`, 0 for `r ≥ 1`, smooth monotone transition between.
pub fn phi(r: f64, p: &BumpParams) -> f64 {
    if r <= 0.0 {
        return 1.0;
    }
    if r >= 1.0 {
        return 0.0;
    }
    let w = exponent(r, p);
    if w > 0.0 {
        let e = (-w).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + w.exp())
    }
}

/// Normalized Taylor coefficients of `(x₀ + εh)^{−σ}` in `h`, `ε = ±1`.
fn neg_power_coeffs(x0: f64, eps: f64, sigma: f64, m: usize) -> Vec<f64> {
    let mut c = vec![0.0; m + 1];
    c[0] = x0.powf(-sigma);
    for k in 1..=m {
        // binom(−σ, k) (ε/x₀)^k recursively
        c[k] = c[k - 1] * (-sigma - (k - 1) as f64) / k as f64 * eps / x0;
    }
    c
}

fn exp_coeffs(v: &[f64]) -> Vec<f64> {
    let m = v.len() - 1;
    let mut e = vec![0.0; m + 1];
    e[0] = v[0].exp();
    for k in 1..=m {
        let s: f64 = (1..=k).map(|j| j as f64 * v[j] * e[k - j]).sum();
        e[k] = s / k as f64;
    }
    e
}

fn recip_coeffs(d: &[f64]) -> Vec<f64> {
    let m = d.len() - 1;
    let mut q = vec![0.0; m + 1];
    q[0] = 1.0 / d[0];
    for k in 1..=m {
        let s: f64 = (1..=k).map(|j| d[j] * q[k - j]).sum();
        q[k] = -s * q[0];
    }
    q
}

fn mul_coeffs(a: &[f64], b: &[f64]) -> Vec<f64> {
    (0..a.len())
        .map(|k| (0..=k).map(|j| a[j] * b[k - j]).sum())
        .collect()
}

/// Jet of `φ_s` at `r` up to order `m`, by Taylor-mode propagation.
pub fn phi_jet(r: f64, p: &BumpParams, m: usize) -> Result<Jet, GevreyError> {
    if m > MAX_JET_ORDER {
        return Err(GevreyError::JetOrder(m));
    }
    if r <= ENDPOINT_CLAMP {
        return Ok(Jet::constant(r, 1.0, m));
    }
    if r >= 1.0 - ENDPOINT_CLAMP {
        return Ok(Jet::zero(r, m));
    }
    let left = neg_power_coeffs(r, 1.0, p.sigma, m);
    let right = neg_power_coeffs(1.0 - r, -1.0, p.sigma, m);
    let w: Vec<f64> = (0..=m).map(|k| p.k * (right[k] - left[k])).collect();
    // keep the exponential argument nonpositive
    let flip = w[0] > 0.0;
    let arg: Vec<f64> = w.iter().map(|v| if flip { -v } else { *v }).collect();
    let e = exp_coeffs(&arg);
    let mut denom = e.clone();
    denom[0] += 1.0;
    let q = recip_coeffs(&denom);
    let c = if flip { mul_coeffs(&e, &q) } else { q };
    let values = c
        .iter()
        .enumerate()
        .map(|(k, v)| v * factorial(k))
        .collect();
    Ok(Jet::new(r, values)?)
}

/// Jet of `β(t) = 1 − φ_2((t − τ)/(T − τ))` with sharpness `K`.
pub fn beta_jet_with(t: f64, tau: f64, t_final: f64, m: usize, k: f64) -> Result<Jet, GevreyError> {
    if !(tau < t_final) {
        return Err(GevreyError::Window { tau, t_final });
    }
    let p = BumpParams::new(2.0, k)?;
    let span = t_final - tau;
    let r = (t - tau) / span;
    let j = jet_compose_affine(&phi_jet(r, &p, m)?, 1.0 / span, tau)?;
    let mut values: Vec<f64> = j.values.iter().map(|v| -v).collect();
    values[0] += 1.0;
    Ok(Jet { point: t, values })
}

/// [`beta_jet_with`] at `K = 1`.
pub fn beta_jet(t: f64, tau: f64, t_final: f64, m: usize) -> Result<Jet, GevreyError> {
    beta_jet_with(t, tau, t_final, m, 1.0)
}

/// Envelope `C (m!)^s / ρ^m` fitted to a sequence of derivative maxima.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthFit {
    pub s: f64,
    pub c: f64,
    pub rho: f64,
}

impl GrowthFit {
    /// Least-squares fit of `ln a_m − s ln m!` against `m`, with `C` raised so
    /// that every observed value lies on or below the envelope.
    pub fn fit(maxima: &[f64], s: f64) -> GrowthFit {
        let pts: Vec<(f64, f64)> = maxima
            .iter()
            .enumerate()
            .filter(|(_, a)| **a > 0.0 && a.is_finite())
            .map(|(m, a)| (m as f64, a.ln() - s * ln_factorial(m)))
            .collect();
        if pts.is_empty() {
            return GrowthFit { s, c: 0.0, rho: 1.0 };
        }
        let slope = if pts.len() >= 2 {
            let n = pts.len() as f64;
            let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
            let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
            let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
            let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
            sxy / sxx
        } else {
            0.0
        };
        let log_c = pts
            .iter()
            .map(|p| p.1 - slope * p.0)
            .fold(f64::NEG_INFINITY, f64::max);
        GrowthFit {
            s,
            c: log_c.exp(),
            rho: (-slope).exp(),
        }
    }

    pub fn bound(&self, m: usize) -> f64 {
        (self.c.ln() + self.s * ln_factorial(m) - m as f64 * self.rho.ln()).exp()
    }
}

fn ln_factorial(m: usize) -> f64 {
    (2..=m).map(|k| (k as f64).ln()).sum()
}
