//! Least-squares Chebyshev differentiation of a sampled time series.

use crate::FlatError;
use kawahara_fd::traces::cheb_derivative;
use nalgebra::{DMatrix, DVector};

pub const MAX_TIME_DEGREE: usize = 24;

fn clenshaw(c: &[f64], xi: f64) -> f64 {
    let (mut b1, mut b2) = (0.0, 0.0);
    for &ck in c.iter().skip(1).rev() {
        let b0 = 2.0 * xi * b1 - b2 + ck;
        b2 = b1;
        b1 = b0;
    }
    xi * b1 - b2 + c.first().copied().unwrap_or(0.0)
}

/// Degree used for `count` samples.
pub fn time_degree(count: usize) -> usize {
    (count / 3).min(MAX_TIME_DEGREE)
}

/// Derivatives `0..=m_max` of the least-squares Chebyshev fit of `(t, v)` on
/// `[a, b]`, evaluated at the sample times. `out[k][i]` is order `k` at `t[i]`.
pub fn time_derivatives(
    t: &[f64],
    v: &[f64],
    a: f64,
    b: f64,
    m_max: usize,
) -> Result<Vec<Vec<f64>>, FlatError> {
    let n = t.len();
    let degree = time_degree(n);
    if degree < 2 || !(b > a) {
        return Err(FlatError::TimeFit(format!(
            "{n} samples on [{a}, {b}] are too few"
        )));
    }
    let to_xi = |s: f64| (2.0 * s - a - b) / (b - a);
    let mut m = DMatrix::<f64>::zeros(n, degree + 1);
    for (i, &s) in t.iter().enumerate() {
        let xi = to_xi(s);
        let (mut t0, mut t1) = (1.0, xi);
        m[(i, 0)] = 1.0;
        m[(i, 1)] = xi;
        for k in 2..=degree {
            let t2 = 2.0 * xi * t1 - t0;
            t0 = t1;
            t1 = t2;
            m[(i, k)] = t2;
        }
    }
    let rhs = DVector::from_column_slice(v);
    let c = m
        .svd(true, true)
        .solve(&rhs, 1e-14)
        .map_err(|e| FlatError::TimeFit(e.to_string()))?;
    let mut coeffs: Vec<f64> = c.iter().copied().collect();
    let stretch = 2.0 / (b - a);
    let mut out = Vec::with_capacity(m_max + 1);
    let mut factor = 1.0;
    for _ in 0..=m_max {
        out.push(t.iter().map(|&s| factor * clenshaw(&coeffs, to_xi(s))).collect());
        coeffs = cheb_derivative(&coeffs);
        factor *= stretch;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clenshaw_matches_t3() {
        let c = [0.0, 0.0, 0.0, 1.0];
        for xi in [-1.0, -0.3, 0.2, 1.0] {
            let exact: f64 = 4.0 * xi * xi * xi - 3.0 * xi;
            assert!((clenshaw(&c, xi) - exact).abs() < 1e-14);
        }
    }

    #[test]
    fn exponential_derivatives() {
        let t: Vec<f64> = (0..200).map(|k| 0.5 + 0.5 * k as f64 / 199.0).collect();
        let v: Vec<f64> = t.iter().map(|s| (3.0 * s).exp()).collect();
        let d = time_derivatives(&t, &v, 0.5, 1.0, 3).unwrap();
        for (k, row) in d.iter().enumerate() {
            for (s, val) in t.iter().zip(row).step_by(17) {
                let exact = 3f64.powi(k as i32) * (3.0 * s).exp();
                // endpoint derivatives amplify roundoff roughly like degree^(2k)
                assert!((val - exact).abs() < 1e-6 * exact, "k={k} t={s}");
            }
        }
    }
}
