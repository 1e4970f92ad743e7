use series_core::{PowerSeries, SeriesError};

/// `2^j |x|^{5j+1} / (5j+1)!`, the envelope of `|f_j|` and `|g_j|` on `[−1, 0]`.
pub fn term_envelope(j: usize, x: f64) -> f64 {
    let d = 5 * j + 1;
    // accumulate |x|^d/d! as a running product to avoid overflow of d!
    let mut v = 2f64.powi(j as i32);
    for k in 1..=d {
        v *= x.abs() / k as f64;
    }
    v
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PPowerSides {
    /// `‖P^n f‖_∞` on the grid.
    pub lhs: f64,
    /// `3^n Σ_{i ≤ 5n} ‖∂^i f‖_∞` on the grid.
    pub rhs: f64,
}

/// Both sides of `‖P^n f‖_∞ ≤ 3^n ‖f‖_{W^{5n,∞}}` sampled on `npts` points of `[−1, 0]`.
pub fn p_power_sides(f: &PowerSeries, n: usize, npts: usize) -> Result<PPowerSides, SeriesError> {
    let p = f.with_order(f.order().max(5 * n));
    let grid: Vec<f64> = (0..npts)
        .map(|i| -(i as f64) / (npts.max(2) - 1) as f64)
        .collect();
    let sup = |q: &PowerSeries| grid.iter().fold(0.0f64, |m, &x| m.max(q.eval(x).abs()));
    let lhs = sup(&p.apply_p_n(n)?);
    let mut sum = 0.0;
    for i in 0..=5 * n {
        sum += sup(&p.derivative(i)?);
    }
    Ok(PPowerSides {
        lhs,
        rhs: 3f64.powi(n as i32) * sum,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_values() {
        assert_eq!(term_envelope(0, -1.0), 1.0);
        assert!((term_envelope(1, -1.0) - 2.0 / 720.0).abs() < 1e-18);
        assert_eq!(term_envelope(3, 0.0), 0.0);
    }

    #[test]
    fn a1_on_a_monomial() {
        let f = PowerSeries::monomial(0.0, 7, 1.0, 7);
        let s = p_power_sides(&f, 1, 64).unwrap();
        assert!(s.lhs <= s.rhs);
        assert!(s.lhs > 0.0);
    }
}
