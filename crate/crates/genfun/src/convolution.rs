use crate::GenfunError;
use gauss_quad::GaussLegendre;
use series_core::PowerSeries;

/// Function values on a set of sample points.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    pub x: Vec<f64>,
    pub values: Vec<f64>,
}

impl SampledFunction {
    pub fn sup_distance(&self, p: &PowerSeries) -> f64 {
        self.x
            .iter()
            .zip(&self.values)
            .fold(0.0f64, |m, (&x, &v)| m.max((v - p.eval(x)).abs()))
    }
}

fn rule(quad_points: usize) -> Result<GaussLegendre, GenfunError> {
    if quad_points < 16 {
        return Err(GenfunError::QuadPoints(quad_points));
    }
    Ok(GaussLegendre::new(quad_points).expect("degree >= 16 is valid"))
}

/// `∫₀ˣ ∫₀ʸ f_0(y − ξ) f_{j−1}(ξ) dξ dy` at each `x`, nested Gauss–Legendre.
pub fn convolution_fj(
    f_prev: &PowerSeries,
    f0: &PowerSeries,
    quad_points: usize,
    xs: &[f64],
) -> Result<SampledFunction, GenfunError> {
    let outer = rule(quad_points)?;
    let inner = rule(quad_points)?;
    let values = xs
        .iter()
        .map(|&x| {
            outer.integrate(0.0, x, |y| {
                inner.integrate(0.0, y, |xi| f0.eval(y - xi) * f_prev.eval(xi))
            })
        })
        .collect();
    Ok(SampledFunction {
        x: xs.to_vec(),
        values,
    })
}

/// `∫₀ˣ g_0(x − ξ) g_{j−1}(ξ) dξ` at each `x`.
pub fn convolution_gj(
    g_prev: &PowerSeries,
    g0: &PowerSeries,
    quad_points: usize,
    xs: &[f64],
) -> Result<SampledFunction, GenfunError> {
    let q = rule(quad_points)?;
    let values = xs
        .iter()
        .map(|&x| q.integrate(0.0, x, |xi| g0.eval(x - xi) * g_prev.eval(xi)))
        .collect();
    Ok(SampledFunction {
        x: xs.to_vec(),
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{build_family, Variant};

    fn grid() -> Vec<f64> {
        (0..=100).map(|i| -(i as f64) / 100.0).collect()
    }

    #[test]
    fn zero_input_zero_output() {
        let fam = build_family(1, 40, Variant::Full).unwrap();
        let z = PowerSeries::zeros(0.0, 10);
        let s = convolution_fj(&z, &fam.f[0], 16, &grid()).unwrap();
        assert!(s.values.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn too_few_points() {
        let z = PowerSeries::zeros(0.0, 10);
        assert_eq!(
            convolution_fj(&z, &z, 8, &[0.0]),
            Err(GenfunError::QuadPoints(8))
        );
    }

    #[test]
    fn matches_recurrence() {
        let fam = build_family(1, 60, Variant::Full).unwrap();
        let f1 = convolution_fj(&fam.f[0], &fam.f[0], 24, &grid()).unwrap();
        let g1 = convolution_gj(&fam.g[0], &fam.g[0], 24, &grid()).unwrap();
        assert!(f1.sup_distance(&fam.f[1]) <= 1e-9);
        assert!(g1.sup_distance(&fam.g[1]) <= 1e-9);
    }
}
