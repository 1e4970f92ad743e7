use crate::{falling, SeriesError, CANCELLATION_RATIO};

/// Truncated Taylor series `Σ_{k≤N} a_k (x − x₀)^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeries {
    base_point: f64,
    coeffs: Vec<f64>,
}

impl PowerSeries {
    pub fn new(base_point: f64, coeffs: Vec<f64>) -> Result<Self, SeriesError> {
        if coeffs.is_empty() {
            return Err(SeriesError::Empty);
        }
        if let Some(i) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(SeriesError::NonFinite(i));
        }
        Ok(PowerSeries { base_point, coeffs })
    }

    pub fn zeros(base_point: f64, order: usize) -> Self {
        PowerSeries {
            base_point,
            coeffs: vec![0.0; order + 1],
        }
    }

    /// `c·(x − x₀)^degree` truncated at `order` (zero if `degree > order`).
    pub fn monomial(base_point: f64, degree: usize, c: f64, order: usize) -> Self {
        let mut p = Self::zeros(base_point, order);
        if degree <= order {
            p.coeffs[degree] = c;
        }
        p
    }

    /// Builds the series from derivative values `f^{(k)}(x₀)`.
    pub fn from_derivatives(base_point: f64, derivs: &[f64]) -> Result<Self, SeriesError> {
        let coeffs = derivs
            .iter()
            .enumerate()
            .map(|(k, d)| d / falling(0, k))
            .collect();
        Self::new(base_point, coeffs)
    }

    pub fn base_point(&self) -> f64 {
        self.base_point
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// `f^{(k)}(x₀) = k!·a_k`; zero beyond the truncation.
    pub fn derivative_at_base(&self, k: usize) -> f64 {
        self.coeffs.get(k).map_or(0.0, |a| a * falling(0, k))
    }

    pub fn eval(&self, x: f64) -> f64 {
        let h = x - self.base_point;
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * h + c)
    }

    /// Value of the `k`-th derivative at `x`.
    pub fn eval_derivative(&self, x: f64, k: usize) -> Result<f64, SeriesError> {
        Ok(self.derivative(k)?.eval(x))
    }

    pub fn derivative(&self, k: usize) -> Result<PowerSeries, SeriesError> {
        let order = self.order();
        if k > order {
            return Err(SeriesError::DerivativeOrder { k, order });
        }
        let coeffs = (0..=order - k)
            .map(|m| self.coeffs[m + k] * falling(m, k))
            .collect();
        Ok(PowerSeries {
            base_point: self.base_point,
            coeffs,
        })
    }

    /// `P p = p′ + p‴ − p⁽⁵⁾`, truncated at `order − 5`.
    pub fn apply_p(&self) -> Result<PowerSeries, SeriesError> {
        let order = self.order();
        if order < 5 {
            return Err(SeriesError::OrderTooSmall {
                needed: 5,
                got: order,
            });
        }
        let a = &self.coeffs;
        let mut out = Vec::with_capacity(order - 4);
        let mut max_term: f64 = 0.0;
        for m in 0..=order - 5 {
            let t1 = a[m + 1] * falling(m, 1);
            let t3 = a[m + 3] * falling(m, 3);
            let t5 = a[m + 5] * falling(m, 5);
            max_term = max_term.max(t1.abs()).max(t3.abs()).max(t5.abs());
            out.push(t1 + t3 - t5);
        }
        let res = PowerSeries {
            base_point: self.base_point,
            coeffs: out,
        };
        let scale = res.max_abs_coeff();
        if scale > 0.0 && max_term > CANCELLATION_RATIO * scale {
            log::warn!(
                "cancellation in P: intermediate {max_term:e} vs result {scale:e}"
            );
        }
        Ok(res)
    }

    /// `n` applications of `P`.
    pub fn apply_p_n(&self, n: usize) -> Result<PowerSeries, SeriesError> {
        let mut p = self.clone();
        for _ in 0..n {
            p = p.apply_p()?;
        }
        Ok(p)
    }

    /// Truncates (or zero-pads) to the given order.
    pub fn with_order(&self, order: usize) -> PowerSeries {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, 0.0);
        PowerSeries {
            base_point: self.base_point,
            coeffs,
        }
    }

    pub fn scale(&self, c: f64) -> PowerSeries {
        PowerSeries {
            base_point: self.base_point,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Sum truncated at the smaller order.
    pub fn add(&self, other: &PowerSeries) -> Result<PowerSeries, SeriesError> {
        self.combine(other, 1.0)
    }

    pub fn sub(&self, other: &PowerSeries) -> Result<PowerSeries, SeriesError> {
        self.combine(other, -1.0)
    }

    /// `self + c·other`, truncated at the smaller order.
    pub fn axpy(&self, c: f64, other: &PowerSeries) -> Result<PowerSeries, SeriesError> {
        self.combine(other, c)
    }

    fn combine(&self, other: &PowerSeries, c: f64) -> Result<PowerSeries, SeriesError> {
        if self.base_point != other.base_point {
            return Err(SeriesError::BaseMismatch(self.base_point, other.base_point));
        }
        let n = self.coeffs.len().min(other.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeffs[k] + c * other.coeffs[k]).collect();
        Ok(PowerSeries {
            base_point: self.base_point,
            coeffs,
        })
    }
}

pub fn ps_eval(p: &PowerSeries, x: f64) -> f64 {
    p.eval(x)
}

pub fn ps_derivative(p: &PowerSeries, k: usize) -> Result<PowerSeries, SeriesError> {
    p.derivative(k)
}

pub fn ps_apply_p(p: &PowerSeries) -> Result<PowerSeries, SeriesError> {
    p.apply_p()
}
