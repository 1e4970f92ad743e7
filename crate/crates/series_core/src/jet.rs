use crate::SeriesError;

/// Value and first `M` derivatives of a scalar function at `point`.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    pub point: f64,
    pub values: Vec<f64>,
}

impl Jet {
    pub fn new(point: f64, values: Vec<f64>) -> Result<Self, SeriesError> {
        if values.is_empty() {
            return Err(SeriesError::Empty);
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(SeriesError::NonFinite(i));
        }
        Ok(Jet { point, values })
    }

    pub fn constant(point: f64, c: f64, m: usize) -> Self {
        let mut values = vec![0.0; m + 1];
        values[0] = c;
        Jet { point, values }
    }

    /// Jet of the identity function `t ↦ t`.
    pub fn variable(point: f64, m: usize) -> Self {
        let mut values = vec![0.0; m + 1];
        values[0] = point;
        if m >= 1 {
            values[1] = 1.0;
        }
        Jet { point, values }
    }

    pub fn zero(point: f64, m: usize) -> Self {
        Jet {
            point,
            values: vec![0.0; m + 1],
        }
    }

    pub fn order(&self) -> usize {
        self.values.len() - 1
    }

    pub fn scale(&self, c: f64) -> Jet {
        Jet {
            point: self.point,
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }
}

/// Row `n` of Pascal's triangle.
pub fn binomial_row(n: usize) -> Vec<f64> {
    let mut row = vec![1.0; n + 1];
    for k in 1..n {
        row[k] = row[k - 1] * (n + 1 - k) as f64 / k as f64;
    }
    row
}

/// Leibniz product: `(ab)^{(n)} = Σ_j C(n,j) a^{(j)} b^{(n−j)}`.
pub fn jet_mul(a: &Jet, b: &Jet) -> Result<Jet, SeriesError> {
    if a.point != b.point || a.order() != b.order() {
        return Err(SeriesError::JetMismatch {
            p0: a.point,
            p1: b.point,
            m0: a.order(),
            m1: b.order(),
        });
    }
    let values = (0..=a.order())
        .map(|n| {
            let row = binomial_row(n);
            (0..=n).map(|j| row[j] * a.values[j] * b.values[n - j]).sum()
        })
        .collect();
    Ok(Jet {
        point: a.point,
        values,
    })
}

/// Jet of `t ↦ φ(scale·(t − shift))` at the preimage `shift + point/scale`,
/// given the jet of `φ` at `point`.
pub fn jet_compose_affine(j: &Jet, scale: f64, shift: f64) -> Result<Jet, SeriesError> {
    if scale == 0.0 {
        return Err(SeriesError::ZeroScale);
    }
    let mut f = 1.0;
    let values = j
        .values
        .iter()
        .map(|v| {
            let out = v * f;
            f *= scale;
            out
        })
        .collect();
    Ok(Jet {
        point: shift + j.point / scale,
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_of_t_at_one() {
        let t = Jet::variable(1.0, 2);
        let sq = jet_mul(&t, &t).unwrap();
        assert_eq!(sq.values, vec![1.0, 2.0, 2.0]);
    }

    #[test]
    fn constant_one_is_identity() {
        let a = Jet::new(0.3, vec![1.5, -2.0, 7.0, 0.25]).unwrap();
        let one = Jet::constant(0.3, 1.0, 3);
        assert_eq!(jet_mul(&a, &one).unwrap(), a);
    }

    #[test]
    fn exp_times_exp() {
        let e = Jet::new(0.0, vec![1.0; 5]).unwrap();
        let e2 = jet_mul(&e, &e).unwrap();
        assert_eq!(e2.values, vec![1.0, 2.0, 4.0, 8.0, 16.0]);
    }

    #[test]
    fn mismatch_is_rejected() {
        let a = Jet::zero(0.0, 2);
        let b = Jet::zero(1.0, 2);
        let c = Jet::zero(0.0, 3);
        assert!(jet_mul(&a, &b).is_err());
        assert!(jet_mul(&a, &c).is_err());
    }

    #[test]
    fn affine_identity_and_doubling() {
        let j = Jet::new(0.4, vec![1.0, 2.0, 3.0]).unwrap();
        assert_eq!(jet_compose_affine(&j, 1.0, 0.0).unwrap(), j);
        let r = Jet::variable(0.0, 2);
        let d = jet_compose_affine(&r, 2.0, 0.0).unwrap();
        assert_eq!(d.values, vec![0.0, 2.0, 0.0]);
        assert!(jet_compose_affine(&r, 0.0, 0.0).is_err());
    }

    #[test]
    fn affine_chain_rule_powers() {
        // r = (t − τ)/(T − τ) with T − τ = 0.5: entry m scales by 2^m.
        let j = Jet::new(0.5, vec![0.5, -1.0, 0.3, 4.0, -2.0]).unwrap();
        let out = jet_compose_affine(&j, 2.0, 0.5).unwrap();
        for m in 0..5 {
            assert_eq!(out.values[m], j.values[m] * 2f64.powi(m as i32));
        }
        assert_eq!(out.point, 0.75);
    }

    #[test]
    fn binomial_rows() {
        assert_eq!(binomial_row(0), vec![1.0]);
        assert_eq!(binomial_row(4), vec![1.0, 4.0, 6.0, 4.0, 1.0]);
    }
}
