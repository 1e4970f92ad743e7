use crate::envelope::term_envelope;
use crate::GenfunError;
use serde::{Deserialize, Serialize};
use series_core::dd::Dd;
use series_core::{falling, PowerSeries};

/// Initial derivatives `(u, u′, u″, u‴, u⁗)(0)` of `f_0`.
pub const F0_IC: [f64; 5] = [0.0, 0.0, 0.0, 1.0, 0.0];
/// Initial derivatives of `g_0`.
pub const G0_IC: [f64; 5] = [0.0, 0.0, 0.0, 0.0, 1.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// `P = ∂ + ∂³ − ∂⁵`.
    Full,
    /// `P = −∂⁵`; the family reduces to monomials.
    Toy,
}

/// Value and slope at `x = −1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Trace {
    pub value: f64,
    pub slope: f64,
}

#[derive(Debug, Clone)]
pub struct GeneratingFamily {
    pub j_max: usize,
    pub order: usize,
    pub variant: Variant,
    pub f: Vec<PowerSeries>,
    pub g: Vec<PowerSeries>,
    pub traces_f: Vec<Trace>,
    pub traces_g: Vec<Trace>,
}

/// JSON layout of a family dump.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FamilyDump {
    pub variant: Variant,
    #[serde(rename = "J_max")]
    pub j_max: usize,
    pub order: usize,
    pub f: Vec<Vec<f64>>,
    pub g: Vec<Vec<f64>>,
}

/// Coefficient recurrence in double-double. `rhs[k]` beyond its length is zero.
fn solve_dd(rhs: &[Dd], ic: &[f64; 5], order: usize, variant: Variant) -> Vec<Dd> {
    let mut a = vec![Dd::ZERO; order + 1];
    for (m, &v) in ic.iter().enumerate() {
        if m <= order {
            a[m] = Dd::new(v).div_f64(falling(0, m));
        }
    }
    for k in 0..order.saturating_sub(4) {
        let r = rhs.get(k).copied().unwrap_or(Dd::ZERO);
        let num = match variant {
            Variant::Full => {
                a[k + 1].mul_f64((k + 1) as f64)
                    + a[k + 3].mul_f64(falling(k, 3))
                    + r
            }
            Variant::Toy => r,
        };
        a[k + 5] = num.div_f64(falling(k, 5));
    }
    a
}

fn to_series(a: &[Dd]) -> PowerSeries {
    PowerSeries::new(0.0, a.iter().map(|d| d.to_f64()).collect())
        .expect("recurrence produces finite coefficients")
}

/// Solves `P u = −rhs` with `u^{(m)}(0) = ic[m]`, `m ≤ 4`, to the given order.
///
/// Coefficients of `rhs` past its truncation are treated as zero; only
/// `r_0 … r_{order−5}` enter.
pub fn series_solve_p(
    rhs: &PowerSeries,
    ic: [f64; 5],
    order: usize,
    variant: Variant,
) -> Result<PowerSeries, GenfunError> {
    if rhs.base_point() != 0.0 {
        return Err(GenfunError::BasePoint(rhs.base_point()));
    }
    if order < 4 {
        return Err(GenfunError::TargetTooShort(order));
    }
    let r: Vec<Dd> = rhs.coeffs().iter().map(|&c| Dd::new(c)).collect();
    Ok(to_series(&solve_dd(&r, &ic, order, variant)))
}

/// Smallest order with `N ≥ 5·J_max + 10` whose dropped tail at `|x| = 1`
/// is below `1e−14`, using the coefficient envelope `2^J·(1.3)^k/k!`
/// (1.3 exceeds `√a`, the fastest exponential rate in the family).
pub fn min_order_for_tail(j_max: usize) -> usize {
    let mut n = 5 * j_max + 10;
    loop {
        let mut term = 2f64.powi(j_max as i32);
        for k in 1..=n + 1 {
            term *= 1.3 / k as f64;
        }
        let mut tail = 0.0;
        let mut t = term;
        for k in n + 1..n + 60 {
            tail += t;
            t *= 1.3 / (k + 1) as f64;
        }
        if tail < 1e-14 {
            return n;
        }
        n += 1;
    }
}

fn chain(ic: [f64; 5], j_max: usize, order: usize, variant: Variant) -> Vec<PowerSeries> {
    let mut out = Vec::with_capacity(j_max + 1);
    let mut prev = solve_dd(&[], &ic, order, variant);
    out.push(to_series(&prev));
    for _ in 1..=j_max {
        let next = solve_dd(&prev, &[0.0; 5], order, variant);
        out.push(to_series(&next));
        prev = next;
    }
    out
}

fn traces(series: &[PowerSeries]) -> Vec<Trace> {
    series
        .iter()
        .map(|p| Trace {
            value: p.eval(-1.0),
            slope: p.eval_derivative(-1.0, 1).unwrap_or(0.0),
        })
        .collect()
}

/// Builds `f_0 … f_J`, `g_0 … g_J` to order `N` and caches their traces at `−1`.
pub fn build_family(
    j_max: usize,
    order: usize,
    variant: Variant,
) -> Result<GeneratingFamily, GenfunError> {
    let min = 5 * j_max + 10;
    if order < min {
        return Err(GenfunError::OrderTooSmall {
            j_max,
            got: order,
            min,
        });
    }
    let (f, g) = std::thread::scope(|s| {
        let hf = s.spawn(|| chain(F0_IC, j_max, order, variant));
        let g = chain(G0_IC, j_max, order, variant);
        (hf.join().expect("f chain panicked"), g)
    });
    let traces_f = traces(&f);
    let traces_g = traces(&g);
    Ok(GeneratingFamily {
        j_max,
        order,
        variant,
        f,
        g,
        traces_f,
        traces_g,
    })
}

impl GeneratingFamily {
    pub fn dump(&self) -> FamilyDump {
        FamilyDump {
            variant: self.variant,
            j_max: self.j_max,
            order: self.order,
            f: self.f.iter().map(|p| p.coeffs().to_vec()).collect(),
            g: self.g.iter().map(|p| p.coeffs().to_vec()).collect(),
        }
    }

    /// Largest excess of `|f_j|`, `|g_j|` over the envelope on the grid.
    pub fn bound_violation(&self, j: usize, grid: &[f64]) -> f64 {
        grid.iter()
            .map(|&x| {
                let b = term_envelope(j, x);
                (self.f[j].eval(x).abs() - b).max(self.g[j].eval(x).abs() - b)
            })
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PkDiscrepancy {
    /// `max |coeff(P^k f_j) − (−1)^k coeff(f_{j−k})| / max |coeff(f_{j−k})|`.
    pub f: f64,
    pub g: f64,
}

fn relative_discrepancy(pk: &PowerSeries, target: &PowerSeries, sign: f64) -> f64 {
    let n = pk.coeffs().len().min(target.coeffs().len());
    let scale = target.coeffs()[..n]
        .iter()
        .fold(0.0f64, |m, c| m.max(c.abs()));
    let diff = (0..n)
        .map(|i| (pk.coeffs()[i] - sign * target.coeffs()[i]).abs())
        .fold(0.0f64, f64::max);
    if scale > 0.0 {
        diff / scale
    } else {
        diff
    }
}

/// Checks `P^k f_j = (−1)^k f_{j−k}` and the same for `g`.
pub fn verify_pk_identity(
    fam: &GeneratingFamily,
    k: usize,
    j: usize,
) -> Result<PkDiscrepancy, GenfunError> {
    if k > j || j > fam.j_max {
        return Err(GenfunError::IndexRange {
            k,
            j,
            j_max: fam.j_max,
        });
    }
    // keep at least the leading degree of f_{j−k} in the comparison
    let needed = 5 * k + 5 * (j - k) + 4;
    if fam.order < needed {
        return Err(GenfunError::OrderExhausted {
            k,
            needed,
            got: fam.order,
        });
    }
    let sign = if k % 2 == 1 { -1.0 } else { 1.0 };
    let pf = fam.f[j].apply_p_n(k)?;
    let pg = fam.g[j].apply_p_n(k)?;
    Ok(PkDiscrepancy {
        f: relative_discrepancy(&pf, &fam.f[j - k], sign),
        g: relative_discrepancy(&pg, &fam.g[j - k], sign),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{f0_closed, g0_closed};
    use series_core::factorial;

    fn grid(n: usize) -> Vec<f64> {
        (0..n).map(|i| -(i as f64) / (n - 1) as f64).collect()
    }

    #[test]
    fn zero_data_gives_zero_series() {
        let z = PowerSeries::zeros(0.0, 20);
        let u = series_solve_p(&z, [0.0; 5], 60, Variant::Full).unwrap();
        assert!(u.is_zero());
        assert_eq!(u.order(), 60);
    }

    #[test]
    fn seeds_match_closed_forms() {
        let z = PowerSeries::zeros(0.0, 0);
        let f0 = series_solve_p(&z, F0_IC, 60, Variant::Full).unwrap();
        let g0 = series_solve_p(&z, G0_IC, 60, Variant::Full).unwrap();
        for x in grid(1001) {
            assert!((f0.eval(x) - f0_closed(x)).abs() <= 1e-12);
            assert!((g0.eval(x) - g0_closed(x)).abs() <= 1e-12);
        }
    }

    #[test]
    fn order_check() {
        let err = build_family(3, 20, Variant::Full).unwrap_err();
        assert_eq!(
            err,
            GenfunError::OrderTooSmall {
                j_max: 3,
                got: 20,
                min: 25
            }
        );
        assert!(err.to_string().contains("minimum is 25"));
    }

    #[test]
    fn toy_family_is_monomial() {
        let fam = build_family(3, 40, Variant::Toy).unwrap();
        let f1 = fam.f[1].coeffs();
        for (k, &c) in f1.iter().enumerate() {
            if k == 8 {
                assert_eq!(c, 1.0 / factorial(8));
            } else {
                assert_eq!(c, 0.0);
            }
        }
    }

    #[test]
    fn seed_boundary_values_exact() {
        let fam = build_family(4, 40, Variant::Full).unwrap();
        for j in 0..=4 {
            for m in 0..5 {
                let fv = fam.f[j].derivative_at_base(m);
                let gv = fam.g[j].derivative_at_base(m);
                let ef = if j == 0 && m == 3 { 1.0 } else { 0.0 };
                let eg = if j == 0 && m == 4 { 1.0 } else { 0.0 };
                assert_eq!(fv, ef);
                assert_eq!(gv, eg);
            }
        }
    }

    #[test]
    fn traces_of_f0() {
        let fam = build_family(0, 60, Variant::Full).unwrap();
        let t = fam.traces_f[0];
        assert!((t.value - f0_closed(-1.0)).abs() < 1e-14);
        assert!((t.slope - 0.54).abs() < 5e-3);
    }

    #[test]
    fn term_envelope_j6() {
        let fam = build_family(6, 80, Variant::Full).unwrap();
        let g = grid(256);
        for j in 0..=6 {
            assert!(fam.bound_violation(j, &g) <= 1e-14, "j = {j}");
        }
    }

    #[test]
    fn pk_identity_small_cases() {
        let fam = build_family(5, 80, Variant::Full).unwrap();
        let d = verify_pk_identity(&fam, 0, 3).unwrap();
        assert_eq!((d.f, d.g), (0.0, 0.0));
        let d = verify_pk_identity(&fam, 1, 1).unwrap();
        assert!(d.f <= 1e-10 && d.g <= 1e-10, "{d:?}");
        let d = verify_pk_identity(&fam, 2, 3).unwrap();
        assert!(d.f <= 1e-9 && d.g <= 1e-9, "{d:?}");
        assert!(verify_pk_identity(&fam, 3, 2).is_err());
    }

    #[test]
    fn tail_order_helper() {
        let n = min_order_for_tail(8);
        assert!(n >= 50);
        let n0 = min_order_for_tail(0);
        assert!((10..30).contains(&n0), "{n0}");
    }
}
