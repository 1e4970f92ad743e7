use crate::ReachError;
use genfun::GeneratingFamily;
use serde::{Deserialize, Serialize};
use series_core::PowerSeries;
use std::fmt;

/// Holomorphy radius assigned to finite combinations of `f_j`, `g_j` (entire).
pub const ENTIRE_RADIUS: f64 = 1e16;
/// Relative tolerance of the boundary-condition residuals.
pub const MEMBERSHIP_TOL: f64 = 1e-8;

/// `R₀ = 2·6^{1/5}·e^{1/(5e)}`.
pub fn r0_constant() -> f64 {
    2.0 * 6f64.powf(0.2) * (1.0 / (5.0 * std::f64::consts::E)).exp()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReachTarget {
    /// Expansion about `x = 0`.
    pub u1: PowerSeries,
    pub radius: f64,
    pub n_check: usize,
}

/// JSON layout of a user-supplied target.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetFile {
    pub coeffs: Vec<f64>,
    pub radius: f64,
}

impl ReachTarget {
    /// `n_check` defaults to the deepest level the series order supports.
    pub fn new(u1: PowerSeries, radius: f64) -> Result<Self, ReachError> {
        if u1.base_point() != 0.0 {
            return Err(ReachError::Target(format!(
                "series must be expanded about 0, got {}",
                u1.base_point()
            )));
        }
        if !(radius > 0.0) {
            return Err(ReachError::Target(format!("radius {radius} must be positive")));
        }
        let order = u1.order();
        if order < 3 {
            return Err(ReachError::Order { needed: 3, got: order });
        }
        Ok(ReachTarget {
            n_check: (order - 3) / 5,
            u1,
            radius,
        })
    }

    /// `Σ_j cf[j] f_j + cg[j] g_j`, with the entire-function radius.
    pub fn combination(fam: &GeneratingFamily, cf: &[f64], cg: &[f64]) -> Result<Self, ReachError> {
        if cf.len().max(cg.len()) > fam.j_max + 1 {
            return Err(ReachError::TooManyCoefficients {
                got: cf.len().max(cg.len()),
                j_max: fam.j_max,
            });
        }
        let mut u1 = PowerSeries::zeros(0.0, fam.order);
        for (j, &c) in cf.iter().enumerate() {
            u1 = u1.axpy(c, &fam.f[j])?;
        }
        for (j, &c) in cg.iter().enumerate() {
            u1 = u1.axpy(c, &fam.g[j])?;
        }
        ReachTarget::new(u1, ENTIRE_RADIUS)
    }

    pub fn from_json(text: &str) -> Result<Self, ReachError> {
        let f: TargetFile = serde_json::from_str(text)?;
        ReachTarget::new(PowerSeries::new(0.0, f.coeffs)?, f.radius)
    }

    pub fn to_file(&self) -> TargetFile {
        TargetFile {
            coeffs: self.u1.coeffs().to_vec(),
            radius: self.radius,
        }
    }
}

/// Membership diagnostics for the reachable set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Membership {
    pub radius_ok: bool,
    /// `bc_residuals[n][j] = |∂_x^j P^n u1(0)|`, `j = 0, 1, 2`.
    pub bc_residuals: Vec<[f64; 3]>,
    /// Largest `|∂_x^j P^n u1(0)|` over `j ≤ 4`, `n ≤ N_check`.
    pub scale: f64,
    pub tolerance: f64,
}

impl Membership {
    pub fn bc_ok(&self) -> bool {
        self.bc_residuals.iter().flatten().all(|r| *r <= self.tolerance)
    }

    pub fn passed(&self) -> bool {
        self.radius_ok && self.bc_ok()
    }
}

impl fmt::Display for Membership {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let worst = self.bc_residuals.iter().flatten().fold(0.0f64, |a, r| a.max(*r));
        write!(
            f,
            "radius_ok = {}, worst boundary residual {worst:e} (tolerance {:e})",
            self.radius_ok, self.tolerance
        )
    }
}

pub fn check_membership(t: &ReachTarget) -> Result<Membership, ReachError> {
    let needed = 5 * t.n_check + 3;
    if t.u1.order() < needed {
        return Err(ReachError::Order {
            needed,
            got: t.u1.order(),
        });
    }
    let mut bc_residuals = Vec::with_capacity(t.n_check + 1);
    let mut scale = 0.0f64;
    let mut p = t.u1.clone();
    for n in 0..=t.n_check {
        if n > 0 {
            p = p.apply_p()?;
        }
        let d: Vec<f64> = (0..=4.min(p.order())).map(|j| p.derivative_at_base(j)).collect();
        scale = d.iter().fold(scale, |a, v| a.max(v.abs()));
        bc_residuals.push([d[0].abs(), d[1].abs(), d[2].abs()]);
    }
    if scale == 0.0 {
        scale = t.u1.max_abs_coeff();
    }
    Ok(Membership {
        radius_ok: t.radius > 2.0 * r0_constant(),
        bc_residuals,
        scale,
        tolerance: MEMBERSHIP_TOL * scale,
    })
}
