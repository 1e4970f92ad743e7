use crate::FdError;
use serde::{Deserialize, Serialize};

/// Equispaced nodes on `[−1, 0]`: `nx` interior points plus both endpoints.
pub fn nodes(nx: usize) -> Vec<f64> {
    let h = spacing(nx);
    let n = nx + 2;
    (0..n)
        .map(|i| if i == n - 1 { 0.0 } else { -1.0 + i as f64 * h })
        .collect()
}

pub fn spacing(nx: usize) -> f64 {
    1.0 / (nx + 1) as f64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridState {
    pub x: Vec<f64>,
    pub u: Vec<f64>,
    pub t: f64,
}

impl GridState {
    pub fn zeros(nx: usize) -> Self {
        GridState {
            x: nodes(nx),
            u: vec![0.0; nx + 2],
            t: 0.0,
        }
    }

    pub fn from_fn(nx: usize, f: impl Fn(f64) -> f64) -> Self {
        let x = nodes(nx);
        let u = x.iter().map(|&v| f(v)).collect();
        GridState { x, u, t: 0.0 }
    }

    pub fn nx(&self) -> usize {
        self.x.len().saturating_sub(2)
    }

    pub fn h(&self) -> f64 {
        spacing(self.nx())
    }

    pub fn check(&self, nx: usize) -> Result<(), FdError> {
        if self.x.len() != nx + 2 || self.u.len() != nx + 2 {
            return Err(FdError::GridMismatch {
                expected: nx + 2,
                got: self.u.len().min(self.x.len()),
            });
        }
        if !self.u.iter().all(|v| v.is_finite()) {
            return Err(FdError::NonFinite(self.t));
        }
        Ok(())
    }
}
