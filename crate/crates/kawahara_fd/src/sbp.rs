//! Diagonal-norm summation-by-parts first-derivative operator, sixth order in
//! the interior and third order in the six boundary rows.

use crate::banded::Banded;
use nalgebra::{DMatrix, DVector};

/// Boundary norm weights in units of `h`.
pub const BOUNDARY_WEIGHTS: [f64; 6] = [
    13649.0 / 43200.0,
    12013.0 / 8640.0,
    2711.0 / 4320.0,
    5359.0 / 4320.0,
    7877.0 / 8640.0,
    43801.0 / 43200.0,
];

/// Interior stencil `c_1, c_2, c_3` of `(Du)_i = Σ c_k (u_{i+k} − u_{i−k}) / h`.
pub const INTERIOR: [f64; 3] = [3.0 / 4.0, -3.0 / 20.0, 1.0 / 60.0];

const NB: usize = 6;
const BCOLS: usize = 9;

/// Closure block of `D` (unit spacing, 6 × 9). The skew part of `Q = H D`
/// on the 6 × 6 corner is the minimum-norm solution of the conditions
/// `D x^k = k x^{k−1}`, `k ≤ 3`.
pub fn boundary_block() -> [[f64; BCOLS]; NB] {
    // unknowns S_ij, i < j < 6
    let pairs: Vec<(usize, usize)> = (0..NB)
        .flat_map(|i| (i + 1..NB).map(move |j| (i, j)))
        .collect();
    let fixed = |i: usize, j: usize| -> f64 {
        // entries coupling to the interior stencil, plus B/2 in the corner
        if i == 0 && j == 0 {
            return -0.5;
        }
        if j >= NB && j - i <= 3 {
            return INTERIOR[j - i - 1];
        }
        0.0
    };
    let neq = NB * 4;
    let mut a = DMatrix::<f64>::zeros(neq, pairs.len());
    let mut rhs = DVector::<f64>::zeros(neq);
    for i in 0..NB {
        for k in 0..4 {
            let row = i * 4 + k;
            let xp = |j: usize| (j as f64).powi(k as i32);
            let target = if k == 0 {
                0.0
            } else {
                BOUNDARY_WEIGHTS[i] * k as f64 * (i as f64).powi(k as i32 - 1)
            };
            let known: f64 = (0..BCOLS).map(|j| fixed(i, j) * xp(j)).sum();
            rhs[row] = target - known;
            for (c, &(p, q)) in pairs.iter().enumerate() {
                if p == i {
                    a[(row, c)] += xp(q);
                } else if q == i {
                    a[(row, c)] -= xp(p);
                }
            }
        }
    }
    let s = a
        .svd(true, true)
        .solve(&rhs, 1e-13)
        .expect("SVD with both factors requested");
    let mut q = [[0.0; BCOLS]; NB];
    for (i, row) in q.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = fixed(i, j);
        }
    }
    for (c, &(p, r)) in pairs.iter().enumerate() {
        q[p][r] += s[c];
        q[r][p] -= s[c];
    }
    for (i, row) in q.iter_mut().enumerate() {
        for v in row.iter_mut() {
            *v /= BOUNDARY_WEIGHTS[i];
        }
    }
    q
}

/// Quadrature weights `H` on `n` nodes with spacing `h`.
pub fn norm_weights(n: usize, h: f64) -> Vec<f64> {
    let mut w = vec![h; n];
    for i in 0..NB {
        w[i] = BOUNDARY_WEIGHTS[i] * h;
        w[n - 1 - i] = BOUNDARY_WEIGHTS[i] * h;
    }
    w
}

/// First-derivative operator on `n ≥ 2·BCOLS` equispaced nodes.
pub fn first_derivative(n: usize, h: f64) -> Banded {
    assert!(n >= 2 * BCOLS, "need at least {} nodes", 2 * BCOLS);
    let blk = boundary_block();
    let mut d = Banded::zeros(n, BCOLS - 1, BCOLS - 1);
    for i in 0..n {
        if i < NB {
            for j in 0..BCOLS {
                d.set(i, j, blk[i][j] / h);
            }
        } else if i >= n - NB {
            let ii = n - 1 - i;
            for j in 0..BCOLS {
                d.set(i, n - 1 - j, -blk[ii][j] / h);
            }
        } else {
            for (k, &c) in INTERIOR.iter().enumerate() {
                d.set(i, i + k + 1, c / h);
                d.set(i, i - k - 1, -c / h);
            }
        }
    }
    d.trim()
}
