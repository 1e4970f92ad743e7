//! Jets of `φ_s` against 8th-order central differences evaluated in 128-bit
//! floating point with exact rational stencil weights.

use gevrey::{phi_jet, BumpParams, GrowthFit};
use phi_oracle::Oracle;

#[test]
fn jets_match_central_differences() {
    let h = 1e-3;
    let rs: Vec<f64> = (1..=19).map(|i| 0.05 * i as f64).collect();
    for s in [2.0, 3.0, 5.0] {
        let p = BumpParams::new(s, 1.0).unwrap();
        let mut o = Oracle::new(s, 1.0);
        let jets: Vec<Vec<f64>> = rs.iter().map(|&r| phi_jet(r, &p, 6).unwrap().values).collect();
        let fds: Vec<Vec<f64>> = rs
            .iter()
            .map(|&r| o.derivatives(r, 6, h))
            .collect();
        for m in 0..=6 {
            // entries that vanish by symmetry are compared against a floor
            let scale = fds.iter().fold(0.0f64, |a, f| a.max(f[m].abs()));
            for (i, &r) in rs.iter().enumerate() {
                let exact = fds[i][m];
                let denom = exact.abs().max(1e-8 * scale);
                let rel = (jets[i][m] - exact).abs() / denom;
                assert!(rel <= 1e-6, "s={s} r={r} m={m}: jet {} fd {exact} rel {rel:e}", jets[i][m]);
            }
        }
    }
}

#[test]
fn fixed_example_r03_s5() {
    let mut o = Oracle::new(5.0, 1.0);
    let p = BumpParams::new(5.0, 1.0).unwrap();
    let j = phi_jet(0.3, &p, 4).unwrap();
    let fds = o.derivatives(0.3, 4, 1e-3);
    for (m, &fd) in fds.iter().enumerate() {
        assert!((j.values[m] - fd).abs() <= 1e-6 * fd.abs(), "m={m}");
    }
}

#[test]
fn gevrey_growth_guard_s5() {
    let p = BumpParams::new(5.0, 1.0).unwrap();
    let grid: Vec<f64> = (1..200).map(|i| i as f64 / 200.0).collect();
    let maxima: Vec<f64> = (0..=10)
        .map(|m| {
            grid.iter()
                .map(|&r| phi_jet(r, &p, 10).unwrap().values[m].abs())
                .fold(0.0, f64::max)
        })
        .collect();
    let fit = GrowthFit::fit(&maxima, 5.0);
    assert!(fit.rho.is_finite() && fit.rho > 0.0);
    for (m, a) in maxima.iter().enumerate() {
        assert!(*a <= fit.bound(m) * (1.0 + 1e-9), "m={m}");
    }
}
