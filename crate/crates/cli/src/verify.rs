//! Seeded invariant suite behind `kawactl verify`.

use genfun::{
    build_family, convolution_fj, convolution_gj, f0_closed, g0_closed, p_power_sides,
    series_solve_p, verify_pk_identity, Variant, F0_IC, G0_IC,
};
use gevrey::{phi, BumpParams};
use kawahara_fd::{BoundarySignal, GridState, Solver, SolverConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use series_core::{factorial, PowerSeries};
use std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl Check {
    fn at_most(name: &'static str, value: f64, threshold: f64) -> Self {
        Check {
            name,
            value,
            threshold,
            pass: value <= threshold,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl VerifyReport {
    pub fn table(&self) -> String {
        let mut s = format!("{:<24} {:>12} {:>12}  result\n", "check", "value", "threshold");
        for c in &self.checks {
            s += &format!(
                "{:<24} {:>12.3e} {:>12.3e}  {}\n",
                c.name,
                c.value,
                c.threshold,
                if c.pass { "PASS" } else { "FAIL" }
            );
        }
        s
    }
}

fn grid(n: usize) -> Vec<f64> {
    (0..n).map(|i| -(i as f64) / (n - 1) as f64).collect()
}

fn closed_forms() -> f64 {
    let z = PowerSeries::zeros(0.0, 0);
    let f0 = series_solve_p(&z, F0_IC, 60, Variant::Full).expect("order 60 is valid");
    let g0 = series_solve_p(&z, G0_IC, 60, Variant::Full).expect("order 60 is valid");
    grid(1001)
        .into_iter()
        .map(|x| (f0.eval(x) - f0_closed(x)).abs().max((g0.eval(x) - g0_closed(x)).abs()))
        .fold(0.0, f64::max)
}

fn trace_constants() -> f64 {
    let fam = build_family(0, 60, Variant::Full).expect("order 60 is valid");
    let f3 = fam.f[0].eval_derivative(-1.0, 3).expect("order 60 covers ∂³");
    [
        (fam.traces_f[0].slope, 0.54),
        (f3, 1.59),
        (fam.traces_g[0].slope, -0.18),
    ]
    .iter()
    .map(|(v, e)| (v - e).abs())
    .fold(0.0, f64::max)
}

fn term_envelopes() -> f64 {
    let fam = build_family(10, 80, Variant::Full).expect("order 80 is valid");
    let g = grid(256);
    (0..=10).map(|j| fam.bound_violation(j, &g)).fold(f64::NEG_INFINITY, f64::max)
}

fn cascade() -> f64 {
    let fam = build_family(5, 80, Variant::Full).expect("order 80 is valid");
    let mut worst = 0.0f64;
    for j in 0..=5 {
        for k in 0..=j {
            let d = verify_pk_identity(&fam, k, j).expect("indices in range");
            worst = worst.max(d.f).max(d.g);
        }
    }
    worst
}

/// Largest relative deviation of the toy family from `x^{5j+3}/(5j+3)!`, `x^{5j+4}/(5j+4)!`.
fn toy_variant() -> f64 {
    let fam = build_family(10, 60, Variant::Toy).expect("order 60 is valid");
    let mut worst = 0.0f64;
    for j in 0..=10 {
        for (p, deg) in [(&fam.f[j], 5 * j + 3), (&fam.g[j], 5 * j + 4)] {
            for (k, &c) in p.coeffs().iter().enumerate() {
                let e = if k == deg { 1.0 / factorial(deg) } else { 0.0 };
                let d = if e == 0.0 { c.abs() } else { (c - e).abs() / e };
                worst = worst.max(d);
            }
        }
    }
    worst
}

fn convolution() -> f64 {
    let fam = build_family(1, 60, Variant::Full).expect("order 60 is valid");
    let xs = grid(41);
    let f1 = convolution_fj(&fam.f[0], &fam.f[0], 24, &xs).expect("24 points");
    let g1 = convolution_gj(&fam.g[0], &fam.g[0], 24, &xs).expect("24 points");
    f1.sup_distance(&fam.f[1]).max(g1.sup_distance(&fam.g[1]))
}

fn phi_symmetry(rng: &mut ChaCha8Rng) -> f64 {
    let mut worst = 0.0f64;
    for s in [2.0, 3.0, 5.0] {
        let p = BumpParams::new(s, 1.0).expect("valid order");
        for _ in 0..200 {
            let r: f64 = rng.gen_range(0.0..1.0);
            worst = worst.max((phi(r, &p) + phi(1.0 - r, &p) - 1.0).abs());
        }
    }
    worst
}

/// Largest relative one-step increase of the discrete L² norm from a random
/// smooth initial state.
fn contraction(rng: &mut ChaCha8Rng) -> Result<f64, kawahara_fd::FdError> {
    let nx = 64;
    let cfg = SolverConfig::new(nx, 0.02)?;
    let solver = Solver::new(&cfg)?;
    let ops = solver.operators().clone();
    let a: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let u0 = GridState::from_fn(nx, |x| {
        let w = x * x * (x + 1.0) * (x + 1.0);
        w * a.iter().enumerate().map(|(k, c)| c * ((k + 1) as f64 * PI * x).sin()).sum::<f64>()
    });
    let mut prev = ops.norms(&u0.u).l2;
    let mut worst = f64::NEG_INFINITY;
    solver.run(&u0, &BoundarySignal::Homogeneous, None, |s| {
        let l2 = ops.norms(&s.u).l2;
        worst = worst.max((l2 - prev) / prev.max(f64::MIN_POSITIVE));
        prev = l2;
        Ok(())
    })?;
    Ok(worst)
}

/// Largest `lhs/rhs` of `‖P^n f‖_∞ ≤ 3^n ‖f‖_{W^{5n,∞}}` over random polynomials.
fn p_power(rng: &mut ChaCha8Rng, cases: usize) -> Result<f64, series_core::SeriesError> {
    let mut worst = 0.0f64;
    for _ in 0..cases {
        let degree = rng.gen_range(0..=25);
        let coeffs: Vec<f64> = (0..=degree).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let p = PowerSeries::new(0.0, coeffs)?;
        for n in 1..=3 {
            let s = p_power_sides(&p, n, 512)?;
            if s.rhs > 0.0 {
                worst = worst.max(s.lhs / s.rhs);
            }
        }
    }
    Ok(worst)
}

pub fn run_suite(seed: u64) -> Result<VerifyReport, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let checks = vec![
        Check::at_most("closed_form_seeds", closed_forms(), 1e-12),
        Check::at_most("trace_constants", trace_constants(), 5e-3),
        Check::at_most("term_envelope_j10", term_envelopes(), 1e-14),
        Check::at_most("cascade_identity", cascade(), 1e-9),
        Check::at_most("toy_variant", toy_variant(), 4.0 * f64::EPSILON),
        Check::at_most("convolution_oracle", convolution(), 1e-9),
        Check::at_most("phi_symmetry", phi_symmetry(&mut rng), 1e-14),
        Check::at_most(
            "free_contraction",
            contraction(&mut rng).map_err(|e| e.to_string())?,
            1e-10,
        ),
        Check::at_most(
            "p_power_random",
            p_power(&mut rng, 200).map_err(|e| e.to_string())?,
            1.0,
        ),
    ];
    let passed = checks.iter().all(|c| c.pass);
    Ok(VerifyReport {
        seed,
        checks,
        passed,
    })
}
