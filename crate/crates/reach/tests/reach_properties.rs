use flatness::family_for;
use genfun::GeneratingFamily;
use kawahara_fd::SolverConfig;
use reach::*;
use series_core::PowerSeries;
use std::sync::OnceLock;

fn fam() -> &'static GeneratingFamily {
    static F: OnceLock<GeneratingFamily> = OnceLock::new();
    F.get_or_init(|| family_for(8).unwrap())
}

/// Dense polynomial calculus, independent of the library's `P`.
fn brute_p(a: &[f64]) -> Vec<f64> {
    let d = |v: &[f64]| -> Vec<f64> { (1..v.len()).map(|k| k as f64 * v[k]).collect() };
    let d1 = d(a);
    let d3 = d(&d(&d1));
    let d5 = d(&d(&d3));
    (0..d1.len())
        .map(|k| d1[k] + d3.get(k).copied().unwrap_or(0.0) - d5.get(k).copied().unwrap_or(0.0))
        .collect()
}

fn brute_trace(a: &[f64], n: usize, k: usize) -> f64 {
    let mut v = a.to_vec();
    for _ in 0..n {
        v = brute_p(&v);
    }
    let fact: f64 = (1..=k).map(|i| i as f64).product();
    v.get(k).copied().unwrap_or(0.0) * fact
}

fn sup_diff(a: &PowerSeries, b: &PowerSeries) -> f64 {
    (0..=400)
        .map(|i| {
            let x = -(i as f64) / 400.0;
            (a.eval(x) - b.eval(x)).abs()
        })
        .fold(0.0, f64::max)
}

#[test]
fn r0_value() {
    let r0 = r0_constant();
    assert!(r0 > 1.0);
    assert!((r0 - 3.0806).abs() < 5e-4, "{r0}");
    assert!(2.0 * r0 < 7.0);
}

#[test]
fn membership_examples() {
    let mut f0 = ReachTarget::new(fam().f[0].clone(), 7.0).unwrap();
    f0.n_check = 8;
    let m = check_membership(&f0).unwrap();
    assert!(m.radius_ok && m.passed());
    assert!(m.bc_residuals.iter().flatten().all(|r| *r <= 1e-10));

    let x = ReachTarget::new(PowerSeries::monomial(0.0, 1, 1.0, 40), 7.0).unwrap();
    let m = check_membership(&x).unwrap();
    assert_eq!(m.bc_residuals[0][1], 1.0);
    assert!(!m.passed());

    // roundoff in P^n grows about tenfold per level; check to the planning depth
    let mut f1 = ReachTarget::new(fam().f[1].clone(), 7.0).unwrap();
    f1.n_check = 8;
    let m = check_membership(&f1).unwrap();
    assert!(m.passed());
    assert!(m.bc_residuals.iter().flatten().all(|r| *r <= 1e-10));

    let small = ReachTarget::new(fam().f[0].clone(), 6.0).unwrap();
    assert!(!check_membership(&small).unwrap().radius_ok);

    let mut deep = f0.clone();
    deep.n_check = 100;
    assert!(matches!(check_membership(&deep), Err(ReachError::Order { .. })));
}

#[test]
fn extract_seed_functions() {
    let co = extract_coefficients(&ReachTarget::new(fam().f[0].clone(), 7.0).unwrap(), 6).unwrap();
    assert!((co.c[0] - 1.0).abs() < 1e-14);
    assert!(co.c[1..].iter().chain(&co.b).all(|v| v.abs() < 1e-12));
    let co = extract_coefficients(&ReachTarget::new(fam().g[0].clone(), 7.0).unwrap(), 6).unwrap();
    assert!((co.b[0] - 1.0).abs() < 1e-14);
    assert!(co.b[1..].iter().chain(&co.c).all(|v| v.abs() < 1e-12));
    let t = ReachTarget::new(fam().f[0].clone(), 7.0).unwrap();
    assert!(matches!(extract_coefficients(&t, 100), Err(ReachError::Order { .. })));
}

/// Signs for `u1 = 2 f_1 − 3 g_2`, fixed by dense differentiation.
#[test]
fn extract_mixed_signs_against_brute_force() {
    let t = ReachTarget::combination(fam(), &[0.0, 2.0], &[0.0, 0.0, -3.0]).unwrap();
    let co = extract_coefficients(&t, 5).unwrap();
    for n in 0..=5 {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let c = sign * brute_trace(t.u1.coeffs(), n, 3);
        let b = sign * brute_trace(t.u1.coeffs(), n, 4);
        assert!((co.c[n] - c).abs() <= 1e-10, "c[{n}]");
        assert!((co.b[n] - b).abs() <= 1e-10, "b[{n}]");
    }
    let want_c = [0.0, 2.0, 0.0, 0.0, 0.0, 0.0];
    let want_b = [0.0, 0.0, -3.0, 0.0, 0.0, 0.0];
    for n in 0..=5 {
        assert!((co.c[n] - want_c[n]).abs() <= 1e-10);
        assert!((co.b[n] - want_b[n]).abs() <= 1e-10);
    }
}

fn combos() -> Vec<(Vec<f64>, Vec<f64>)> {
    vec![
        (vec![1.0], vec![]),
        (vec![0.0, 1.0], vec![1.0]),
        (vec![0.3, -1.2, 0.0, 2.0, 0.7], vec![0.0, 0.5, -0.25, 0.0, 1.5]),
        (vec![0.0, 0.0, 0.0, 0.0, -4.0], vec![2.0, 0.0, 0.0, 3.0]),
    ]
}

#[test]
fn round_trips() {
    let fam = fam();
    for (cf, cg) in combos() {
        let t = ReachTarget::combination(fam, &cf, &cg).unwrap();
        let co = extract_coefficients(&t, 8).unwrap();
        for n in 0..=8 {
            let c = cf.get(n).copied().unwrap_or(0.0);
            let b = cg.get(n).copied().unwrap_or(0.0);
            assert!((co.c[n] - c).abs() <= 1e-9 * (1.0 + c.abs()), "{cf:?} c[{n}]");
            assert!((co.b[n] - b).abs() <= 1e-9 * (1.0 + b.abs()), "{cg:?} b[{n}]");
        }
        let back = reconstruct_target(fam, &co).unwrap();
        assert!(sup_diff(&back, &t.u1) <= 1e-9);
        let again = extract_coefficients(&ReachTarget::new(back, ENTIRE_RADIUS).unwrap(), 8).unwrap();
        for n in 0..=8 {
            assert!((again.c[n] - co.c[n]).abs() <= 1e-9 * (1.0 + co.c[n].abs()));
            assert!((again.b[n] - co.b[n]).abs() <= 1e-9 * (1.0 + co.b[n].abs()));
        }
        let g = co.growth();
        assert!(g.h < 1.0, "H = {}", g.h);
    }
    let f0 = ReachTarget::new(fam.f[0].clone(), 7.0).unwrap();
    let back = reconstruct_target(fam, &extract_coefficients(&f0, 4).unwrap()).unwrap();
    assert!(sup_diff(&back, &fam.f[0]) <= 1e-10);
    let zero = reconstruct_target(fam, &ReachCoefficients::zeros(3)).unwrap();
    assert!(zero.is_zero());
    assert!(reconstruct_target(fam, &ReachCoefficients::zeros(9)).is_err());
}

#[test]
fn plan_interpolates_terminal_data() {
    let times: Vec<f64> = (0..=200).map(|k| k as f64 / 200.0).collect();
    let last = times.len() - 1;
    let one = ReachCoefficients { c: vec![1.0], b: vec![], n: 0 };
    let p = plan_reach(&one, 0.5, 1.0, &times, 8, 1.0).unwrap();
    assert!((p.y_derivs[0][last] - 1.0).abs() < 1e-15);
    assert!(p.y_derivs[1..].iter().all(|r| r[last] == 0.0));

    let lin = ReachCoefficients { c: vec![0.0, 1.0], b: vec![0.0, 0.0], n: 1 };
    let p = plan_reach(&lin, 0.5, 1.0, &times, 8, 1.0).unwrap();
    assert_eq!(p.y_derivs[0][last], 0.0);
    assert!((p.y_derivs[1][last] - 1.0).abs() < 1e-15);

    for (cf, cg) in combos() {
        let t = ReachTarget::combination(fam(), &cf, &cg).unwrap();
        let co = extract_coefficients(&t, 8).unwrap();
        let p = plan_reach(&co, 0.5, 1.0, &times, 8, 1.0).unwrap();
        for n in 0..=8 {
            assert!((p.y_derivs[n][last] - co.c[n]).abs() <= 1e-12 * (1.0 + co.c[n].abs()));
            assert!((p.z_derivs[n][last] - co.b[n]).abs() <= 1e-12 * (1.0 + co.b[n].abs()));
        }
        for (k, &s) in times.iter().enumerate() {
            if s <= 0.5 {
                assert!(p.y_derivs.iter().chain(&p.z_derivs).all(|r| r[k] == 0.0));
            }
        }
    }
    assert!(matches!(
        plan_reach(&one, 1.0, 1.0, &times, 8, 1.0),
        Err(ReachError::Window { .. })
    ));
}

#[test]
fn unique_continuation_on_truncations() {
    for n in 0..=4 {
        let u = unique_continuation(n).unwrap();
        assert!(u.injective(), "N = {n}: rank {} of {}", u.rank, u.dim);
    }
}

#[test]
fn target_json_round_trip() {
    let t = ReachTarget::combination(fam(), &[0.1], &[0.05]).unwrap();
    let text = serde_json::to_string(&t.to_file()).unwrap();
    let back = ReachTarget::from_json(&text).unwrap();
    assert_eq!(back.u1, t.u1);
    assert_eq!(back.radius, ENTIRE_RADIUS);
    assert!(ReachTarget::from_json("{\"coeffs\": [1.0], \"radius\": 7}").is_err());
}

fn cfg() -> SolverConfig {
    SolverConfig::new(256, 1.0).unwrap()
}

#[test]
fn zero_target_is_reached_exactly() {
    let t = ReachTarget::combination(fam(), &[0.0], &[]).unwrap();
    let r = run_reach_experiment(&t, 0.5, 1.0, 8, 1.0, &cfg()).unwrap().report;
    assert_eq!((r.target_error_sup, r.target_error_l2), (0.0, 0.0));
}

#[test]
fn membership_failure_is_refused() {
    let t = ReachTarget::new(PowerSeries::monomial(0.0, 1, 1.0, 60), 7.0).unwrap();
    assert!(matches!(
        run_reach_experiment(&t, 0.5, 1.0, 8, 1.0, &cfg()),
        Err(ReachError::Membership(_))
    ));
}

#[test]
fn reach_end_to_end() {
    let t = ReachTarget::combination(fam(), &[0.1], &[0.05]).unwrap();
    let r = run_reach_experiment(&t, 0.5, 1.0, 8, 1.0, &cfg()).unwrap().report;
    assert!(r.target_error_l2 <= 1e-2 * r.target_l2);

    let t = ReachTarget::combination(fam(), &[0.0, 0.1], &[]).unwrap();
    let r = run_reach_experiment(&t, 0.5, 1.0, 8, 1.0, &cfg()).unwrap().report;
    assert!(r.target_error_l2 <= 2e-2 * r.target_l2);
    let json = serde_json::to_value(&r).unwrap();
    for key in ["target_error_sup", "target_error_l2", "tail_bound"] {
        assert!(json[key].is_number());
    }
}
