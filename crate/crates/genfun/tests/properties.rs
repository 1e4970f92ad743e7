use genfun::{
    build_family, f0_closed, g0_closed, p_power_sides, verify_pk_identity, Variant,
};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use series_core::PowerSeries;

/// `1/n!` rounded to nearest-even from exact integer arithmetic.
fn reciprocal_factorial(n: u32) -> f64 {
    let nf: BigUint = (1..=n).fold(BigUint::from(1u32), |acc, k| acc * k);
    let e = nf.bits() + 52;
    let num = BigUint::from(1u32) << e;
    let mut q = &num / &nf;
    let r = &num % &nf;
    let twice = r << 1;
    if twice > nf || (twice == nf && q.bit(0)) {
        q += 1u32;
    }
    let mantissa: f64 = q.to_string().parse().unwrap();
    mantissa * 2f64.powi(-(e as i32))
}

fn grid(n: usize) -> Vec<f64> {
    (0..n).map(|i| -(i as f64) / (n - 1) as f64).collect()
}

#[test]
fn toy_variant_is_exact_monomials() {
    let j_max = 30;
    let fam = build_family(j_max, 5 * j_max + 10, Variant::Toy).unwrap();
    for j in 0..=j_max {
        for (series, deg) in [(&fam.f[j], 5 * j + 3), (&fam.g[j], 5 * j + 4)] {
            for (k, &c) in series.coeffs().iter().enumerate() {
                if k == deg {
                    assert_eq!(c, reciprocal_factorial(deg as u32), "j={j} degree {deg}");
                } else {
                    assert_eq!(c, 0.0, "j={j} degree {k}");
                }
            }
        }
    }
}

#[test]
fn bounds_hold_up_to_j10() {
    let fam = build_family(10, 80, Variant::Full).unwrap();
    let g = grid(256);
    for j in 0..=10 {
        assert!(fam.bound_violation(j, &g) <= 1e-14, "j = {j}");
    }
}

#[test]
fn cascade_identity_all_pairs() {
    let fam = build_family(5, 80, Variant::Full).unwrap();
    for j in 0..=5 {
        for k in 0..=j {
            let d = verify_pk_identity(&fam, k, j).unwrap();
            assert!(d.f <= 1e-9 && d.g <= 1e-9, "k={k} j={j}: {d:?}");
        }
    }
}

#[test]
fn sign_and_comparison_facts_for_seeds() {
    for x in grid(2001) {
        let f = f0_closed(x);
        let g = g0_closed(x);
        assert!(f <= 0.0 && f >= x, "f0({x}) = {f}");
        assert!(g >= 0.0 && g <= -x, "g0({x}) = {g}");
    }
}

#[test]
fn p_power_random_polynomials() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..200 {
        let degree = rng.gen_range(0..=25);
        let coeffs: Vec<f64> = (0..=degree).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let p = PowerSeries::new(0.0, coeffs).unwrap();
        for n in 1..=3 {
            let s = p_power_sides(&p, n, 512).unwrap();
            assert!(s.lhs <= s.rhs, "n={n}: {} > {}", s.lhs, s.rhs);
        }
    }
}

#[test]
fn dump_schema() {
    let fam = build_family(1, 20, Variant::Full).unwrap();
    let v = serde_json::to_value(fam.dump()).unwrap();
    assert_eq!(v["variant"], "full");
    assert_eq!(v["J_max"], 1);
    assert_eq!(v["order"], 20);
    assert_eq!(v["f"].as_array().unwrap().len(), 2);
    assert_eq!(v["g"][0].as_array().unwrap().len(), 21);
}
