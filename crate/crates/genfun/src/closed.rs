/// `a = (√5 + 1)/2`.
pub fn a_const() -> f64 {
    (5f64.sqrt() + 1.0) / 2.0
}

/// `b = (√5 − 1)/2`.
pub fn b_const() -> f64 {
    (5f64.sqrt() - 1.0) / 2.0
}

/// `sinh^{(m)}` evaluated from the parity of `m`.
fn sinh_d(m: usize, z: f64) -> f64 {
    if m % 2 == 0 {
        z.sinh()
    } else {
        z.cosh()
    }
}

fn cosh_d(m: usize, z: f64) -> f64 {
    sinh_d(m + 1, z)
}

fn sin_d(m: usize, z: f64) -> f64 {
    match m % 4 {
        0 => z.sin(),
        1 => z.cos(),
        2 => -z.sin(),
        _ => -z.cos(),
    }
}

fn cos_d(m: usize, z: f64) -> f64 {
    sin_d(m + 1, z)
}

pub fn f0_closed(x: f64) -> f64 {
    f0_closed_derivative(x, 0)
}

/// `m`-th derivative of the closed form of `f_0`.
pub fn f0_closed_derivative(x: f64, m: usize) -> f64 {
    let (a, b) = (a_const(), b_const());
    let (ra, rb) = (a.sqrt(), b.sqrt());
    let s = a + b;
    ra.powi(m as i32) * sinh_d(m, ra * x) / (ra * s) - rb.powi(m as i32) * sin_d(m, rb * x) / (rb * s)
}

pub fn g0_closed(x: f64) -> f64 {
    g0_closed_derivative(x, 0)
}

/// `m`-th derivative of the closed form of `g_0`.
pub fn g0_closed_derivative(x: f64, m: usize) -> f64 {
    let (a, b) = (a_const(), b_const());
    let (ra, rb) = (a.sqrt(), b.sqrt());
    let s = a + b;
    let mut v = ra.powi(m as i32) * cosh_d(m, ra * x) / (a * s)
        + rb.powi(m as i32) * cos_d(m, rb * x) / (b * s);
    if m == 0 {
        v -= 1.0 / (a * s) + 1.0 / (b * s);
    }
    v
}
