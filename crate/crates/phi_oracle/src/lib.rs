//! Derivatives of the Gevrey step `1/(1 + exp(K((1−r)^{−σ} − r^{−σ})))` by
//! 8th-order central differences, evaluated in 128-bit floating point with
//! exact rational stencil weights. Test support only.

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

const PREC: usize = 128;
const HALF: i64 = 6;
const RM: RoundingMode = RoundingMode::ToEven;

/// Weights `w` with `Σ w_i f(i h) / h^m ≈ f^{(m)}(0)` on integer offsets.
pub fn weights(offsets: &[i64], m: usize) -> Vec<BigRational> {
    let n = offsets.len();
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> = offsets
                .iter()
                .map(|&x| BigRational::from_integer(BigInt::from(x).pow(i as u32)))
                .collect();
            let rhs = if i == m {
                BigRational::from_integer((1..=m as i64).product::<i64>().into())
            } else {
                BigRational::zero()
            };
            row.push(rhs);
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero()).unwrap();
        a.swap(col, piv);
        let p = a[col][col].clone();
        for v in a[col].iter_mut() {
            *v = &*v / &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..=n {
                    let sub = &f * &a[col][c];
                    a[r][c] = &a[r][c] - sub;
                }
            }
        }
    }
    a.into_iter().map(|row| row[n].clone()).collect()
}

pub struct Oracle {
    cc: Consts,
    sigma: f64,
    k: f64,
}

impl Oracle {
    /// Step with exponent `σ = 1/(s − 1)` and sharpness `K`.
    pub fn new(s: f64, k: f64) -> Self {
        Oracle {
            cc: Consts::new().expect("astro-float constants cache"),
            sigma: 1.0 / (s - 1.0),
            k,
        }
    }

    fn big(&self, x: f64) -> BigFloat {
        BigFloat::from_f64(x, PREC)
    }

    fn rational(&mut self, q: &BigRational) -> BigFloat {
        let n = BigFloat::parse(&q.numer().to_string(), Radix::Dec, PREC, RM, &mut self.cc);
        let d = BigFloat::parse(&q.denom().to_string(), Radix::Dec, PREC, RM, &mut self.cc);
        n.div(&d, PREC, RM)
    }

    fn neg_power(&mut self, x: &BigFloat, ms: &BigFloat) -> BigFloat {
        x.ln(PREC, RM, &mut self.cc).mul(ms, PREC, RM).exp(PREC, RM, &mut self.cc)
    }

    fn phi(&mut self, r: &BigFloat) -> BigFloat {
        let one = self.big(1.0);
        let ms = self.big(-self.sigma);
        // x^{−σ} as exp(−σ ln x); `pow` stalls on some exact powers
        let a = self.neg_power(&one.sub(r, PREC, RM), &ms);
        let b = self.neg_power(r, &ms);
        let w = self.big(self.k).mul(&a.sub(&b, PREC, RM), PREC, RM);
        let e = w.exp(PREC, RM, &mut self.cc);
        one.div(&one.add(&e, PREC, RM), PREC, RM)
    }

    fn to_f64(&mut self, x: &BigFloat) -> f64 {
        x.format(Radix::Dec, RM, &mut self.cc)
            .unwrap()
            .parse()
            .unwrap()
    }

    /// `φ^{(m)}(r)`, `m = 0..=m_max ≤ 6`, with step `h`.
    pub fn derivatives(&mut self, r: f64, m_max: usize, h: f64) -> Vec<f64> {
        let hb = self.big(h);
        let rb = self.big(r);
        let f: Vec<BigFloat> = (-HALF..=HALF)
            .map(|o| {
                let x = rb.add(&self.big(o as f64).mul(&hb, PREC, RM), PREC, RM);
                self.phi(&x)
            })
            .collect();
        (0..=m_max)
            .map(|m| {
                if m == 0 {
                    let v = f[HALF as usize].clone();
                    return self.to_f64(&v);
                }
                let half = (2 * ((m + 1) / 2) - 1 + 8) as i64 / 2;
                let offsets: Vec<i64> = (-half..=half).collect();
                let w = weights(&offsets, m);
                let mut acc = self.big(0.0);
                for (o, wi) in offsets.iter().zip(&w) {
                    if wi.is_zero() {
                        continue;
                    }
                    let term = self.rational(wi).mul(&f[(o + HALF) as usize], PREC, RM);
                    acc = acc.add(&term, PREC, RM);
                }
                let v = acc.div(&hb.powi(m, PREC, RM), PREC, RM);
                self.to_f64(&v)
            })
            .collect()
    }
}
