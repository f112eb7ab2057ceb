use num_complex::Complex64;

use crate::arith::gauss::{e_frac, e_real};
use crate::arith::modular::{floor_root, mul_mod};
use crate::arith::ReducedFraction;

/// `P_k = X^(1/k)` as a real number.
pub fn p_k(k: u32, x: f64) -> f64 {
    x.powf(1.0 / k as f64)
}

/// Largest integer `x` with `x^k <= X`.
pub fn p_k_floor(k: u32, x: f64) -> u64 {
    floor_root(x, k)
}

/// `t * m mod 1` for an integer `m < 2^53`, using the error-free product
/// `t*m = hi + lo`.
#[inline]
pub(crate) fn phase_times(t: f64, m: f64) -> f64 {
    let hi = t * m;
    let lo = t.mul_add(m, -hi);
    (hi - hi.floor()) + lo
}

/// Neumaier-compensated complex accumulator.
#[derive(Default)]
pub(crate) struct Accumulator {
    sum: Complex64,
    comp: Complex64,
}

impl Accumulator {
    #[inline]
    pub fn add(&mut self, z: Complex64) {
        let two_sum = |s: f64, x: f64, c: &mut f64| {
            let t = s + x;
            *c += if s.abs() >= x.abs() { (s - t) + x } else { (x - t) + s };
            t
        };
        self.sum.re = two_sum(self.sum.re, z.re, &mut self.comp.re);
        self.sum.im = two_sum(self.sum.im, z.im, &mut self.comp.im);
    }

    pub fn value(&self) -> Complex64 {
        self.sum + self.comp
    }
}

fn power(x: u64, k: u32) -> u64 {
    let x2 = x * x;
    if k == 4 {
        x2 * x2
    } else {
        x2
    }
}

/// `f_k(alpha) = sum_{1 <= x <= P_k} e(alpha x^k)`.
///
/// `x^k <= X` is exact in a double for `X < 2^53`, and the phase is reduced
/// mod 1 through an error-free product, so no phase accuracy is lost to the
/// size of `alpha x^k`.
pub fn weyl_sum(k: u32, x: f64, alpha: f64) -> Complex64 {
    let mut acc = Accumulator::default();
    for v in 1..=p_k_floor(k, x) {
        acc.add(e_real(phase_times(alpha, power(v, k) as f64)));
    }
    acc.value()
}

/// `f_k(a/q + beta)`, with the rational part of each phase reduced exactly
/// as `a x^k mod q`.
pub fn weyl_sum_near(k: u32, x: f64, frac: ReducedFraction, beta: f64) -> Complex64 {
    let q = frac.q();
    let mut acc = Accumulator::default();
    for v in 1..=p_k_floor(k, x) {
        let xk = power(v, k);
        let num = mul_mod(frac.a(), xk % q, q);
        let z = e_frac(num as i64, q) * e_real(phase_times(beta, xk as f64));
        acc.add(z);
    }
    acc.value()
}
