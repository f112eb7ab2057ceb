//! The terms `A(q,n) = sum_{(a,q)=1} q^(-2-s) S_2(q,a)^2 S_4(q,a)^s e(-na/q)`.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::FftPlanner;

use super::prime_power::{global_cache, GaussCache, PrimePowerGauss, NON_UNIT};
use crate::arith::factor::factorize;
use crate::arith::gauss::e_frac;
use crate::arith::modular::{inv_mod, mul_mod};
use crate::error::{Error, Result};

/// Largest imaginary part tolerated in an assembled `A(q,n)`.
pub const IMAG_TOLERANCE: f64 = 1e-8;

/// Phasors `e(-n a / q)` for `a = 0, 1, 2, ...` by rotation, re-anchored on an
/// exactly reduced angle every 256 steps.
struct Rotor {
    n_mod: u64,
    q: u64,
    step: Complex64,
    current: Complex64,
    a: u64,
}

impl Rotor {
    fn new(n: u64, q: u64) -> Self {
        let n_mod = n % q;
        Self { n_mod, q, step: e_frac(-(n_mod as i64), q), current: Complex64::new(1.0, 0.0), a: 0 }
    }

    #[inline]
    fn next(&mut self) -> Complex64 {
        let z = self.current;
        self.a += 1;
        self.current = if self.a.is_multiple_of(256) {
            e_frac(-(mul_mod(self.n_mod, self.a, self.q) as i64), self.q)
        } else {
            z * self.step
        };
        z
    }
}

fn finish(sum: Complex64, q: u64, s: u32, n: u64) -> Result<f64> {
    let value = sum * (q as f64).powi(-2 - s as i32);
    if value.im.abs() > IMAG_TOLERANCE {
        return Err(Error::Integrity(format!(
            "A(q={q}, n={n}) has imaginary part {:e} (s = {s})",
            value.im
        )));
    }
    Ok(value.re)
}

/// `A(p^h, n)` from the class-memoized prime-power table.
pub(crate) fn a_term_prime_power(table: &PrimePowerGauss, s: u32, n: u64) -> Result<f64> {
    let w = table.weights(s);
    let mut per_class = vec![Complex64::new(0.0, 0.0); w.len()];
    let mut rotor = Rotor::new(n, table.q);
    for &c in &table.class_of {
        let z = rotor.next();
        if c != NON_UNIT {
            per_class[c as usize] += z;
        }
    }
    let sum = w.iter().zip(&per_class).map(|(w, t)| w * t).sum();
    finish(sum, table.q, s, n)
}

/// `S_k(p^h, b)` from `S_k(p, b)` for odd `p`: `p^(h-1)` when `2 <= h <= k`,
/// and `p^(k-1) S_k(p^(h-k), b)` beyond.
fn lift_odd(k: u32, h: u32, p: f64, base: Complex64) -> Complex64 {
    match h {
        1 => base,
        h if h <= k => Complex64::new(p.powi(h as i32 - 1), 0.0),
        h => lift_odd(k, h - k, p, base) * p.powi(k as i32 - 1),
    }
}

/// `A(p^h, n)` for odd `p` in `O(p)` work. The Gauss sums depend on `a` only
/// through `a mod p`, and summing `e(-na/p^h)` over `a = b mod p` leaves
/// `p^(h-1) e(-nb/p^h)` when `p^(h-1) | n` and zero otherwise.
pub(crate) fn a_term_odd_lifted(s: u32, n: u64, p: u64, h: u32) -> Result<f64> {
    debug_assert!(p % 2 == 1 && h >= 1);
    let Some(step) = p.checked_pow(h - 1) else {
        return Ok(0.0);
    };
    if !n.is_multiple_of(step) {
        return Ok(0.0);
    }
    let m = (n / step) % p;
    let base = global_cache().get(p, 1);
    let pf = p as f64;
    let w: Vec<Complex64> = base
        .s2
        .iter()
        .zip(&base.s4)
        .map(|(&s2, &s4)| lift_odd(2, h, pf, s2).powu(2) * lift_odd(4, h, pf, s4).powu(s))
        .collect();
    let mut sum = Complex64::new(0.0, 0.0);
    let mut rotor = Rotor::new(m, p);
    for &c in &base.class_of {
        let z = rotor.next();
        if c != NON_UNIT {
            sum += w[c as usize] * z;
        }
    }
    let value = sum * pf.powi(h as i32 - 1 - h as i32 * (2 + s as i32));
    if value.im.abs() > IMAG_TOLERANCE {
        return Err(Error::Integrity(format!("A({p}^{h}, n={n}) has imaginary part {:e}", value.im)));
    }
    Ok(value.re)
}

/// `A(q,n)` by summing over every `a` coprime to `q`. `S_2` comes from the
/// closed form and `S_4` from memoized direct sums, both combined across the
/// prime-power components of `q` through the Chinese remainder theorem.
pub fn a_term_with(cache: &GaussCache, s: u32, n: u64, q: u64) -> Result<f64> {
    crate::check_s(s)?;
    if q == 0 {
        return Err(Error::invalid("q must be positive"));
    }
    let f = factorize(q);
    if f.factors().len() <= 1 {
        if q == 1 {
            return Ok(1.0);
        }
        let (p, h) = f.factors()[0];
        return a_term_prime_power(&cache.get(p, h), s, n);
    }
    struct Part {
        table: Arc<PrimePowerGauss>,
        cofactor_inv: u64,
    }
    let parts: Vec<Part> = f
        .factors()
        .iter()
        .map(|&(p, h)| {
            let qi = p.pow(h);
            Part { table: cache.get(p, h), cofactor_inv: inv_mod((q / qi) % qi, qi).expect("coprime parts") }
        })
        .collect();
    let mut sum = Complex64::new(0.0, 0.0);
    let mut rotor = Rotor::new(n, q);
    for a in 0..q {
        let z = rotor.next();
        let mut s2 = Complex64::new(1.0, 0.0);
        let mut s4 = Complex64::new(1.0, 0.0);
        let mut unit = true;
        for part in &parts {
            let ai = mul_mod(a % part.table.q, part.cofactor_inv, part.table.q);
            let c = part.table.class(ai);
            if c == NON_UNIT {
                unit = false;
                break;
            }
            s2 *= part.table.s2[c as usize];
            s4 *= part.table.s4[c as usize];
        }
        if unit {
            sum += s2 * s2 * s4.powu(s) * z;
        }
    }
    finish(sum, q, s, n)
}

/// `A(q,n)` using the process-wide Gauss-sum cache.
pub fn a_term(s: u32, n: u64, q: u64) -> Result<f64> {
    a_term_with(global_cache(), s, n, q)
}

/// `A(p^h, r)` for every residue `r mod p^h` at once, by one discrete
/// Fourier transform of the class weights.
pub(crate) fn a_term_residues(table: &PrimePowerGauss, s: u32) -> Result<Vec<f64>> {
    let w = table.weights(s);
    let mut buf: Vec<Complex64> = table
        .class_of
        .iter()
        .map(|&c| if c == NON_UNIT { Complex64::new(0.0, 0.0) } else { w[c as usize] })
        .collect();
    FftPlanner::new().plan_fft_forward(buf.len()).process(&mut buf);
    buf.iter().enumerate().map(|(r, &z)| finish(z, table.q, s, r as u64)).collect()
}
