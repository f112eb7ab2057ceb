//! Complete exponential sums `S_k(q,a) = sum_{r=1}^{q} e(a r^k / q)`.

use std::f64::consts::{FRAC_1_SQRT_2, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::factor::factorize;
use super::jacobi::jacobi;
use super::modular::{gcd, inv_mod, mul_mod, rem_euclid};
use crate::error::{Error, Result};

/// `e(m/q) = exp(2 pi i m / q)` with the numerator reduced exactly first.
#[inline]
pub fn e_frac(m: i64, q: u64) -> Complex64 {
    let mut r = rem_euclid(m, q) as i64;
    if 2 * r > q as i64 {
        r -= q as i64;
    }
    let (s, c) = (TAU * r as f64 / q as f64).sin_cos();
    Complex64::new(c, s)
}

/// `e(x) = exp(2 pi i x)` for a phase already reduced near `[0,1)`.
#[inline]
pub fn e_real(x: f64) -> Complex64 {
    let r = x - x.round();
    let (s, c) = (TAU * r).sin_cos();
    Complex64::new(c, s)
}

/// A fraction `a/q` in lowest terms with `1 <= a <= q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ReducedFraction {
    a: u64,
    q: u64,
}

impl ReducedFraction {
    pub fn new(a: u64, q: u64) -> Result<Self> {
        if q == 0 || a == 0 || a > q || gcd(a, q) != 1 {
            return Err(Error::invalid(format!("{a}/{q} is not a reduced fraction in (0,1]")));
        }
        Ok(Self { a, q })
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn value(&self) -> f64 {
        self.a as f64 / self.q as f64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GaussMethod {
    Direct,
    ClosedForm,
}

/// A value of `S_k(q,a)` tagged with how it was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussSumValue {
    pub k: u32,
    pub q: u64,
    pub a: i64,
    pub value: Complex64,
    pub method: GaussMethod,
}

fn check_args(k: u32, q: u64, a: i64) -> Result<()> {
    if k != 2 && k != 4 {
        return Err(Error::invalid(format!("Gauss sums are supported for k in {{2,4}}, got {k}")));
    }
    if q == 0 {
        return Err(Error::invalid("modulus q must be positive"));
    }
    if gcd(rem_euclid(a, q), q) != 1 {
        return Err(Error::invalid(format!("a = {a} is not coprime to q = {q}")));
    }
    Ok(())
}

/// Compensated sum of `e(a r^k / q)` over a full residue system.
pub(crate) fn direct_sum(k: u32, q: u64, a: u64) -> Complex64 {
    let (mut re, mut im) = (0.0f64, 0.0f64);
    let (mut cre, mut cim) = (0.0f64, 0.0f64);
    let add = |sum: &mut f64, comp: &mut f64, x: f64| {
        let t = *sum + x;
        if sum.abs() >= x.abs() {
            *comp += (*sum - t) + x;
        } else {
            *comp += (x - t) + *sum;
        }
        *sum = t;
    };
    for r in 1..=q {
        let r2 = mul_mod(r, r, q);
        let rk = if k == 4 { mul_mod(r2, r2, q) } else { r2 };
        let z = e_frac(mul_mod(a, rk, q) as i64, q);
        add(&mut re, &mut cre, z.re);
        add(&mut im, &mut cim, z.im);
    }
    Complex64::new(re + cre, im + cim)
}

/// `S_k(q,a)` by summing all `q` terms. Cost is `O(q)`.
pub fn gauss_sum_direct(k: u32, q: u64, a: i64) -> Result<GaussSumValue> {
    check_args(k, q, a)?;
    let value = direct_sum(k, q, rem_euclid(a, q));
    Ok(GaussSumValue { k, q, a, value, method: GaussMethod::Direct })
}

/// `e(a/8)` for odd `a`, from a table.
fn eighth_root(a: u64) -> Complex64 {
    let h = FRAC_1_SQRT_2;
    match a % 8 {
        1 => Complex64::new(h, h),
        3 => Complex64::new(-h, h),
        5 => Complex64::new(-h, -h),
        7 => Complex64::new(h, -h),
        _ => unreachable!("eighth_root needs an odd argument"),
    }
}

/// `S_2(2^m, a)` for odd `a`.
pub(crate) fn s2_two_power(m: u32, a: u64) -> Complex64 {
    debug_assert!(a % 2 == 1 || m == 0);
    match m {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 0.0),
        _ if m.is_multiple_of(2) => {
            let i_pow_a = if a % 4 == 1 { Complex64::new(0.0, 1.0) } else { Complex64::new(0.0, -1.0) };
            (Complex64::new(1.0, 0.0) + i_pow_a) * 2f64.powi(m as i32 / 2)
        }
        _ => eighth_root(a) * 2f64.powi((m as i32 + 1) / 2),
    }
}

/// `S_2(q, a)` for odd `q` and `a` coprime to `q`.
pub(crate) fn s2_odd(q: u64, a: u64) -> Complex64 {
    if q == 1 {
        return Complex64::new(1.0, 0.0);
    }
    let sym = jacobi(a as i64, q).expect("odd modulus") as f64;
    let root = (q as f64).sqrt();
    if q % 4 == 1 {
        Complex64::new(sym * root, 0.0)
    } else {
        Complex64::new(0.0, sym * root)
    }
}

/// `S_2(q,a)` without any summation: split `q = 2^m q'`, invert the
/// Chinese-remainder decomposition `a = a_1 q' + a_2 2^m`, then evaluate the
/// odd part through the Jacobi symbol and the 2-part from its explicit
/// formula.
pub fn gauss_sum_s2_closed(q: u64, a: i64) -> Result<GaussSumValue> {
    check_args(2, q, a)?;
    let (m, odd) = factorize(q).split_two();
    let two = 1u64 << m;
    let a = rem_euclid(a, q);
    let value = if m == 0 {
        s2_odd(q, a)
    } else if odd == 1 {
        s2_two_power(m, a)
    } else {
        // residues normalized into 1..=q_i
        let a1 = mul_mod(a % two, inv_mod(odd % two, two).expect("coprime"), two);
        let a2 = mul_mod(a % odd, inv_mod(two % odd, odd).expect("coprime"), odd);
        let a1 = if a1 == 0 { two } else { a1 };
        let a2 = if a2 == 0 { odd } else { a2 };
        s2_two_power(m, a1) * s2_odd(odd, a2)
    };
    Ok(GaussSumValue { k: 2, q, a: a as i64, value, method: GaussMethod::ClosedForm })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a.re - b.re).abs() < tol && (a.im - b.im).abs() < tol
    }

    #[test]
    fn direct_spot_values() {
        assert!(close(gauss_sum_direct(2, 1, 1).unwrap().value, Complex64::new(1.0, 0.0), 1e-15));
        let s = gauss_sum_direct(2, 5, 1).unwrap().value;
        assert!(close(s, Complex64::new(5f64.sqrt(), 0.0), 1e-12));
        assert!(close(gauss_sum_direct(4, 2, 1).unwrap().value, Complex64::new(0.0, 0.0), 1e-15));
        assert!(gauss_sum_direct(2, 6, 3).is_err());
        assert!(gauss_sum_direct(3, 7, 1).is_err());
    }

    #[test]
    fn closed_form_spot_values() {
        let s = gauss_sum_s2_closed(3, 1).unwrap().value;
        assert!(close(s, Complex64::new(0.0, 3f64.sqrt()), 1e-12));
        assert!(close(gauss_sum_s2_closed(2, 1).unwrap().value, Complex64::new(0.0, 0.0), 1e-15));
        assert!(close(gauss_sum_s2_closed(4, 3).unwrap().value, Complex64::new(2.0, -2.0), 1e-12));
        assert!(close(gauss_sum_direct(2, 4, 3).unwrap().value, Complex64::new(2.0, -2.0), 1e-12));
        assert_eq!(gauss_sum_s2_closed(4, 3).unwrap().method, GaussMethod::ClosedForm);
    }

    #[test]
    fn closed_matches_direct_with_negative_and_large_a() {
        for q in 1..=200u64 {
            for a in [-7i64, -1, 1, 5, 1_000_003] {
                if gcd(rem_euclid(a, q), q) != 1 {
                    continue;
                }
                let c = gauss_sum_s2_closed(q, a).unwrap().value;
                let d = gauss_sum_direct(2, q, a).unwrap().value;
                assert!(close(c, d, 1e-9), "q={q} a={a}: {c} vs {d}");
            }
        }
    }

    #[test]
    fn odd_moduli_have_root_magnitude() {
        for q in (1..=999u64).step_by(2) {
            for a in [1i64, 2, 7, 11] {
                if gcd(a as u64, q) != 1 {
                    continue;
                }
                let d = gauss_sum_direct(2, q, a).unwrap().value;
                assert!((d.norm() - (q as f64).sqrt()).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn s2_magnitudes_take_three_values() {
        for q in 1..=300u64 {
            let v = gauss_sum_s2_closed(q, 1).unwrap().value.norm();
            let qs = q as f64;
            assert!([0.0, qs.sqrt(), (2.0 * qs).sqrt()].iter().any(|m| (v - m).abs() < 1e-9));
            assert!(v <= qs + 1e-12);
        }
    }

    #[test]
    fn reduced_fraction_validation() {
        assert!(ReducedFraction::new(2, 4).is_err());
        assert!(ReducedFraction::new(0, 3).is_err());
        assert!(ReducedFraction::new(4, 3).is_err());
        assert_eq!(ReducedFraction::new(1, 1).unwrap().value(), 1.0);
    }
}
