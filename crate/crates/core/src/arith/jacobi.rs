use crate::error::{Error, Result};

/// Jacobi symbol `(a/q)` for odd positive `q`.
///
/// Binary algorithm: strip factors of two with the second supplement and
/// flip with reciprocity.
pub fn jacobi(a: i64, q: u64) -> Result<i8> {
    if q.is_multiple_of(2) {
        return Err(Error::invalid(format!("jacobi symbol needs an odd modulus, got {q}")));
    }
    let mut n = q;
    let mut a = super::modular::rem_euclid(a, n);
    let mut sign = 1i8;
    while a != 0 {
        let tz = a.trailing_zeros();
        a >>= tz;
        if tz % 2 == 1 && (n % 8 == 3 || n % 8 == 5) {
            sign = -sign;
        }
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        (a, n) = (n % a, a);
    }
    Ok(if n == 1 { sign } else { 0 })
}
