//! Word-sized modular arithmetic and integer helpers.

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Reduces a signed residue into `0..m`.
#[inline]
pub fn rem_euclid(a: i64, m: u64) -> u64 {
    (a as i128).rem_euclid(m as i128) as u64
}

/// Inverse of `a` modulo `m` by the extended Euclidean algorithm.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// Floor of the square root.
pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u64;
    while x.checked_mul(x).is_none_or(|sq| sq > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).is_some_and(|sq| sq <= n) {
        x += 1;
    }
    x
}

/// Floor of the fourth root.
pub fn iroot4(n: u64) -> u64 {
    isqrt(isqrt(n))
}

/// Floor of `x^(1/k)` for a real `x >= 0`, robust against rounding of the
/// floating root when `x` is an exact integer power.
pub fn floor_root(x: f64, k: u32) -> u64 {
    if x < 1.0 {
        return 0;
    }
    let mut r = x.powf(1.0 / k as f64).floor() as u64;
    let pw = |v: u64| (v as f64).powi(k as i32);
    while r > 0 && pw(r) > x {
        r -= 1;
    }
    while pw(r + 1) <= x {
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_gcd() {
        assert_eq!(inv_mod(3, 7), Some(5));
        assert_eq!(inv_mod(6, 9), None);
        assert_eq!(inv_mod(5, 1), Some(0));
        assert_eq!(gcd(84, 36), 12);
        assert_eq!(pow_mod(3, 200, 1_000_000_007), 3u64.pow(0) * pow_mod(9, 100, 1_000_000_007));
    }

    #[test]
    fn integer_roots() {
        for n in 0..5000u64 {
            let r = isqrt(n);
            assert!(r * r <= n && (r + 1) * (r + 1) > n);
            let r4 = iroot4(n);
            assert!(r4.pow(4) <= n && (r4 + 1).pow(4) > n);
        }
        assert_eq!(isqrt(u64::MAX), 4_294_967_295);
        assert_eq!(floor_root(65536.0, 4), 16);
        assert_eq!(floor_root(65535.0, 4), 15);
        assert_eq!(floor_root(1e4, 2), 100);
    }
}
