//! Exact integer convolution by number-theoretic transforms over two
//! 62-bit primes, recombined with the Chinese remainder theorem.

use crate::error::{Error, Result};

/// `p = c * 2^k + 1` together with a primitive root.
#[derive(Clone, Copy, Debug)]
struct NttPrime {
    p: u64,
    two_adicity: u32,
    generator: u64,
}

const PRIMES: [NttPrime; 2] = [
    NttPrime { p: 4_611_685_941_117_976_577, two_adicity: 33, generator: 3 },
    NttPrime { p: 4_611_685_692_009_873_409, two_adicity: 34, generator: 19 },
];

/// Montgomery form arithmetic modulo an odd `p < 2^62`.
#[derive(Clone, Copy, Debug)]
struct Montgomery {
    p: u64,
    /// `-p^{-1} mod 2^64`
    neg_inv: u64,
    /// `2^128 mod p`
    r2: u64,
}

impl Montgomery {
    fn new(p: u64) -> Self {
        let mut inv = 1u64;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        let r = ((1u128 << 64) % p as u128) as u64;
        let r2 = ((r as u128 * r as u128) % p as u128) as u64;
        Self { p, neg_inv: inv.wrapping_neg(), r2 }
    }

    #[inline(always)]
    fn reduce(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.neg_inv);
        let u = ((t + m as u128 * self.p as u128) >> 64) as u64;
        if u >= self.p {
            u - self.p
        } else {
            u
        }
    }

    #[inline(always)]
    fn mul(&self, a: u64, b: u64) -> u64 {
        self.reduce(a as u128 * b as u128)
    }

    fn to_mont(&self, a: u64) -> u64 {
        self.mul(a % self.p, self.r2)
    }

    fn from_mont(&self, a: u64) -> u64 {
        self.reduce(a as u128)
    }

    fn pow(&self, base: u64, mut e: u64) -> u64 {
        let mut acc = self.to_mont(1);
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }

    #[inline(always)]
    fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline(always)]
    fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
}

fn transform(data: &mut [u64], mont: &Montgomery, prime: NttPrime, inverse: bool) {
    let n = data.len();
    debug_assert!(n.is_power_of_two());
    let mut j = 0;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            data.swap(i, j);
        }
    }
    let g = mont.to_mont(prime.generator);
    let mut len = 2;
    while len <= n {
        let mut w_len = mont.pow(g, (prime.p - 1) / len as u64);
        if inverse {
            w_len = mont.pow(w_len, prime.p - 2);
        }
        let half = len / 2;
        let mut twiddles = Vec::with_capacity(half);
        let mut w = mont.to_mont(1);
        for _ in 0..half {
            twiddles.push(w);
            w = mont.mul(w, w_len);
        }
        for chunk in data.chunks_mut(len) {
            let (lo, hi) = chunk.split_at_mut(half);
            for ((x, y), &tw) in lo.iter_mut().zip(hi.iter_mut()).zip(&twiddles) {
                let u = *x;
                let v = mont.mul(*y, tw);
                *x = mont.add(u, v);
                *y = mont.sub(u, v);
            }
        }
        len <<= 1;
    }
    if inverse {
        let n_inv = mont.pow(mont.to_mont(n as u64), prime.p - 2);
        for x in data.iter_mut() {
            *x = mont.mul(*x, n_inv);
        }
    }
}

fn convolve_mod(a: &[u64], b: &[u64], size: usize, prime: NttPrime) -> Vec<u64> {
    let mont = Montgomery::new(prime.p);
    let load = |src: &[u64]| {
        let mut v = vec![0u64; size];
        for (dst, &x) in v.iter_mut().zip(src) {
            *dst = mont.to_mont(x);
        }
        v
    };
    let mut fa = load(a);
    let mut fb = load(b);
    transform(&mut fa, &mont, prime, false);
    transform(&mut fb, &mont, prime, false);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x = mont.mul(*x, *y);
    }
    drop(fb);
    transform(&mut fa, &mont, prime, true);
    for x in fa.iter_mut() {
        *x = mont.from_mont(*x);
    }
    fa
}

/// Linear convolution of two nonnegative integer sequences, exact as long as
/// every output fits in 64 bits (checked through the two-prime CRT, which is
/// exact up to about 2^123).
pub fn convolve_exact(a: &[u64], b: &[u64]) -> Result<Vec<u64>> {
    if a.is_empty() || b.is_empty() {
        return Ok(Vec::new());
    }
    let out_len = a.len() + b.len() - 1;
    let size = out_len.next_power_of_two();
    if size.trailing_zeros() > PRIMES[0].two_adicity.min(PRIMES[1].two_adicity) {
        return Err(Error::Capacity(format!("transform length {size} exceeds the supported 2-adicity")));
    }
    let [p1, p2] = PRIMES;
    let r1 = convolve_mod(a, b, size, p1);
    let r2 = convolve_mod(a, b, size, p2);
    let inv_p1_mod_p2 = crate::arith::modular::inv_mod(p1.p % p2.p, p2.p).expect("distinct primes");
    let mut out = Vec::with_capacity(out_len);
    for i in 0..out_len {
        let (x1, x2) = (r1[i], r2[i]);
        let diff = (x2 as u128 + p2.p as u128 - (x1 % p2.p) as u128) % p2.p as u128;
        let t = (diff * inv_p1_mod_p2 as u128) % p2.p as u128;
        let value = x1 as u128 + p1.p as u128 * t;
        let value = u64::try_from(value)
            .map_err(|_| Error::Capacity(format!("convolution coefficient {i} exceeds 64 bits")))?;
        out.push(value);
    }
    Ok(out)
}
