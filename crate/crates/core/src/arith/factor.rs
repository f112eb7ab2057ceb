//! Integer factorization: trial division to 10^6, then Miller–Rabin and
//! Pollard–Brent rho for the remaining cofactor.

use serde::{Deserialize, Serialize};

use super::modular::{gcd, mul_mod, pow_mod};

const TRIAL_LIMIT: u64 = 1_000_000;

/// A positive integer together with its prime factorization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactoredInteger {
    value: u64,
    factors: Vec<(u64, u32)>,
}

impl FactoredInteger {
    pub fn value(&self) -> u64 {
        self.value
    }

    /// `(prime, exponent)` pairs with strictly increasing primes.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    /// The prime-power components `p^e`, in increasing order of `p`.
    pub fn prime_powers(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, e)| p.pow(e))
    }

    /// Exponent of `p` (zero if `p` does not divide the value).
    pub fn valuation(&self, p: u64) -> u32 {
        self.factors
            .iter()
            .find(|&&(q, _)| q == p)
            .map_or(0, |&(_, e)| e)
    }

    /// Exponent of 2 and the odd part.
    pub fn split_two(&self) -> (u32, u64) {
        let m = self.valuation(2);
        (m, self.value >> m)
    }
}

/// Deterministic Miller–Rabin for all 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in SMALL {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let d0 = (n - 1) >> (n - 1).trailing_zeros();
    let r = (n - 1).trailing_zeros();
    'witness: for a in SMALL {
        let mut x = pow_mod(a, d0, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_brent(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut y, m) = (2u64, 128u64);
        let (mut g, mut r, mut q) = (1u64, 1u64, 1u64);
        let (mut x, mut ys) = (0u64, 0u64);
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..m.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += m;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

fn split_large(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_brent(n);
    split_large(d, out);
    split_large(n / d, out);
}

/// Factorizes `n >= 1`. `factorize(1)` has no factors.
pub fn factorize(n: u64) -> FactoredInteger {
    assert!(n >= 1, "factorize requires n >= 1");
    let mut factors = Vec::new();
    let mut rest = n;
    let mut push = |p: u64, rest: &mut u64| {
        let mut e = 0;
        while (*rest).is_multiple_of(p) {
            *rest /= p;
            e += 1;
        }
        if e > 0 {
            factors.push((p, e));
        }
    };
    push(2, &mut rest);
    let mut d = 3u64;
    while d <= TRIAL_LIMIT && d * d <= rest {
        push(d, &mut rest);
        d += 2;
    }
    if rest > 1 {
        if d * d > rest {
            factors.push((rest, 1));
        } else {
            let mut primes = Vec::new();
            split_large(rest, &mut primes);
            primes.sort_unstable();
            for p in primes {
                match factors.last_mut() {
                    Some((q, e)) if *q == p => *e += 1,
                    _ => factors.push((p, 1)),
                }
            }
        }
    }
    FactoredInteger { value: n, factors }
}

/// Smallest-prime-factor sieve on `0..=limit`.
pub fn smallest_prime_factors(limit: usize) -> Vec<u32> {
    let mut spf = vec![0u32; limit + 1];
    for i in 2..=limit {
        if spf[i] == 0 {
            let mut j = i;
            while j <= limit {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    spf
}

/// Primes up to and including `limit`.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    let spf = smallest_prime_factors(limit as usize);
    (2..=limit).filter(|&i| spf[i as usize] as u64 == i).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn check(f: &FactoredInteger) {
        let prod: u64 = f.factors().iter().map(|&(p, e)| p.pow(e)).product();
        assert_eq!(prod, f.value());
        assert!(f.factors().windows(2).all(|w| w[0].0 < w[1].0));
        assert!(f.factors().iter().all(|&(p, _)| is_prime(p)));
    }

    #[test]
    fn small_cases() {
        assert!(factorize(1).factors().is_empty());
        assert_eq!(factorize(12).factors(), &[(2, 2), (3, 1)]);
        assert_eq!(factorize(97).factors(), &[(97, 1)]);
    }

    #[test]
    fn large_inputs_multiply_back() {
        let f = factorize((1u64 << 40) + 1);
        check(&f);
        assert_eq!(f.factors(), &[(257, 1), (4_278_255_361, 1)]);
        // semiprime with both factors above the trial limit
        let f = factorize(1_000_003 * 1_000_033);
        assert_eq!(f.factors(), &[(1_000_003, 1), (1_000_033, 1)]);
        check(&factorize((1u64 << 63) - 25));
        check(&factorize(u64::MAX));
    }

    #[test]
    fn primality_agrees_with_sieve() {
        let spf = smallest_prime_factors(20_000);
        for n in 0..20_000u64 {
            assert_eq!(is_prime(n), n >= 2 && spf[n as usize] as u64 == n, "n = {n}");
        }
        assert!(is_prime(4_611_685_941_117_976_577));
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to bases 2,3,5,7
    }

    proptest! {
        #[test]
        fn factorization_invariants(n in 1u64..u64::MAX) {
            check(&factorize(n));
        }
    }
}
