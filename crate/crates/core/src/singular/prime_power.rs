//! Gauss sums at prime-power moduli, memoized by fourth-power class.
//!
//! `S_k(q, a u^4) = S_k(q, a)` for every unit `u`, so both `S_2(q, .)` and
//! `S_4(q, .)` are constant on the cosets of the fourth powers in `(Z/q)^*`.
//! For odd `p` those cosets are indexed by the discrete logarithm modulo
//! `gcd(4, p-1)`; for `q = 2^h` by `a mod min(q, 16)`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;

use crate::arith::factor::factorize;
use crate::arith::gauss::{direct_sum, s2_odd, s2_two_power};
use crate::arith::modular::{gcd, mul_mod, pow_mod};

pub(crate) const NON_UNIT: u8 = u8::MAX;

/// Primitive root modulo the odd prime power `p^h`.
pub(crate) fn primitive_root(p: u64, h: u32) -> u64 {
    let order_factors: Vec<u64> = factorize(p - 1).factors().iter().map(|&(r, _)| r).collect();
    let g = (2..p)
        .find(|&g| order_factors.iter().all(|&r| pow_mod(g, (p - 1) / r, p) != 1))
        .unwrap_or(1);
    if h >= 2 && pow_mod(g, p - 1, p * p) == 1 {
        g + p
    } else {
        g
    }
}

#[derive(Debug)]
pub(crate) struct PrimePowerGauss {
    pub q: u64,
    /// Class index for every residue, [`NON_UNIT`] for non-units.
    pub class_of: Vec<u8>,
    pub s2: Vec<Complex64>,
    pub s4: Vec<Complex64>,
}

impl PrimePowerGauss {
    pub fn new(p: u64, h: u32) -> Self {
        assert!(h >= 1);
        let q = p.pow(h);
        let mut class_of = vec![NON_UNIT; q as usize];
        let reps: Vec<u64>;
        if p == 2 {
            let m = q.min(16);
            for a in (1..q).step_by(2) {
                class_of[a as usize] = ((a % m) / 2) as u8;
            }
            reps = (0..m / 2).map(|c| 2 * c + 1).collect();
        } else {
            let d = gcd(4, p - 1);
            let g = primitive_root(p, h);
            let phi = q / p * (p - 1);
            let mut x = 1u64;
            for i in 0..phi {
                class_of[x as usize] = (i % d) as u8;
                x = mul_mod(x, g, q);
            }
            reps = (0..d).map(|c| pow_mod(g, c, q)).collect();
        }
        let s2 = reps
            .iter()
            .map(|&a| if p == 2 { s2_two_power(h, a) } else { s2_odd(q, a) })
            .collect();
        let s4 = reps.iter().map(|&a| direct_sum(4, q, a)).collect();
        Self { q, class_of, s2, s4 }
    }

    #[inline]
    pub fn class(&self, a: u64) -> u8 {
        self.class_of[(a % self.q) as usize]
    }

    /// `S_2(q,a)^2 S_4(q,a)^s` per class.
    pub fn weights(&self, s: u32) -> Vec<Complex64> {
        self.s2
            .iter()
            .zip(&self.s4)
            .map(|(a, b)| a * a * b.powu(s))
            .collect()
    }
}

/// Thread-safe memo of [`PrimePowerGauss`] tables keyed by `q = p^h`.
#[derive(Debug, Default)]
pub struct GaussCache {
    tables: Mutex<HashMap<u64, Arc<PrimePowerGauss>>>,
}

impl GaussCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub(crate) fn get(&self, p: u64, h: u32) -> Arc<PrimePowerGauss> {
        let q = p.pow(h);
        if let Some(t) = self.tables.lock().expect("cache poisoned").get(&q) {
            return Arc::clone(t);
        }
        // Built outside the lock; a racing duplicate build yields the same table.
        let table = Arc::new(PrimePowerGauss::new(p, h));
        let mut map = self.tables.lock().expect("cache poisoned");
        Arc::clone(map.entry(q).or_insert(table))
    }

    pub fn len(&self) -> usize {
        self.tables.lock().expect("cache poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Process-wide cache used by the free functions.
pub fn global_cache() -> &'static GaussCache {
    static CACHE: OnceLock<GaussCache> = OnceLock::new();
    CACHE.get_or_init(GaussCache::new)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::gauss_sum_direct;

    #[test]
    fn classes_respect_gauss_sums() {
        for (p, h) in [(2, 1), (2, 2), (2, 3), (2, 4), (2, 6), (3, 1), (3, 3), (5, 2), (7, 2), (13, 2), (17, 1), (11, 2)] {
            let t = PrimePowerGauss::new(p, h);
            for a in 1..t.q {
                let c = t.class(a);
                if a % p == 0 {
                    assert_eq!(c, NON_UNIT);
                    continue;
                }
                for (k, table) in [(2, &t.s2), (4, &t.s4)] {
                    let d = gauss_sum_direct(k, t.q, a as i64).unwrap().value;
                    let m = table[c as usize];
                    assert!((d - m).norm() < 1e-9, "k={k} q={} a={a}", t.q);
                }
            }
        }
    }

    #[test]
    fn primitive_roots_generate() {
        for (p, h) in [(3, 4), (5, 3), (7, 2), (29, 2), (40487, 2)] {
            let q = (p as u64).pow(h);
            let g = primitive_root(p, h);
            let phi = q / p * (p - 1);
            for r in factorize(phi).factors().iter().map(|f| f.0) {
                assert_ne!(pow_mod(g, phi / r, q), 1, "p={p} h={h}");
            }
        }
    }
}
