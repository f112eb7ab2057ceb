//! Local densities `sigma_p(n) = lim p^(-h(s+1)) #{x1^2+x2^2+y1^4+...+ys^4 = n mod p^h}`
//! by exact solution counting.
//!
//! Residue-count functions such as `#{x : x^2 = j}` are invariant under
//! `j -> u^4 j` for units `u`, and so are all their convolutions. Every count
//! is therefore kept as one value per orbit of that action, and each cyclic
//! convolution is evaluated at one representative per orbit.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use super::aterm::{a_term_odd_lifted, a_term_prime_power};
use super::prime_power::{global_cache, primitive_root};
use crate::arith::modular::{gcd, mul_mod};
use crate::error::{Error, Result};

/// Largest modulus `p^h` for which solutions are counted.
pub const MAX_LOCAL_MODULUS: u64 = 1 << 24;
/// Relative agreement between consecutive levels that counts as stable.
pub const STABILITY_TOLERANCE: f64 = 1e-6;
/// Allowed gap between the partial-sum and counting routes.
pub const ROUTE_TOLERANCE: f64 = 1e-9;

/// One Euler factor of the singular series.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalFactor {
    pub p: u64,
    pub sigma_p: f64,
    pub h_used: u32,
    pub stabilized: bool,
}

/// Orbits of `Z/p^h` under multiplication by fourth powers of units.
struct Orbits {
    p: u64,
    q: u64,
    /// Orbit ids start at 1; 0 is the orbit of zero.
    level_offset: Vec<u32>,
    /// Fourth-power class of a unit, looked up by residue mod `p` (odd `p`).
    unit_class: Vec<u8>,
    count: usize,
}

impl Orbits {
    fn new(p: u64, h: u32) -> Self {
        let q = p.pow(h);
        let mut level_offset = Vec::with_capacity(h as usize);
        let mut next = 1u32;
        let mut unit_class = Vec::new();
        if p == 2 {
            for v in 0..h {
                level_offset.push(next);
                next += ((1u64 << (h - v)).min(16) / 2) as u32;
            }
        } else {
            let d = gcd(4, p - 1);
            unit_class = vec![u8::MAX; p as usize];
            let g = primitive_root(p, 1);
            let mut x = 1u64;
            for i in 0..p - 1 {
                unit_class[x as usize] = (i % d) as u8;
                x = mul_mod(x, g, p);
            }
            for _ in 0..h {
                level_offset.push(next);
                next += d as u32;
            }
        }
        Self { p, q, level_offset, unit_class, count: next as usize }
    }

    #[inline]
    fn of(&self, j: u64) -> u32 {
        let j = j % self.q;
        if j == 0 {
            return 0;
        }
        let mut v = 0usize;
        let mut w = j;
        while w.is_multiple_of(self.p) {
            w /= self.p;
            v += 1;
        }
        let class = if self.p == 2 {
            let level_mod = (self.q >> v).min(16);
            ((w % level_mod) / 2) as u32
        } else {
            self.unit_class[(w % self.p) as usize] as u32
        };
        self.level_offset[v] + class
    }
}

/// Per-orbit solution counts for `s = 3` and `s = 4` at one modulus.
#[derive(Debug)]
struct LevelCounts {
    /// `[N_3 per orbit, N_4 per orbit]`
    by_orbit: [Vec<u128>; 2],
}

struct Counter {
    orbits: usize,
    table: Vec<u16>,
    sizes: Vec<u64>,
    q: u64,
    /// `pairs[r][o1 * orbits + o2] = #{u : u in o1, rep_r - u in o2}`.
    pairs: Vec<Vec<u32>>,
}

impl Counter {
    fn new(orbits: &Orbits) -> Self {
        let q = orbits.q;
        let count = orbits.count;
        let table: Vec<u16> = (0..q).map(|j| orbits.of(j) as u16).collect();
        let mut reps = vec![usize::MAX; count];
        let mut sizes = vec![0u64; count];
        for (j, &o) in table.iter().enumerate() {
            if reps[o as usize] == usize::MAX {
                reps[o as usize] = j;
            }
            sizes[o as usize] += 1;
        }
        let pairs = reps
            .iter()
            .map(|&rep| {
                let mut m = vec![0u32; count * count];
                if rep == usize::MAX {
                    return m;
                }
                let (head, tail) = table.split_at(rep + 1);
                // u <= rep pairs with rep - u, u > rep with rep + q - u
                for (u, &ou) in head.iter().enumerate() {
                    m[ou as usize * count + table[rep - u] as usize] += 1;
                }
                for (i, &ou) in tail.iter().enumerate() {
                    let u = rep + 1 + i;
                    m[ou as usize * count + table[rep + q as usize - u] as usize] += 1;
                }
                m
            })
            .collect();
        Self { orbits: count, table, sizes, q, pairs }
    }

    /// `#{x mod q : x^k = j}` per orbit.
    fn power_counts(&self, k: u32) -> Vec<u128> {
        let q = self.q;
        let mut hist = vec![0u64; self.orbits];
        for x in 0..q {
            // q <= 2^24, so products stay well inside 64 bits
            let x2 = x * x % q;
            let xk = if k == 4 { x2 * x2 % q } else { x2 };
            hist[self.table[xk as usize] as usize] += 1;
        }
        hist.iter()
            .zip(&self.sizes)
            .map(|(&h, &sz)| {
                if sz == 0 {
                    return 0;
                }
                debug_assert_eq!(h % sz, 0, "count function not constant on an orbit");
                (h / sz) as u128
            })
            .collect()
    }

    /// Cyclic convolution evaluated at every orbit representative.
    fn convolve(&self, f: &[u128], g: &[u128]) -> Vec<u128> {
        let n = self.orbits;
        self.pairs
            .iter()
            .map(|m| {
                let mut acc = 0u128;
                for (o1, row) in m.chunks_exact(n).enumerate() {
                    if f[o1] == 0 {
                        continue;
                    }
                    let inner: u128 = row.iter().zip(g).map(|(&c, &gv)| c as u128 * gv).sum();
                    acc += f[o1] * inner;
                }
                acc
            })
            .collect()
    }
}

fn level_counts(p: u64, h: u32) -> Arc<LevelCounts> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, u32), Arc<LevelCounts>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(c) = cache.lock().expect("cache poisoned").get(&(p, h)) {
        return Arc::clone(c);
    }
    let orbits = Orbits::new(p, h);
    let counter = Counter::new(&orbits);
    let c2 = counter.power_counts(2);
    let c4 = counter.power_counts(4);
    let two_squares = counter.convolve(&c2, &c2);
    let quad2 = counter.convolve(&c4, &c4);
    let quad3 = counter.convolve(&quad2, &c4);
    let quad4 = counter.convolve(&quad3, &c4);
    let n3 = counter.convolve(&two_squares, &quad3);
    let n4 = counter.convolve(&two_squares, &quad4);
    let counts = Arc::new(LevelCounts { by_orbit: [n3, n4] });
    let mut map = cache.lock().expect("cache poisoned");
    Arc::clone(map.entry((p, h)).or_insert(counts))
}

/// `#{solutions mod p^h}` of `x1^2 + x2^2 + y1^4 + ... + ys^4 = n`.
pub fn count_solutions(s: u32, n: u64, p: u64, h: u32) -> Result<u128> {
    crate::check_s(s)?;
    if !crate::arith::is_prime(p) || h == 0 {
        return Err(Error::invalid(format!("counting needs a prime power modulus, got {p}^{h}")));
    }
    if p.checked_pow(h).is_none_or(|q| q > MAX_LOCAL_MODULUS) {
        return Err(Error::Capacity(format!("modulus {p}^{h} exceeds {MAX_LOCAL_MODULUS}")));
    }
    let counts = level_counts(p, h);
    let orbit = Orbits::new(p, h).of(n);
    Ok(counts.by_orbit[(s - 3) as usize][orbit as usize])
}

/// Counting density `N(p^h) / p^(h(s+1))`.
pub fn counting_density(s: u32, n: u64, p: u64, h: u32) -> Result<f64> {
    let count = count_solutions(s, n, p, h)?;
    Ok(count as f64 / (p as f64).powi((h * (s + 1)) as i32))
}

/// `sigma_p(n)`, evaluated level by level. At every level `h` the counting
/// density is checked against the partial sum `sum_{j<=h} A(p^j, n)`; the
/// factor is stable once two consecutive levels agree to
/// [`STABILITY_TOLERANCE`]. Comparisons start at level `v_p(n) + 2` for odd
/// `p` and at `v_p(n) + 5` for `p = 2`, where fourth powers need deeper
/// lifting. For odd `p` the Gauss-sum terms use the `O(p)` reduction of
/// `A(p^h, n)`; levels beyond [`MAX_LOCAL_MODULUS`] are too large to count and
/// continue on that route alone.
fn valuation(mut n: u64, p: u64) -> u32 {
    let mut v = 0;
    while n > 0 && n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

pub fn local_density(s: u32, n: u64, p: u64, h_max: u32) -> Result<LocalFactor> {
    crate::check_s(s)?;
    if !crate::arith::is_prime(p) {
        return Err(Error::invalid(format!("{p} is not prime")));
    }
    if h_max == 0 {
        return Err(Error::invalid("h_max must be at least 1"));
    }
    // Zero runs in A(p^h, n) can make consecutive levels agree before the
    // density has settled; lifting is only guaranteed past v_p(n) + 4 for
    // p = 2 and v_p(n) + 1 for odd p.
    let first_comparison = valuation(n, p) + if p == 2 { 5 } else { 2 };
    let mut partial = 1.0;
    let mut previous: Option<f64> = None;
    let mut last = LocalFactor { p, sigma_p: 1.0, h_used: 0, stabilized: false };
    for h in 1..=h_max {
        let countable = p.checked_pow(h).is_some_and(|q| q <= MAX_LOCAL_MODULUS);
        partial += if p == 2 {
            a_term_prime_power(&global_cache().get(p, h), s, n)?
        } else {
            a_term_odd_lifted(s, n, p, h)?
        };
        let sigma = if countable {
            let sigma = counting_density(s, n, p, h)?;
            if (sigma - partial).abs() > ROUTE_TOLERANCE * sigma.abs().max(1.0) {
                return Err(Error::Integrity(format!(
                    "sigma_{p}(n={n}) at level {h}: counting gives {sigma}, Gauss-sum partial sum gives {partial}"
                )));
            }
            sigma
        } else if p != 2 {
            partial
        } else {
            break;
        };
        last = LocalFactor { p, sigma_p: sigma, h_used: h, stabilized: false };
        if let Some(prev) = previous {
            if h >= first_comparison && (sigma - prev).abs() <= STABILITY_TOLERANCE * sigma.abs() {
                last.stabilized = true;
                return Ok(last);
            }
        }
        previous = Some(sigma);
    }
    Ok(last)
}
