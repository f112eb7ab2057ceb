use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::local::{local_density, LocalFactor};
use super::{SeriesMethod, SingularSeriesResult};
use crate::arith::factor::primes_up_to;
use crate::error::{Error, Result};

/// Deepest Hensel level tried per prime.
///
/// The base depths apply to primes not dividing `n`; when `adaptive` is set
/// the depth for `p | n` grows by `v_p(n)`, since solutions with every
/// variable divisible by `p` keep contributing until that valuation is used
/// up.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepthPolicy {
    pub two: u32,
    pub odd: u32,
    pub adaptive: bool,
}

impl Default for DepthPolicy {
    fn default() -> Self {
        Self { two: 8, odd: 4, adaptive: true }
    }
}

impl DepthPolicy {
    pub fn uniform(h_max: u32) -> Self {
        Self { two: h_max, odd: h_max, adaptive: false }
    }

    pub fn h_max(&self, p: u64, n: u64) -> u32 {
        let base = if p == 2 { self.two } else { self.odd };
        if !self.adaptive || n == 0 {
            return base;
        }
        let mut v = 0;
        let mut m = n;
        while m.is_multiple_of(p) {
            m /= p;
            v += 1;
        }
        base + v
    }
}

/// `prod_{p <= p_max} sigma_p(n)`.
///
/// The tail estimate fits `|sigma_p - 1| <= C p^(-1-s/4)` on primes in
/// `(p_max/2, p_max]` not dividing `2n` and sums that envelope over
/// `p > p_max` with the prime-number-theorem density.
pub fn singular_series_euler(s: u32, n: u64, p_max: u64, depth: DepthPolicy) -> Result<SingularSeriesResult> {
    crate::check_s(s)?;
    if p_max < 2 {
        return Err(Error::invalid("p_max must be at least 2"));
    }
    let primes = primes_up_to(p_max);
    let factors: Vec<LocalFactor> = primes
        .par_iter()
        .map(|&p| local_density(s, n, p, depth.h_max(p, n)))
        .collect::<Result<_>>()?;
    if let Some(f) = factors.iter().find(|f| !f.stabilized) {
        return Err(Error::NotStabilized { p: f.p, h_max: depth.h_max(f.p, n) });
    }
    let value: f64 = factors.iter().map(|f| f.sigma_p).product();
    let expo = 1.0 + s as f64 / 4.0;
    let c = factors
        .iter()
        .filter(|f| f.p > p_max / 2 && f.p != 2 && !n.is_multiple_of(f.p))
        .map(|f| (f.sigma_p - 1.0).abs() * (f.p as f64).powf(expo))
        .fold(0.0, f64::max);
    let pm = p_max as f64;
    let tail_rel = c * pm.powf(1.0 - expo) / ((expo - 1.0) * pm.ln());
    Ok(SingularSeriesResult {
        s,
        n,
        value,
        method: SeriesMethod::Euler { p_max, h_max: depth.two.max(depth.odd) },
        tail_estimate: value.abs() * tail_rel,
        local_factors: Some(factors),
    })
}
