//! Even moments `int_0^1 |f_k(alpha)|^(2m) d alpha`, which by orthogonality
//! count solutions of `x_1^k + ... + x_m^k = x_{m+1}^k + ... + x_{2m}^k`
//! in `[1, P]`.

use crate::error::{Error, Result};

/// Dense histograms are used while the largest sum stays below this.
const DENSE_LIMIT: u64 = 1 << 26;
/// Sums held in memory at once by the sorting route.
const BATCH: usize = 1 << 23;

/// Visit every nondecreasing `m`-tuple in `[1, P]` with its `k`-th power sum
/// and its number of orderings.
fn for_each_multiset(k: u32, m: u32, p: u64, f: &mut impl FnMut(u64, u64)) {
    let powers: Vec<u64> = (0..=p).map(|x| x.pow(k)).collect();
    let factorial = [1u64, 1, 2, 6, 24];
    fn rec(
        powers: &[u64],
        depth: u32,
        m: u32,
        start: usize,
        sum: u64,
        run: u64,
        denom: u64,
        last: usize,
        fact: &[u64],
        f: &mut impl FnMut(u64, u64),
    ) {
        if depth == m {
            f(sum, fact[m as usize] / (denom * fact[run as usize]));
            return;
        }
        for x in start..powers.len() {
            let (run2, denom2) = if x == last { (run + 1, denom) } else { (1, denom * fact[run as usize]) };
            rec(powers, depth + 1, m, x, sum + powers[x], run2, denom2, x, fact, f);
        }
    }
    rec(&powers, 0, m, 1, 0, 0, 1, 0, &factorial, f);
}

pub const MAX_MOMENT_P: u64 = 200;

/// `#{(x_1..x_2m) in [1,P]^(2m) : x_1^k + ... + x_m^k = x_{m+1}^k + ... + x_{2m}^k}`
/// as `sum_t r_m(t)^2`, where `r_m(t)` counts ordered `m`-tuples with sum `t`.
pub fn moment_count(k: u32, m: u32, p: u64) -> Result<u128> {
    if !matches!(k, 2 | 4) || !(1..=4).contains(&m) || !(1..=MAX_MOMENT_P).contains(&p) {
        return Err(Error::invalid(format!("moment_count needs k in {{2,4}}, m in 1..=4, 1 <= P <= {MAX_MOMENT_P}; got k={k}, m={m}, P={p}")));
    }
    let max_sum = m as u64 * p.pow(k);
    if max_sum < DENSE_LIMIT {
        let mut hist = vec![0u64; max_sum as usize + 1];
        for_each_multiset(k, m, p, &mut |s, w| hist[s as usize] += w);
        return Ok(hist.iter().map(|&r| r as u128 * r as u128).sum());
    }
    // Sort (sum, weight) pairs in passes over disjoint sum ranges so memory
    // stays bounded; equal sums never straddle two passes.
    let buckets = 1024u64;
    let width = max_sum / buckets + 1;
    let mut sizes = vec![0usize; buckets as usize];
    for_each_multiset(k, m, p, &mut |s, _| sizes[(s / width) as usize] += 1);
    let mut total = 0u128;
    let mut lo = 0usize;
    while lo < sizes.len() {
        let mut hi = lo;
        let mut len = 0;
        while hi < sizes.len() && (hi == lo || len + sizes[hi] <= BATCH) {
            len += sizes[hi];
            hi += 1;
        }
        let (a, b) = (lo as u64 * width, hi as u64 * width);
        let mut batch: Vec<(u64, u64)> = Vec::with_capacity(len);
        for_each_multiset(k, m, p, &mut |s, w| {
            if s >= a && s < b {
                batch.push((s, w));
            }
        });
        batch.sort_unstable();
        for run in batch.chunk_by(|x, y| x.0 == y.0) {
            let r: u128 = run.iter().map(|&(_, w)| w as u128).sum();
            total += r * r;
        }
        lo = hi;
    }
    Ok(total)
}

/// Least-squares slope of `log count` against `log P`.
pub fn fitted_moment_exponent(k: u32, m: u32, ps: &[u64]) -> Result<f64> {
    let pts: Vec<(f64, f64)> = ps
        .iter()
        .map(|&p| Ok(((p as f64).ln(), (moment_count(k, m, p)? as f64).ln())))
        .collect::<Result<_>>()?;
    crate::scan::least_squares_slope(&pts)
        .ok_or_else(|| Error::InsufficientData("need at least two distinct P".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn slow(k: u32, m: u32, p: u64) -> u128 {
        let vals: Vec<u64> = (1..=p).map(|x| x.pow(k)).collect();
        let mut idx = vec![0usize; 2 * m as usize];
        let mut count = 0u128;
        loop {
            let l: u64 = idx[..m as usize].iter().map(|&i| vals[i]).sum();
            let r: u64 = idx[m as usize..].iter().map(|&i| vals[i]).sum();
            count += (l == r) as u128;
            let mut j = 0;
            loop {
                if j == idx.len() {
                    return count;
                }
                idx[j] += 1;
                if idx[j] < vals.len() {
                    break;
                }
                idx[j] = 0;
                j += 1;
            }
        }
    }

    #[test]
    fn diagonal_only_for_small_biquadrates() {
        assert_eq!(moment_count(4, 2, 10).unwrap(), 190);
        assert_eq!(moment_count(4, 1, 7).unwrap(), 7);
        // 59^4 + 158^4 = 133^4 + 134^4 adds 8 ordered solutions
        assert_eq!(moment_count(4, 2, 158).unwrap(), 2 * 158 * 158 - 158 + 8);
    }

    #[test]
    fn agrees_with_full_enumeration() {
        for p in 1..=12 {
            for k in [2, 4] {
                assert_eq!(moment_count(k, 2, p).unwrap(), slow(k, 2, p), "k={k} P={p}");
            }
        }
        for p in [3, 5, 7] {
            assert_eq!(moment_count(2, 3, p).unwrap(), slow(2, 3, p));
            assert_eq!(moment_count(4, 3, p).unwrap(), slow(4, 3, p));
        }
        assert_eq!(moment_count(2, 2, 5).unwrap(), 45);
    }

    #[test]
    fn sorting_route_matches_dense_route() {
        // k = 4, m = 2, P = 91 has max sum 2 * 91^4 > 2^26
        let p: u64 = 91;
        let dense = {
            let max = 2 * p.pow(4) as usize;
            let mut hist = vec![0u64; max + 1];
            for_each_multiset(4, 2, p, &mut |s, w| hist[s as usize] += w);
            hist.iter().map(|&r| r as u128 * r as u128).sum::<u128>()
        };
        assert_eq!(moment_count(4, 2, p).unwrap(), dense);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(moment_count(3, 2, 10).is_err());
        assert!(moment_count(4, 5, 10).is_err());
        assert!(moment_count(4, 2, 201).is_err());
    }

    proptest! {
        #[test]
        fn orderings_cover_every_tuple(k in prop::sample::select(vec![2u32, 4]), m in 1u32..=4, p in 1u64..=9) {
            let mut total = 0u64;
            for_each_multiset(k, m, p, &mut |_, w| total += w);
            prop_assert_eq!(total, p.pow(m));
        }
    }
}
