//! `R_s(n)` for every `n <= x_max` as the convolution of the two-square and
//! biquadrate-sum coefficient arrays.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ntt::convolve_exact;
use super::tables::{build_biquadrate_table, build_two_square_table, for_each_tuple_sum};
use crate::check_s;
use crate::arith::modular::isqrt;
use crate::error::{Error, Result};

/// Largest `x_max` for the strategies that hold whole tables in memory.
pub const MAX_DENSE_X: u64 = 10_000_000;
/// Largest `x_max` for the streamed strategy.
pub const MAX_STREAMED_X: u64 = 100_000_000;
/// Default output block length for the streamed strategy.
pub const STREAM_BLOCK: usize = 1 << 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SieveStrategy {
    /// Shift-and-add of the two-square table for every biquadrate sum.
    Direct,
    /// One exact NTT convolution of the full tables.
    Ntt,
    /// Output produced in fixed-size blocks with bounded memory.
    Streamed,
}

/// Exact representation counts `R_s(n)` for `1 <= n <= x_max`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepTable {
    s: u32,
    x_max: u64,
    /// `counts[n]`; index 0 is unused and always zero.
    counts: Vec<u64>,
}

impl RepTable {
    pub(crate) fn from_counts(s: u32, counts: Vec<u64>) -> Self {
        let x_max = counts.len() as u64 - 1;
        Self { s, x_max, counts }
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn x_max(&self) -> u64 {
        self.x_max
    }

    /// `R_s(n)`; panics when `n` is outside `1..=x_max`.
    pub fn get(&self, n: u64) -> u64 {
        assert!(n >= 1 && n <= self.x_max, "n = {n} outside 1..={}", self.x_max);
        self.counts[n as usize]
    }

    /// Counts for `n = 1..=x_max`.
    pub fn counts(&self) -> &[u64] {
        &self.counts[1..]
    }

    pub fn total(&self) -> u128 {
        self.counts.iter().map(|&c| c as u128).sum()
    }
}

/// Computes `R_s(n)` for all `n <= x_max`.
pub fn sieve_representations(s: u32, x_max: u64, strategy: SieveStrategy) -> Result<RepTable> {
    check_s(s)?;
    let limit = match strategy {
        SieveStrategy::Streamed => MAX_STREAMED_X,
        _ => MAX_DENSE_X,
    };
    if x_max == 0 || x_max > limit {
        return Err(Error::invalid(format!("{strategy:?} sieve accepts 1 <= x_max <= {limit}, got {x_max}")));
    }
    let counts = match strategy {
        SieveStrategy::Direct => sieve_direct(s, x_max)?,
        SieveStrategy::Ntt => sieve_ntt(s, x_max)?,
        SieveStrategy::Streamed => {
            let mut counts = vec![0u64; x_max as usize + 1];
            stream_representations(s, x_max, STREAM_BLOCK, |start, block| {
                counts[start as usize..start as usize + block.len()].copy_from_slice(block);
                Ok(())
            })?;
            counts
        }
    };
    Ok(RepTable::from_counts(s, counts))
}

fn sieve_direct(s: u32, x_max: u64) -> Result<Vec<u64>> {
    let two = build_two_square_table(x_max)?;
    let quad = build_biquadrate_table(s, x_max)?.support();
    let two = two.counts();
    let mut out = vec![0u64; x_max as usize + 1];
    // Output chunks are independent; integer sums make any split exact.
    const CHUNK: usize = 1 << 14;
    out.par_chunks_mut(CHUNK).enumerate().try_for_each(|(ci, chunk)| {
        let lo = ci * CHUNK;
        let hi = lo + chunk.len();
        for &(t, c) in &quad {
            let t = t as usize;
            if t >= hi {
                break;
            }
            let start = lo.max(t);
            for n in start..hi {
                let add = c as u64 * two[n - t] as u64;
                let cell = &mut chunk[n - lo];
                *cell = cell
                    .checked_add(add)
                    .ok_or_else(|| Error::Capacity(format!("R_s({n}) overflows 64 bits")))?;
            }
        }
        Ok::<(), Error>(())
    })?;
    Ok(out)
}

fn sieve_ntt(s: u32, x_max: u64) -> Result<Vec<u64>> {
    let two: Vec<u64> = build_two_square_table(x_max)?.counts().iter().map(|&c| c as u64).collect();
    let quad: Vec<u64> = build_biquadrate_table(s, x_max)?.counts().iter().map(|&c| c as u64).collect();
    let mut conv = convolve_exact(&quad, &two)?;
    conv.truncate(x_max as usize + 1);
    Ok(conv)
}

/// Two-square counts for `m` in `[lo, hi)`, generated without a full table.
fn two_square_window(lo: u64, hi: u64) -> Vec<u64> {
    let mut w = vec![0u64; (hi - lo) as usize];
    let mut x1 = 1u64;
    while x1 * x1 + 1 < hi {
        let sq = x1 * x1;
        let first = if lo > sq + 1 { isqrt(lo - sq - 1) + 1 } else { 1 };
        let last = isqrt(hi - 1 - sq);
        for x2 in first..=last {
            w[(sq + x2 * x2 - lo) as usize] += 1;
        }
        x1 += 1;
    }
    w
}

/// Produces `R_s(n)` for `n = 0..=x_max` in consecutive blocks of
/// `block_len`, handing each block to `sink(first_n, counts)`. Memory is
/// bounded by a few blocks plus the sparse list of biquadrate sums.
pub fn stream_representations(
    s: u32,
    x_max: u64,
    block_len: usize,
    mut sink: impl FnMut(u64, &[u64]) -> Result<()>,
) -> Result<()> {
    check_s(s)?;
    if x_max == 0 || x_max > MAX_STREAMED_X || block_len == 0 {
        return Err(Error::invalid("streamed sieve needs 1 <= x_max <= 1e8 and a positive block length"));
    }
    let mut sums = Vec::new();
    for_each_tuple_sum(s, x_max, &mut |t| {
        sums.push(t);
        Ok(())
    })?;
    sums.sort_unstable();
    let mut quad: Vec<(u64, u64)> = Vec::new();
    for t in sums {
        match quad.last_mut() {
            Some((u, c)) if *u == t => *c += 1,
            _ => quad.push((t, 1)),
        }
    }

    let b = block_len as u64;
    let total = x_max + 1;
    let n_blocks = total.div_ceil(b);
    // Only t-blocks holding at least one tuple sum contribute.
    let t_blocks: Vec<(u64, &[(u64, u64)])> = quad.chunk_by(|x, y| x.0 / b == y.0 / b).map(|g| (g[0].0 / b, g)).collect();
    for k in 0..n_blocks {
        let lo = k * b;
        let hi = (lo + b).min(total);
        let mut out = vec![0u64; (hi - lo) as usize];
        for &(i, group) in t_blocks.iter().take_while(|(i, _)| *i <= k) {
            let t_lo = i * b;
            let t_hi = (t_lo + b).min(hi);
            let part = &group[..group.partition_point(|&(t, _)| t < t_hi)];
            if part.is_empty() {
                continue;
            }
            // m = n - t ranges over [lo - t_hi + 1, hi - t_lo)
            let m_lo = (lo + 1).saturating_sub(t_hi);
            let m_hi = hi - t_lo;
            let window = two_square_window(m_lo, m_hi);
            let ntt_cost = 64 * (window.len() + b as usize);
            if part.len() * window.len() <= ntt_cost {
                for &(t, c) in part {
                    let n_start = lo.max(t + m_lo);
                    for n in n_start..hi {
                        out[(n - lo) as usize] += c * window[(n - t - m_lo) as usize];
                    }
                }
            } else {
                let mut dense = vec![0u64; (t_hi - t_lo) as usize];
                for &(t, c) in part {
                    dense[(t - t_lo) as usize] = c;
                }
                let conv = convolve_exact(&dense, &window)?;
                // conv[j] is the coefficient of n = t_lo + m_lo + j
                let base = t_lo + m_lo;
                for n in lo.max(base)..hi {
                    if let Some(&v) = conv.get((n - base) as usize) {
                        out[(n - lo) as usize] += v;
                    }
                }
            }
        }
        sink(lo, &out)?;
    }
    Ok(())
}
