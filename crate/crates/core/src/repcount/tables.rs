//! Coefficient arrays of `f_2(α)^2` and `f_4(α)^s`.

use serde::{Deserialize, Serialize};

use crate::arith::modular::{iroot4, isqrt};
use crate::check_s;
use crate::error::{Error, Result};

/// Largest `x_max` accepted by the table builders.
pub const MAX_TABLE_LEN: u64 = 100_000_000;

fn check_range(x_max: u64) -> Result<()> {
    if x_max == 0 || x_max > MAX_TABLE_LEN {
        return Err(Error::invalid(format!("x_max must lie in 1..={MAX_TABLE_LEN}, got {x_max}")));
    }
    Ok(())
}

#[inline]
fn bump(cell: &mut u32, by: u32, what: &str, index: u64) -> Result<()> {
    *cell = cell
        .checked_add(by)
        .ok_or_else(|| Error::Capacity(format!("{what} count at {index} overflows 32 bits")))?;
    Ok(())
}

/// `counts[m] = #{(x1, x2) : x_i >= 1, x1^2 + x2^2 = m}` for `m <= x_max`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoSquareTable {
    x_max: u64,
    counts: Vec<u32>,
}

impl TwoSquareTable {
    pub fn x_max(&self) -> u64 {
        self.x_max
    }

    /// Indexed by `m` in `0..=x_max`.
    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn get(&self, m: u64) -> u32 {
        self.counts.get(m as usize).copied().unwrap_or(0)
    }
}

pub fn build_two_square_table(x_max: u64) -> Result<TwoSquareTable> {
    check_range(x_max)?;
    let mut counts = vec![0u32; x_max as usize + 1];
    let mut x1 = 1u64;
    while x1 * x1 < x_max {
        let rest = x_max - x1 * x1;
        for x2 in 1..=isqrt(rest) {
            let m = x1 * x1 + x2 * x2;
            bump(&mut counts[m as usize], 1, "two-square", m)?;
        }
        x1 += 1;
    }
    Ok(TwoSquareTable { x_max, counts })
}

/// `counts[t]` = number of ordered `s`-tuples of positive integers whose
/// fourth powers sum to `t`, for `t <= x_max`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BiquadrateSumTable {
    s: u32,
    x_max: u64,
    counts: Vec<u32>,
}

impl BiquadrateSumTable {
    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn x_max(&self) -> u64 {
        self.x_max
    }

    /// Indexed by `t` in `0..=x_max`.
    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn get(&self, t: u64) -> u32 {
        self.counts.get(t as usize).copied().unwrap_or(0)
    }

    /// Nonzero entries as `(t, count)` in increasing `t`.
    pub fn support(&self) -> Vec<(u64, u32)> {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(t, &c)| (t as u64, c))
            .collect()
    }
}

/// Visits every ordered `s`-tuple sum `<= limit`, with `y_1` outermost.
pub(crate) fn for_each_tuple_sum(s: u32, limit: u64, visit: &mut impl FnMut(u64) -> Result<()>) -> Result<()> {
    fn rec(depth: u32, partial: u64, limit: u64, visit: &mut impl FnMut(u64) -> Result<()>) -> Result<()> {
        if depth == 0 {
            return visit(partial);
        }
        // the remaining depth-1 variables contribute at least depth-1
        let room = limit - partial - (depth as u64 - 1);
        for y in 1..=iroot4(room) {
            rec(depth - 1, partial + y.pow(4), limit, visit)?;
        }
        Ok(())
    }
    if limit < s as u64 {
        return Ok(());
    }
    rec(s, 0, limit, visit)
}

pub fn build_biquadrate_table(s: u32, x_max: u64) -> Result<BiquadrateSumTable> {
    check_s(s)?;
    check_range(x_max)?;
    let mut counts = vec![0u32; x_max as usize + 1];
    for_each_tuple_sum(s, x_max, &mut |t| bump(&mut counts[t as usize], 1, "biquadrate", t))?;
    Ok(BiquadrateSumTable { s, x_max, counts })
}
