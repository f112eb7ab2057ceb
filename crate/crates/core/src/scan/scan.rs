use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cache::load_or_build_tables;
use super::psi::PsiSpec;
use super::report::{BlockSummary, DeviationRecord, ExponentFit, ScanProvenance, ScanReport};
use crate::error::{Error, Result};
use crate::repcount::{sieve_representations, SieveStrategy};
use crate::singular::{constant_c, verify_gamma_constant, GAMMA_5_4_POW4, SCAN_Q_MAX};

/// Largest `x_max` a scan accepts.
pub const MAX_SCAN_X: u64 = 1 << 24;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanParams {
    pub q_max: u64,
    /// Singular series values below this are listed per block.
    pub near_zero_threshold: f64,
}

impl Default for ScanParams {
    fn default() -> Self {
        Self { q_max: SCAN_Q_MAX, near_zero_threshold: 0.01 }
    }
}

/// The exceptional-set exponent of `X` in the theorem: 3/8 for `s = 3`,
/// 1/8 for `s = 4`.
pub fn theorem_exponent(s: u32) -> f64 {
    if s == 3 {
        0.375
    } else {
        0.125
    }
}

/// `|R - main| > n^(s/4) / psi(n)`, written without dividing by `psi`.
pub fn is_exceptional(r: u64, main: f64, n: u64, s: u32, psi: &PsiSpec) -> bool {
    (r as f64 - main).abs() * psi.eval(n as f64) > (n as f64).powf(s as f64 / 4.0)
}

fn check_range(x_min: u64, x_max: u64) -> Result<()> {
    if !x_max.is_power_of_two() || x_max > MAX_SCAN_X {
        return Err(Error::invalid(format!("x_max must be a power of two up to 2^24, got {x_max}")));
    }
    if x_min != 0 && (!x_min.is_power_of_two() || x_min >= x_max) {
        return Err(Error::invalid(format!("x_min must be 0 or a power of two below x_max, got {x_min}")));
    }
    Ok(())
}

/// Scans `n` in `(x_min, x_max]`, which must be a union of dyadic blocks
/// `(X/2, X]`; with `x_min = 0` the block `X = 1` holds `n = 1`.
///
/// Records are computed in parallel and gathered in `n` order, so the
/// report does not depend on the number of threads.
pub fn scan(s: u32, x_min: u64, x_max: u64, psi: PsiSpec, params: ScanParams) -> Result<ScanReport> {
    crate::check_s(s)?;
    check_range(x_min, x_max)?;
    verify_gamma_constant()?;
    let strategy = if x_max > crate::repcount::MAX_DENSE_X { SieveStrategy::Streamed } else { SieveStrategy::Ntt };
    let table = sieve_representations(s, x_max, strategy)?;
    let tables = load_or_build_tables(s, params.q_max)?;
    let c = constant_c(s) * GAMMA_5_4_POW4;
    let records: Vec<DeviationRecord> = (x_min + 1..=x_max)
        .into_par_iter()
        .map(|n| {
            let ss = tables.evaluate(n);
            let scale = (n as f64).powf(s as f64 / 4.0);
            let main = c * ss.value * scale;
            let r = table.get(n);
            let relative_deviation = (r as f64 - main).abs() / scale;
            let exceptional = is_exceptional(r, main, n, s, &psi);
            // Shift the main term by the tail estimate both ways.
            let slack = c * ss.tail_estimate * scale;
            let borderline = is_exceptional(r, main - slack, n, s, &psi) != exceptional
                || is_exceptional(r, main + slack, n, s, &psi) != exceptional;
            DeviationRecord {
                n,
                r,
                main,
                singular: ss.value,
                relative_deviation,
                exceptional,
                borderline,
                trivial_range: n < s as u64 + 2,
            }
        })
        .collect();
    let ranges = aggregate(&records, x_min, x_max, &psi, params.near_zero_threshold);
    let mut report = ScanReport {
        s,
        psi,
        provenance: ScanProvenance {
            x_min,
            x_max,
            q_max: params.q_max,
            near_zero_threshold: params.near_zero_threshold,
            singular_method: "qsum".into(),
            version: crate::VERSION.into(),
        },
        ranges,
        fitted_exponent: None,
        theorem_exponent: theorem_exponent(s),
        records,
    };
    report.fitted_exponent = fit_exponent(&report).ok();
    Ok(report)
}

fn median(mut v: Vec<f64>) -> Option<f64> {
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    Some(if v.len() % 2 == 1 { v[m] } else { 0.5 * (v[m - 1] + v[m]) })
}

fn aggregate(records: &[DeviationRecord], x_min: u64, x_max: u64, psi: &PsiSpec, near_zero: f64) -> Vec<BlockSummary> {
    let mut out = Vec::new();
    let mut cumulative = 0;
    let mut x = if x_min == 0 { 1 } else { 2 * x_min };
    while x <= x_max {
        let lo = x / 2;
        // records[i] holds n = x_min + 1 + i
        let block = &records[(lo - x_min) as usize..(x - x_min) as usize];
        let exceptional_count = block.iter().filter(|r| r.exceptional).count() as u64;
        cumulative += exceptional_count;
        out.push(BlockSummary {
            x,
            count: block.len() as u64,
            exceptional_count,
            cumulative_exceptional: cumulative,
            borderline_count: block.iter().filter(|r| r.borderline).count() as u64,
            median_relative_error: median(block.iter().map(|r| r.relative_deviation).collect()),
            psi_at_x: psi.eval(x as f64),
            near_zero_singular: block.iter().filter(|r| r.singular < near_zero).map(|r| r.n).collect(),
        });
        x *= 2;
    }
    out
}

/// Least-squares slope through `(x, y)` points; `None` with fewer than two
/// distinct abscissae.
pub fn least_squares_slope(points: &[(f64, f64)]) -> Option<f64> {
    let n = points.len() as f64;
    if points.len() < 2 {
        return None;
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Slope of `log2(exceptional count)` against `log2 X` over blocks with a
/// nonzero count. All-zero reports give [`ExponentFit::AllClear`]; fewer
/// than three nonzero blocks is insufficient data.
pub fn fit_exponent(report: &ScanReport) -> Result<ExponentFit> {
    let points: Vec<(f64, f64)> = report
        .ranges
        .iter()
        .filter(|b| b.exceptional_count > 0)
        .map(|b| ((b.x as f64).log2(), (b.exceptional_count as f64).log2()))
        .collect();
    if points.is_empty() {
        return Ok(ExponentFit::AllClear);
    }
    if points.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "{} dyadic block(s) with exceptional n; a fit needs 3",
            points.len()
        )));
    }
    let slope = least_squares_slope(&points).expect("distinct block sizes");
    Ok(ExponentFit::Slope { slope, blocks: points.len() })
}
