use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use num_complex::Complex64;

use super::arcs::{classify_arc, ArcLabel, DissectionParams, Stratum};
use super::oscillatory::{approximation_sample, f_star_offset, window, ApproximationSample};
use super::weyl::{weyl_sum, weyl_sum_near};
use crate::arith::modular::gcd;
use crate::arith::ReducedFraction;
use crate::error::{Error, Result};

/// Size of `f_2` on sampled points of `m1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinorArcReport {
    pub x: f64,
    pub requested: usize,
    pub attempts: usize,
    pub alphas: Vec<f64>,
    /// `|f_2(alpha)| / P_2^(1/2)` for each sampled `alpha` in `m1`.
    pub ratios: Vec<f64>,
    pub max_ratio: Option<f64>,
    pub mean_ratio: Option<f64>,
}

/// Draws uniform `alpha` in the unit interval until `samples` of them fall in
/// `m1` (or `50 * samples` draws are spent), and reports the size of `f_2`
/// there relative to `P_2^(1/2)`.
pub fn minor_arc_sup_diagnostic(params: &DissectionParams, samples: usize, seed: u64) -> MinorArcReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, _) = params.unit_interval();
    let mut alphas = Vec::with_capacity(samples);
    let mut attempts = 0;
    while alphas.len() < samples && attempts < 50 * samples.max(1) {
        attempts += 1;
        let alpha = lo + (1.0 - rng.random::<f64>());
        if classify_arc(alpha, params).stratum() == Some(Stratum::M1) {
            alphas.push(alpha);
        }
    }
    let norm = params.p2().sqrt();
    let ratios: Vec<f64> = alphas.par_iter().map(|&a| weyl_sum(2, params.x(), a).norm() / norm).collect();
    let max_ratio = ratios.iter().copied().reduce(f64::max);
    let mean_ratio = (!ratios.is_empty()).then(|| ratios.iter().sum::<f64>() / ratios.len() as f64);
    MinorArcReport { x: params.x(), requested: samples, attempts, alphas, ratios, max_ratio, mean_ratio }
}

/// Random points on the major arcs `M_{X^(1/2)/2}(q,a)`: `q` uniform up to
/// `X^(1/2)/2`, `a` uniform among units, `beta` uniform in the arc.
pub fn sample_major_arc_points(x: f64, count: usize, seed: u64) -> Vec<(ReducedFraction, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q_max = (0.5 * x.sqrt()).floor() as u64;
    (0..count)
        .map(|_| {
            let q = rng.random_range(1..=q_max.max(1));
            let a = loop {
                let a = rng.random_range(1..=q);
                if gcd(a, q) == 1 {
                    break a;
                }
            };
            let half = window(x) / q as f64;
            let beta = rng.random_range(-half..=half);
            (ReducedFraction::new(a, q).expect("coprime by construction"), beta)
        })
        .collect()
}

/// Largest ratios observed over a major-arc sample.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApproximationSummary {
    pub k: u32,
    pub x: f64,
    pub samples: usize,
    pub max_difference_ratio: f64,
    pub max_star_ratio: f64,
}

pub fn approximation_diagnostic(k: u32, x: f64, count: usize, seed: u64) -> Result<ApproximationSummary> {
    if count == 0 {
        return Err(Error::invalid("need at least one sample"));
    }
    let points = sample_major_arc_points(x, count, seed);
    let samples: Vec<ApproximationSample> = points
        .par_iter()
        .map(|&(frac, beta)| approximation_sample(k, x, frac, beta))
        .collect::<Result<_>>()?;
    Ok(ApproximationSummary {
        k,
        x,
        samples: samples.len(),
        max_difference_ratio: samples.iter().map(|s| s.difference_ratio).fold(0.0, f64::max),
        max_star_ratio: samples.iter().map(|s| s.star_ratio).fold(0.0, f64::max),
    })
}

/// `f_k(alpha)` with its arc label, and `f_k^*(alpha)` whenever `alpha` lies
/// in `M(X^(1/2)/2)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeylSumSample {
    pub alpha: f64,
    pub k: u32,
    pub value: Complex64,
    pub f_star: Option<Complex64>,
    pub arc: ArcLabel,
}

pub fn weyl_sample(k: u32, params: &DissectionParams, alpha: f64) -> Result<WeylSumSample> {
    if !matches!(k, 2 | 4) {
        return Err(Error::invalid(format!("k must be 2 or 4, got {k}")));
    }
    let arc = classify_arc(alpha, params);
    let x = params.x();
    let (value, f_star) = match arc.approximant {
        Some((frac, beta)) => (weyl_sum_near(k, x, frac, beta), Some(f_star_offset(k, x, frac, beta)?)),
        None => (weyl_sum(k, x, alpha), None),
    };
    Ok(WeylSumSample { alpha, k, value, f_star, arc })
}
