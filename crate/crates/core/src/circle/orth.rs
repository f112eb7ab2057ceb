use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::arith::gauss::e_frac;
use crate::arith::modular::{isqrt, iroot4};
use crate::error::{Error, Result};
use crate::repcount::{sieve_representations, SieveStrategy};

/// Largest `X` accepted by [`verify_orthogonality`].
pub const MAX_ORTH_X: u64 = 512;
/// Largest tolerated gap between a recovered coefficient and the exact count.
pub const ORTH_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrthogonalityReport {
    pub s: u32,
    pub x: u64,
    pub grid: usize,
    /// `max_n |coefficient_n - R_s(n)|` over `1 <= n <= X`.
    pub max_deviation: f64,
    /// `max_n |coefficient_n - round(coefficient_n)|`.
    pub max_non_integrality: f64,
    pub recovered: Vec<f64>,
    pub passed: bool,
}

/// `f_k(j/N)` for all `j`, with phases `j x^k mod N` reduced exactly.
fn weyl_grid(k: u32, p: u64, n: usize) -> Vec<Complex64> {
    (0..n as u64)
        .map(|j| (1..=p).map(|x| e_frac(((j * x.pow(k)) % n as u64) as i64, n as u64)).sum())
        .collect()
}

/// Recovers `R_s(n)` for `n <= X` as Fourier coefficients of
/// `f_2(alpha)^2 f_4(alpha)^s` sampled at `alpha = j/N`. The product is a
/// trigonometric polynomial of degree at most `(s+2)X`, so with `N` the least
/// power of two above `(s+2)X + 1` the discrete transform is exact.
pub fn verify_orthogonality(s: u32, x: u64) -> Result<OrthogonalityReport> {
    crate::check_s(s)?;
    if x == 0 || x > MAX_ORTH_X {
        return Err(Error::invalid(format!("verify_orthogonality needs 1 <= X <= {MAX_ORTH_X}, got {x}")));
    }
    let n = ((s as u64 + 2) * x + 2).next_power_of_two() as usize;
    let f2 = weyl_grid(2, isqrt(x), n);
    let f4 = weyl_grid(4, iroot4(x), n);
    let mut values: Vec<Complex64> = f2.iter().zip(&f4).map(|(a, b)| a * a * b.powu(s)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut values);
    let table = sieve_representations(s, x, SieveStrategy::Direct)?;
    let mut max_deviation: f64 = 0.0;
    let mut max_non_integrality: f64 = 0.0;
    let mut recovered = Vec::with_capacity(x as usize);
    for m in 1..=x {
        let c = values[m as usize] / n as f64;
        let dev = (c - Complex64::new(table.get(m) as f64, 0.0)).norm();
        max_deviation = max_deviation.max(dev);
        max_non_integrality = max_non_integrality.max((c.re - c.re.round()).abs().max(c.im.abs()));
        recovered.push(c.re);
    }
    Ok(OrthogonalityReport {
        s,
        x,
        grid: n,
        max_deviation,
        max_non_integrality,
        recovered,
        passed: max_deviation < ORTH_TOLERANCE,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_case_by_hand() {
        let r = verify_orthogonality(3, 8).unwrap();
        assert!(r.passed);
        assert_eq!(r.recovered[4].round(), 1.0); // R_3(5)
        assert_eq!(r.recovered[3].round(), 0.0);
        assert_eq!(r.recovered[7].round(), 2.0); // R_3(8)
    }

    #[test]
    fn rejects_large_x() {
        assert!(verify_orthogonality(3, 513).is_err());
        assert!(verify_orthogonality(5, 10).is_err());
    }
}
