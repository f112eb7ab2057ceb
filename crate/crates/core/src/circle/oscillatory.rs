use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::weyl::{p_k, weyl_sum_near};
use crate::arith::gauss::{direct_sum, e_real};
use crate::arith::weight::weight_w;
use crate::arith::ReducedFraction;
use crate::error::{Error, Result};
use crate::quad::{composite_complex, gauss_legendre};

const RULE_ORDER: usize = 10;
const MAX_DOUBLINGS: u32 = 8;
/// Richardson tolerance, relative to `P_k`.
pub const V_TOLERANCE: f64 = 1e-8;

/// `v_k(beta) = int_0^{P_k} e(gamma^k beta) d gamma`.
///
/// Integrated in `gamma` with `ceil(20 (1 + X|beta|))` Gauss–Legendre panels,
/// doubling until two successive values agree to `1e-8 P_k`.
pub fn v_integral(k: u32, x: f64, beta: f64) -> Result<Complex64> {
    if x.is_nan() || x <= 0.0 || beta.is_nan() || beta.abs() > 1.0 {
        return Err(Error::invalid(format!("v_integral needs X > 0 and |beta| <= 1, got X={x}, beta={beta}")));
    }
    let p = p_k(k, x);
    if beta == 0.0 {
        return Ok(Complex64::new(p, 0.0));
    }
    let rule = gauss_legendre(RULE_ORDER);
    let f = |g: f64| e_real(beta * g.powi(k as i32));
    let mut panels = (20.0 * (1.0 + x * beta.abs())).ceil() as usize;
    let mut prev = composite_complex(f, 0.0, p, panels, &rule);
    for _ in 0..MAX_DOUBLINGS {
        panels *= 2;
        let next = composite_complex(f, 0.0, p, panels, &rule);
        if (next - prev).norm() <= V_TOLERANCE * p {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::Integrity(format!("v_{k}({beta}) at X={x} did not converge after {MAX_DOUBLINGS} doublings")))
}

/// `|v_k(beta)| / (P_k (1 + X|beta|)^(-1/k))`, the implied constant in the
/// decay bound.
pub fn v_decay_ratio(k: u32, x: f64, beta: f64) -> Result<f64> {
    let v = v_integral(k, x, beta)?;
    Ok(v.norm() / (p_k(k, x) * (1.0 + x * beta.abs()).powf(-1.0 / k as f64)))
}

/// Half-width in `|q alpha - a|` of the widest major arcs, `X^(-1/2)/2`.
pub fn window(x: f64) -> f64 {
    0.5 / x.sqrt()
}

fn gauss(k: u32, frac: ReducedFraction) -> Complex64 {
    direct_sum(k, frac.q(), frac.a())
}

/// `f_k^*(a/q + beta) = q^-1 S_k(q,a) v_k(beta)`, for `|q beta| <= X^(-1/2)/2`.
pub fn f_star_offset(k: u32, x: f64, frac: ReducedFraction, beta: f64) -> Result<Complex64> {
    if (frac.q() as f64 * beta).abs() > window(x) * (1.0 + 1e-12) {
        return Err(Error::invalid(format!(
            "offset {beta} lies outside the major arc around {}/{} at X={x}",
            frac.a(),
            frac.q()
        )));
    }
    Ok(gauss(k, frac) / frac.q() as f64 * v_integral(k, x, beta)?)
}

/// [`f_star_offset`] at `alpha`, with `beta = alpha - a/q`.
pub fn f_star(k: u32, x: f64, frac: ReducedFraction, alpha: f64) -> Result<Complex64> {
    f_star_offset(k, x, frac, alpha - frac.value())
}

/// One comparison of `f_k` with its major-arc approximant.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApproximationSample {
    pub k: u32,
    pub q: u64,
    pub a: u64,
    pub beta: f64,
    pub f: Complex64,
    pub f_star: Complex64,
    /// `|f - f*| / (q^(1/2) (1 + X|beta|)^(1/2))`
    pub difference_ratio: f64,
    /// `|f*| / (w_k(q) P_k (1 + X|beta|)^(-1/k))`
    pub star_ratio: f64,
}

pub fn approximation_sample(k: u32, x: f64, frac: ReducedFraction, beta: f64) -> Result<ApproximationSample> {
    let f = weyl_sum_near(k, x, frac, beta);
    let fs = f_star_offset(k, x, frac, beta)?;
    let q = frac.q() as f64;
    let spread = 1.0 + x * beta.abs();
    Ok(ApproximationSample {
        k,
        q: frac.q(),
        a: frac.a(),
        beta,
        f,
        f_star: fs,
        difference_ratio: (f - fs).norm() / (q.sqrt() * spread.sqrt()),
        star_ratio: fs.norm() / (weight_w(k, frac.q()) * p_k(k, x) * spread.powf(-1.0 / k as f64)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_offset_gives_length() {
        assert_eq!(v_integral(2, 100.0, 0.0).unwrap(), Complex64::new(10.0, 0.0));
        assert_eq!(v_integral(4, 16.0, 0.0).unwrap(), Complex64::new(2.0, 0.0));
    }

    #[test]
    fn matches_brute_midpoint_quadrature() {
        let (k, x, beta) = (2u32, 100.0, 0.01);
        let n = 1_000_000;
        let h = 10.0 / n as f64;
        let brute: Complex64 = (0..n).map(|i| e_real(beta * ((i as f64 + 0.5) * h).powi(2)) * h).sum();
        assert!((v_integral(k, x, beta).unwrap() - brute).norm() < 1e-6);
    }

    #[test]
    fn fresnel_limit() {
        // int_0^inf e(beta g^2) dg = (1+i)/(4 sqrt(beta)); the remainder past P
        // is about 1/(2 pi beta P)
        let (x, beta) = (1e8, 1e-3);
        let v = v_integral(2, x, beta).unwrap();
        let limit = Complex64::new(1.0, 1.0) / (4.0 * beta.sqrt());
        assert!((v - limit).norm() < 2.0 / (std::f64::consts::TAU * beta * x.sqrt()));
    }

    #[test]
    fn decay_constant_is_moderate() {
        let r = v_decay_ratio(4, 1e4, 10.0 / 1e4).unwrap();
        assert!(r <= 3.0, "{r}");
        for beta in [1e-6, 1e-4, 1e-3, -2e-3] {
            assert!(v_decay_ratio(2, 1e6, beta).unwrap() <= 3.0);
        }
    }

    #[test]
    fn star_at_rational_points() {
        let frac = ReducedFraction::new(1, 3).unwrap();
        let at = f_star(4, 4096.0, frac, 1.0 / 3.0).unwrap();
        let want = direct_sum(4, 3, 1) / 3.0 * 8.0;
        assert!((at - want).norm() < 1e-12);
        let half = ReducedFraction::new(1, 2).unwrap();
        assert!(f_star(2, 4096.0, half, 0.5 + 1e-4).unwrap().norm() < 1e-12);
        assert!(f_star(2, 4096.0, frac, 0.4).is_err());
    }

    #[test]
    fn difference_diagnostic_is_finite() {
        let frac = ReducedFraction::new(1, 3).unwrap();
        let s = approximation_sample(4, 4096.0, frac, 1.0 / 4096.0).unwrap();
        assert!(s.difference_ratio.is_finite() && s.difference_ratio < 10.0);
        assert!(s.star_ratio.is_finite());
    }
}
