//! The predicted main term `c_s Γ(5/4)^4 S_s(n) n^(s/4)`.

use std::f64::consts::{PI, SQRT_2};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::SingularSeriesResult;
use crate::error::{Error, Result};
use crate::quad::composite;

/// `c_3 = (2/3) sqrt 2`.
pub const C3: f64 = 2.0 / 3.0 * SQRT_2;
/// `c_4 = pi / 4`.
pub const C4: f64 = PI / 4.0;
/// `Γ(5/4)^4 = 0.67496978931117301211...`
pub const GAMMA_5_4_POW4: f64 = 0.674_969_789_311_173;

pub fn constant_c(s: u32) -> f64 {
    match s {
        3 => C3,
        4 => C4,
        _ => panic!("c_s is defined for s in {{3,4}}"),
    }
}

/// `Γ(5/4) = ∫_0^∞ t^(1/4) e^(-t) dt`; with `t = u^4` the integrand
/// `4 u^4 exp(-u^4)` is smooth and negligible beyond `u = 7`.
pub fn gamma_5_4_quadrature() -> f64 {
    composite(|u| 4.0 * u.powi(4) * (-u.powi(4)).exp(), 0.0, 7.0, 400, 10)
}

/// Compares [`GAMMA_5_4_POW4`] against quadrature once per process.
pub fn verify_gamma_constant() -> Result<()> {
    static CHECK: OnceLock<f64> = OnceLock::new();
    let quad = *CHECK.get_or_init(|| gamma_5_4_quadrature().powi(4));
    if (quad - GAMMA_5_4_POW4).abs() > 1e-12 {
        return Err(Error::Integrity(format!("Γ(5/4)^4 self-check failed: quadrature gives {quad}")));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MainTermResult {
    pub s: u32,
    pub n: u64,
    pub singular_series: SingularSeriesResult,
    pub main_term: f64,
    pub constant_c: f64,
    pub gamma54_pow4: f64,
}

pub fn main_term(s: u32, n: u64, ss: SingularSeriesResult) -> Result<MainTermResult> {
    crate::check_s(s)?;
    if ss.s != s || ss.n != n {
        return Err(Error::invalid(format!(
            "singular series was computed for (s={}, n={}), not (s={s}, n={n})",
            ss.s, ss.n
        )));
    }
    let c = constant_c(s);
    let main = c * GAMMA_5_4_POW4 * ss.value * (n as f64).powf(s as f64 / 4.0);
    Ok(MainTermResult { s, n, singular_series: ss, main_term: main, constant_c: c, gamma54_pow4: GAMMA_5_4_POW4 })
}
