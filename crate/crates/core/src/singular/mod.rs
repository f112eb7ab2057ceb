//! The singular series `S_s(n) = sum_q sum_(a,q)=1 q^(-2-s) S_2(q,a)^2 S_4(q,a)^s e(-na/q)`,
//! by a truncated sum over `q` and, independently, as a product of local
//! densities obtained by counting solutions modulo prime powers.

mod aterm;
mod euler;
mod local;
mod main_term;
mod prime_power;
mod qsum;

use serde::{Deserialize, Serialize};

pub use aterm::{a_term, a_term_with, IMAG_TOLERANCE};
pub use euler::{singular_series_euler, DepthPolicy};
pub use local::{
    count_solutions, counting_density, local_density, LocalFactor, MAX_LOCAL_MODULUS,
    ROUTE_TOLERANCE, STABILITY_TOLERANCE,
};
pub use main_term::{
    constant_c, gamma_5_4_quadrature, main_term, verify_gamma_constant, MainTermResult, C3, C4,
    GAMMA_5_4_POW4,
};
pub use prime_power::{global_cache, GaussCache};
pub use qsum::{a_terms_up_to, singular_series_qsum, QSumTables, DEFAULT_Q_MAX, SCAN_Q_MAX};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SeriesMethod {
    QSum { q_max: u64 },
    Euler { p_max: u64, h_max: u32 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SingularSeriesResult {
    pub s: u32,
    pub n: u64,
    pub value: f64,
    pub method: SeriesMethod,
    pub tail_estimate: f64,
    pub local_factors: Option<Vec<LocalFactor>>,
}
