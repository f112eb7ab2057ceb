//! Numerical laboratory for sums of two squares and three or four
//! biquadrates: exact counts `R_s(n)`, Gauss sums, the singular series and
//! its main term, Weyl sums and the major/minor arc dissection, and a scanner
//! for integers where the count strays from the predicted main term.

pub mod arith;
pub mod circle;
pub mod error;
pub mod quad;
pub mod repcount;
pub mod scan;
pub mod singular;

pub use error::{Error, Result};

pub use arith::{
    factorize, gauss_sum_direct, gauss_sum_s2_closed, jacobi, weight_w, FactoredInteger,
    GaussMethod, GaussSumValue, ReducedFraction,
};
pub use repcount::{brute_force_count, sieve_representations, RepTable, SieveStrategy};
pub use singular::{
    a_term, local_density, main_term, singular_series_euler, singular_series_qsum, DepthPolicy,
    MainTermResult, SingularSeriesResult,
};

/// Version string recorded in exported reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub(crate) fn check_s(s: u32) -> Result<()> {
    if s != 3 && s != 4 {
        return Err(Error::invalid(format!("s must be 3 or 4, got {s}")));
    }
    Ok(())
}
