//! Exact integer and complex primitives.

pub mod factor;
pub mod gauss;
pub mod jacobi;
pub mod modular;
pub mod weight;

pub use factor::{factorize, is_prime, FactoredInteger};
pub use gauss::{
    e_frac, e_real, gauss_sum_direct, gauss_sum_s2_closed, GaussMethod, GaussSumValue,
    ReducedFraction,
};
pub use jacobi::jacobi;
pub use weight::weight_w;
