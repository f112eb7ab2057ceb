//! Exact representation counts `R_s(n)` of `n = x1^2 + x2^2 + y1^4 + ... + ys^4`
//! in positive integers.

mod brute;
pub mod format;
pub mod ntt;
mod sieve;
mod tables;

pub use brute::brute_force_count;
pub use format::{read_rep_table, write_rep_table, RepTableWriter};
pub use sieve::{
    sieve_representations, stream_representations, RepTable, SieveStrategy, MAX_DENSE_X,
    MAX_STREAMED_X, STREAM_BLOCK,
};
pub use tables::{build_biquadrate_table, build_two_square_table, BiquadrateSumTable, TwoSquareTable};
