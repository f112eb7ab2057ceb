//! Weyl sums, their major-arc approximants, the arc dissection, moment
//! counts and the Fourier form of the representation count.

mod arcs;
mod diagnostics;
mod moments;
mod orth;
mod oscillatory;
mod weyl;

pub use arcs::{classify_arc, convergents, reduce_alpha, ArcKind, ArcLabel, DissectionParams, MajorLevel, Stratum};
pub use diagnostics::{
    approximation_diagnostic, minor_arc_sup_diagnostic, sample_major_arc_points, ApproximationSummary,
    MinorArcReport, weyl_sample, WeylSumSample,
};
pub use moments::{fitted_moment_exponent, moment_count, MAX_MOMENT_P};
pub use orth::{verify_orthogonality, OrthogonalityReport, MAX_ORTH_X, ORTH_TOLERANCE};
pub use oscillatory::{
    approximation_sample, f_star, f_star_offset, v_decay_ratio, v_integral, window, ApproximationSample,
    V_TOLERANCE,
};
pub use weyl::{p_k, p_k_floor, weyl_sum, weyl_sum_near};
