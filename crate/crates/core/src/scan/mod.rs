//! The exceptional-set experiment: exact counts against the predicted main
//! term over dyadic blocks, for a chosen tolerance `psi`.

mod cache;
mod psi;
mod report;
#[allow(clippy::module_inception)]
mod scan;

pub use cache::{cache_path, load_or_build_in, load_or_build_tables, CACHE_ENV};
pub use psi::{PsiSpec, MAX_DELTA};
pub use report::{
    export_report, import_report, write_csv, BlockSummary, DeviationRecord, ExponentFit, ExportFormat,
    ScanProvenance, ScanReport, CSV_HEADER,
};
pub use scan::{
    fit_exponent, is_exceptional, least_squares_slope, scan, theorem_exponent, ScanParams, MAX_SCAN_X,
};
