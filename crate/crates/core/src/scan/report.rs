use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::psi::PsiSpec;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeviationRecord {
    pub n: u64,
    #[serde(rename = "R")]
    pub r: u64,
    pub main: f64,
    pub singular: f64,
    /// `|R - main| / n^(s/4)`
    pub relative_deviation: f64,
    /// `relative_deviation > 1/psi(n)`
    pub exceptional: bool,
    /// The truncation tail of the singular series could flip `exceptional`.
    pub borderline: bool,
    /// `n < s + 2`, where no representation exists.
    pub trivial_range: bool,
}

/// Aggregates over the dyadic block `(X/2, X]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockSummary {
    pub x: u64,
    pub count: u64,
    pub exceptional_count: u64,
    /// Exceptional `n` in `[1, X]` within the scanned range.
    pub cumulative_exceptional: u64,
    pub borderline_count: u64,
    pub median_relative_error: Option<f64>,
    pub psi_at_x: f64,
    /// `n` with singular series below the near-zero threshold.
    pub near_zero_singular: Vec<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExponentFit {
    /// No block has an exceptional `n`.
    AllClear,
    Slope { slope: f64, blocks: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanProvenance {
    pub x_min: u64,
    pub x_max: u64,
    pub q_max: u64,
    pub near_zero_threshold: f64,
    pub singular_method: String,
    pub version: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub s: u32,
    pub psi: PsiSpec,
    pub provenance: ScanProvenance,
    pub ranges: Vec<BlockSummary>,
    /// `None` when the fit needs more blocks with exceptional `n` than exist.
    pub fitted_exponent: Option<ExponentFit>,
    /// The exponent of `X` in the theorem's bound, for comparison only.
    pub theorem_exponent: f64,
    pub records: Vec<DeviationRecord>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExportFormat {
    Csv,
    Json,
}

impl std::str::FromStr for ExportFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ExportFormat::Csv),
            "json" => Ok(ExportFormat::Json),
            _ => Err(Error::invalid(format!("unknown format {s:?}, expected csv or json"))),
        }
    }
}

pub const CSV_HEADER: &str = "n,R,singular,main,rel_dev,exceptional";

/// The CSV form: `# key=value` provenance lines, the column header, then
/// one row per record.
pub fn write_csv<W: Write>(report: &ScanReport, mut out: W) -> Result<()> {
    let p = &report.provenance;
    writeln!(out, "# s={}", report.s)?;
    writeln!(out, "# psi={}", report.psi)?;
    writeln!(out, "# x_min={}", p.x_min)?;
    writeln!(out, "# x_max={}", p.x_max)?;
    writeln!(out, "# singular_method={}", p.singular_method)?;
    writeln!(out, "# q_max={}", p.q_max)?;
    writeln!(out, "# near_zero_threshold={}", p.near_zero_threshold)?;
    writeln!(out, "# version={}", p.version)?;
    writeln!(out, "{CSV_HEADER}")?;
    for r in &report.records {
        writeln!(out, "{},{},{},{},{},{}", r.n, r.r, r.singular, r.main, r.relative_deviation, r.exceptional as u8)?;
    }
    out.flush()?;
    Ok(())
}

pub fn export_report(report: &ScanReport, path: &Path, format: ExportFormat) -> Result<()> {
    let out = BufWriter::new(File::create(path)?);
    match format {
        ExportFormat::Csv => write_csv(report, out),
        ExportFormat::Json => {
            let mut out = out;
            serde_json::to_writer_pretty(&mut out, report)?;
            out.flush()?;
            Ok(())
        }
    }
}

pub fn import_report(path: &Path) -> Result<ScanReport> {
    let file = std::io::BufReader::new(File::open(path)?);
    Ok(serde_json::from_reader(file)?)
}
