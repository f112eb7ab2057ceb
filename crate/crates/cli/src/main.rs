//! `wlab`: command-line front end to the laboratory.
//!
//! Exit status is 0 on success, 2 on a numerical-integrity failure, 3 when a
//! size or counter capacity is exceeded, and 1 for any other error
//! (including bad arguments).

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "wlab", version, about = "Sums of two squares and biquadrates: counts, singular series, arcs, scans")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GaussMethodArg {
    Direct,
    Closed,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SeriesMethodArg {
    Qsum,
    Euler,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Direct,
    Ntt,
    Streamed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Gauss sum S_k(q,a) as `re,im,method`.
    Gauss {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        q: u64,
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
        #[arg(long, value_enum, default_value = "both")]
        method: GaussMethodArg,
    },
    /// Sieve R_s(n) for n <= X into a binary table.
    Sieve {
        #[arg(long)]
        s: u32,
        #[arg(long, visible_alias = "x")]
        xmax: u64,
        #[arg(long)]
        out: PathBuf,
        /// Defaults to ntt up to 10^7 and streamed beyond.
        #[arg(long, value_enum)]
        strategy: Option<StrategyArg>,
    },
    /// R_s(n) for one n, by direct enumeration.
    Count {
        #[arg(long)]
        s: u32,
        #[arg(long)]
        n: u64,
        /// Read the count off a sieved table instead.
        #[arg(long)]
        sieve: bool,
    },
    /// Singular series as `n,method,value,tail,params`.
    Singular {
        #[arg(long)]
        s: u32,
        #[arg(long)]
        n: u64,
        #[arg(long, value_enum, default_value = "qsum")]
        method: SeriesMethodArg,
        #[arg(long, default_value_t = wlab_core::singular::DEFAULT_Q_MAX)]
        qmax: u64,
        #[arg(long, default_value_t = 1000)]
        pmax: u64,
        /// Base Hensel depth for every prime (default 8 for p = 2, 4 otherwise).
        #[arg(long)]
        hmax: Option<u32>,
    },
    /// Main term as `n,singular,main_term`.
    MainTerm {
        #[arg(long)]
        s: u32,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = wlab_core::singular::DEFAULT_Q_MAX)]
        qmax: u64,
    },
    /// Arc label of alpha (a decimal or a fraction a/q).
    Arcs {
        #[arg(long)]
        x: f64,
        #[arg(long, default_value_t = 0.05)]
        nu: f64,
        #[arg(long, default_value_t = 0.05)]
        tau: f64,
        #[arg(long, default_value = "const:1")]
        psi: String,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
    },
    /// Even moments of f_k as `P,count`.
    Moments {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        pmax: u64,
        #[arg(long, default_value_t = 1)]
        pmin: u64,
    },
    /// Recover R_s(n), n <= X, from f_2^2 f_4^s on a grid.
    VerifyOrth {
        #[arg(long)]
        s: u32,
        #[arg(long)]
        x: u64,
    },
    /// Weyl sum f_k(alpha), optionally against its major-arc approximant.
    Weyl {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        x: f64,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long)]
        star: bool,
    },
    /// Exceptional-set scan over dyadic blocks.
    Scan {
        #[arg(long)]
        s: u32,
        #[arg(long, default_value_t = 0)]
        xmin: u64,
        #[arg(long)]
        xmax: u64,
        #[arg(long)]
        psi: String,
        #[arg(long, default_value_t = wlab_core::singular::SCAN_Q_MAX)]
        qmax: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
        #[arg(long)]
        threads: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match commands::run(cli.command, &mut std::io::stdout().lock()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("wlab: {e}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
