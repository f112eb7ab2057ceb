use std::fs::File;
use std::io::{BufWriter, Write};

use wlab_core::arith::{gauss_sum_direct, gauss_sum_s2_closed, ReducedFraction};
use wlab_core::circle::{
    classify_arc, moment_count, MAX_MOMENT_P, verify_orthogonality, weyl_sum, weyl_sum_near, ArcKind, DissectionParams,
    f_star_offset,
};
use wlab_core::repcount::{
    brute_force_count, sieve_representations, stream_representations, write_rep_table, RepTableWriter,
    SieveStrategy, MAX_DENSE_X,
};
use wlab_core::scan::{export_report, scan, write_csv, ExponentFit, ExportFormat, PsiSpec, ScanParams};
use wlab_core::singular::{main_term, singular_series_euler, singular_series_qsum, DepthPolicy, SeriesMethod};
use wlab_core::{Error, Result};

use crate::{Command, FormatArg, GaussMethodArg, SeriesMethodArg, StrategyArg};

pub fn exit_code(e: &Error) -> u8 {
    if e.is_integrity() {
        2
    } else if e.is_capacity() {
        3
    } else {
        1
    }
}

/// `0.25`, `-1.5` or `3/7`.
fn parse_alpha(s: &str) -> Result<(f64, Option<(i64, u64)>)> {
    if let Some((a, q)) = s.split_once('/') {
        let a: i64 = a.trim().parse().map_err(|_| Error::InvalidInput(format!("bad numerator in {s:?}")))?;
        let q: u64 = q.trim().parse().map_err(|_| Error::InvalidInput(format!("bad denominator in {s:?}")))?;
        if q == 0 {
            return Err(Error::InvalidInput("zero denominator".into()));
        }
        return Ok((a as f64 / q as f64, Some((a, q))));
    }
    let v: f64 = s.trim().parse().map_err(|_| Error::InvalidInput(format!("bad alpha {s:?}")))?;
    Ok((v, None))
}

fn params_text(m: &SeriesMethod) -> String {
    match m {
        SeriesMethod::QSum { q_max } => format!("q_max={q_max}"),
        SeriesMethod::Euler { p_max, h_max } => format!("p_max={p_max};h_max={h_max}"),
    }
}

pub fn run(cmd: Command, out: &mut impl Write) -> Result<()> {
    match cmd {
        Command::Gauss { k, q, a, method } => {
            writeln!(out, "re,im,method")?;
            let direct = || gauss_sum_direct(k, q, a);
            let closed = || {
                if k != 2 {
                    return Err(Error::InvalidInput("closed form exists only for k = 2".into()));
                }
                gauss_sum_s2_closed(q, a)
            };
            match method {
                GaussMethodArg::Direct => {
                    let v = direct()?.value;
                    writeln!(out, "{},{},direct", v.re, v.im)?;
                }
                GaussMethodArg::Closed => {
                    let v = closed()?.value;
                    writeln!(out, "{},{},closed", v.re, v.im)?;
                }
                GaussMethodArg::Both => {
                    let d = direct()?.value;
                    let c = closed()?.value;
                    writeln!(out, "{},{},direct", d.re, d.im)?;
                    writeln!(out, "{},{},closed", c.re, c.im)?;
                    writeln!(out, "{},{},difference", (d.re - c.re).abs(), (d.im - c.im).abs())?;
                }
            }
        }
        Command::Sieve { s, xmax: x, out: path, strategy } => {
            let strategy = match strategy {
                Some(StrategyArg::Direct) => SieveStrategy::Direct,
                Some(StrategyArg::Ntt) => SieveStrategy::Ntt,
                Some(StrategyArg::Streamed) => SieveStrategy::Streamed,
                None if x > MAX_DENSE_X => SieveStrategy::Streamed,
                None => SieveStrategy::Ntt,
            };
            if strategy == SieveStrategy::Streamed {
                // Blocks go straight to disk; the full table never sits in memory.
                let mut writer = RepTableWriter::new(BufWriter::new(File::create(&path)?), s, x)?;
                stream_representations(s, x, 1 << 22, |start, block| {
                    let block = if start == 0 { &block[1..] } else { block };
                    writer.push(block)
                })?;
                writer.finish()?.flush()?;
            } else {
                write_rep_table(&sieve_representations(s, x, strategy)?, &path)?;
            }
            writeln!(out, "wrote R_{s}(n) for n <= {x} to {}", path.display())?;
        }
        Command::Count { s, n, sieve } => {
            if !matches!(s, 3 | 4) || n == 0 {
                return Err(Error::InvalidInput(format!("need s in {{3,4}} and n >= 1, got s={s} n={n}")));
            }
            let r = if sieve { sieve_representations(s, n, SieveStrategy::Direct)?.get(n) } else { brute_force_count(s, n) };
            writeln!(out, "{r}")?;
        }
        Command::Singular { s, n, method, qmax, pmax, hmax } => {
            let depth = hmax.map_or_else(DepthPolicy::default, |h| DepthPolicy { two: h, odd: h, adaptive: true });
            let mut results = Vec::new();
            if matches!(method, SeriesMethodArg::Qsum | SeriesMethodArg::Both) {
                results.push(("qsum", singular_series_qsum(s, n, qmax)?));
            }
            if matches!(method, SeriesMethodArg::Euler | SeriesMethodArg::Both) {
                results.push(("euler", singular_series_euler(s, n, pmax, depth)?));
            }
            writeln!(out, "n,method,value,tail,params")?;
            for (name, r) in results {
                writeln!(out, "{n},{name},{},{},{}", r.value, r.tail_estimate, params_text(&r.method))?;
            }
        }
        Command::MainTerm { s, n, qmax } => {
            let m = main_term(s, n, singular_series_qsum(s, n, qmax)?)?;
            writeln!(out, "n,singular,main_term")?;
            writeln!(out, "{n},{},{}", m.singular_series.value, m.main_term)?;
        }
        Command::Arcs { x, nu, tau, psi, alpha } => {
            let psi: PsiSpec = psi.parse()?;
            let params = DissectionParams::new(x, nu, tau, psi.eval(x))?;
            let (alpha, _) = parse_alpha(&alpha)?;
            let label = classify_arc(alpha, &params);
            let kind = match label.kind {
                ArcKind::Major { level, .. } => format!("major:{level:?}"),
                ArcKind::Minor { stratum } => format!("minor:{stratum:?}").to_lowercase(),
            };
            let approx = label
                .approximant
                .map_or_else(|| "none".to_string(), |(f, beta)| format!("{}/{} beta={beta:e}", f.a(), f.q()));
            let levels: Vec<String> = label.major_levels.iter().map(|l| format!("{l:?}")).collect();
            writeln!(
                out,
                "alpha={alpha} arc={kind} approximant={approx} major_levels=[{}] R={} P4={} Y={} unit_interval=(R/X,1+R/X] alpha_mod_1=true",
                levels.join(","),
                params.r(),
                params.p4(),
                params.y()
            )?;
        }
        Command::Moments { k, m, pmax, pmin } => {
            if pmax > MAX_MOMENT_P || pmin > pmax {
                return Err(Error::InvalidInput(format!("need pmin <= pmax <= {MAX_MOMENT_P}")));
            }
            writeln!(out, "P,count")?;
            for p in pmin.max(1)..=pmax {
                writeln!(out, "{p},{}", moment_count(k, m, p)?)?;
            }
        }
        Command::VerifyOrth { s, x } => {
            let r = verify_orthogonality(s, x)?;
            let verdict = if r.passed { "pass" } else { "fail" };
            writeln!(out, "{verdict} s={s} X={x} grid={} max_deviation={:e}", r.grid, r.max_deviation)?;
            if !r.passed {
                return Err(Error::Integrity(format!("orthogonality deviation {:e}", r.max_deviation)));
            }
        }
        Command::Weyl { k, x, alpha, star } => {
            if !matches!(k, 2 | 4) {
                return Err(Error::InvalidInput(format!("k must be 2 or 4, got {k}")));
            }
            let (alpha_f, exact) = parse_alpha(&alpha)?;
            writeln!(out, "alpha,re_f,im_f,re_fstar,im_fstar,abs_difference,bound_ratio")?;
            if !star {
                let f = weyl_sum(k, x, alpha_f);
                writeln!(out, "{alpha_f},{},{},,,,", f.re, f.im)?;
                return Ok(());
            }
            // The approximant comes from the arc classifier; an exact a/q
            // input is used as is.
            let params = DissectionParams::new(x, 0.05, 0.05, 1.0)?;
            let approx = match exact {
                Some((a, q)) => {
                    let a = a.rem_euclid(q as i64) as u64;
                    let g = gcd(a, q);
                    let (a, q) = (a / g, q / g);
                    Some((ReducedFraction::new(if a == 0 { q } else { a }, q)?, 0.0))
                }
                None => classify_arc(alpha_f, &params).approximant,
            };
            let Some((frac, beta)) = approx else {
                let f = weyl_sum(k, x, alpha_f);
                writeln!(out, "{alpha_f},{},{},,,,", f.re, f.im)?;
                return Ok(());
            };
            let f = weyl_sum_near(k, x, frac, beta);
            let fs = f_star_offset(k, x, frac, beta)?;
            let diff = (f - fs).norm();
            let ratio = diff / ((frac.q() as f64).sqrt() * (1.0 + x * beta.abs()).sqrt());
            writeln!(out, "{alpha_f},{},{},{},{},{diff},{ratio}", f.re, f.im, fs.re, fs.im)?;
        }
        Command::Scan { s, xmin, xmax, psi, qmax, out: path, format, threads } => {
            let psi: PsiSpec = psi.parse()?;
            let params = ScanParams { q_max: qmax, ..ScanParams::default() };
            let job = || scan(s, xmin, xmax, psi, params);
            let report = match threads {
                Some(t) => rayon::ThreadPoolBuilder::new()
                    .num_threads(t)
                    .build()
                    .map_err(|e| Error::InvalidInput(e.to_string()))?
                    .install(job)?,
                None => job()?,
            };
            let format = match format {
                FormatArg::Csv => ExportFormat::Csv,
                FormatArg::Json => ExportFormat::Json,
            };
            match path {
                Some(p) => export_report(&report, &p, format)?,
                None if format == ExportFormat::Csv => write_csv(&report, &mut *out)?,
                None => {
                    serde_json::to_writer_pretty(&mut *out, &report)?;
                    writeln!(out)?;
                }
            }
            let fit = match report.fitted_exponent {
                Some(ExponentFit::AllClear) => "all-clear".to_string(),
                Some(ExponentFit::Slope { slope, blocks }) => format!("{slope:.4} over {blocks} blocks"),
                None => "insufficient data".to_string(),
            };
            let exceptional: u64 = report.ranges.iter().map(|b| b.exceptional_count).sum();
            eprintln!(
                "s={s} psi={psi} n in ({xmin},{xmax}]: {exceptional} exceptional; fitted exponent {fit} (theorem: {})",
                report.theorem_exponent
            );
        }
    }
    Ok(())
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
