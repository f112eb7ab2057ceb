//! End-to-end acceptance run. Every criterion prints one PASS/FAIL line; the
//! test fails afterwards if any of them failed.

use std::io::Write;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wlab_core::arith::{gauss_sum_direct, gauss_sum_s2_closed};
use wlab_core::circle::{
    approximation_diagnostic, classify_arc, fitted_moment_exponent, moment_count, verify_orthogonality, ArcKind,
    DissectionParams, MajorLevel, Stratum,
};
use wlab_core::repcount::{brute_force_count, sieve_representations, SieveStrategy};
use wlab_core::scan::{scan, write_csv, ExponentFit, PsiSpec, ScanParams, ScanReport};
use wlab_core::singular::{singular_series_euler, singular_series_qsum, DepthPolicy};

const GAUSS_TOL: f64 = 1e-9;
const GAUSS_SECONDS: f64 = 30.0;
const ORTH_TOL: f64 = 1e-6;
const ORTH_SECONDS: f64 = 10.0;
const SERIES_REL_TOL: f64 = 0.01;
const SIXTH_MOMENT_MAX_EXPONENT: f64 = 3.6;
const ARC_SAMPLES: usize = 100_000;
/// Calibrated once at X = 65536, seed 7 (observed maxima 1.05 for k = 2,
/// 1.14 for k = 4) and frozen.
const DIFFERENCE_BOUND: f64 = 2.0;
const MEDIAN_SLACK: f64 = 1.10;
const SCAN_SECONDS: f64 = 600.0;

struct Outcome {
    failures: Vec<u32>,
}

impl Outcome {
    fn record(&mut self, id: u32, name: &str, ok: bool, detail: String) {
        // straight to the process stdout so the line shows without --nocapture
        let mut out = std::io::stdout().lock();
        writeln!(out, "criterion {id} [{name}]: {} - {detail}", if ok { "PASS" } else { "FAIL" }).unwrap();
        if !ok {
            self.failures.push(id);
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

fn gauss_equivalence() -> (bool, String) {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut pairs = 0u64;
    for q in 1..=1000u64 {
        for a in 1..=q {
            if gcd(a, q) != 1 {
                continue;
            }
            let c = gauss_sum_s2_closed(q, a as i64).unwrap().value;
            let d = gauss_sum_direct(2, q, a as i64).unwrap().value;
            worst = worst.max((c.re - d.re).abs()).max((c.im - d.im).abs());
            pairs += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    (worst < GAUSS_TOL && secs < GAUSS_SECONDS, format!("{pairs} pairs, max componentwise error {worst:.2e}, {secs:.1}s"))
}

fn oracle_equivalence() -> (bool, String) {
    let mut mismatches = 0;
    for s in [3, 4] {
        let table = sieve_representations(s, 5000, SieveStrategy::Ntt).unwrap();
        mismatches += (1..=5000).filter(|&n| table.get(n) != brute_force_count(s, n)).count();
    }
    let spots = [(3, 5, 1), (3, 8, 2), (4, 6, 1), (4, 20, 0)];
    let spots_ok = spots.iter().all(|&(s, n, want)| {
        sieve_representations(s, 100, SieveStrategy::Direct).unwrap().get(n) == want && brute_force_count(s, n) == want
    });
    (mismatches == 0 && spots_ok, format!("{mismatches} mismatches over n <= 5000, spot values ok: {spots_ok}"))
}

fn orthogonality() -> (bool, String) {
    let start = Instant::now();
    let a = verify_orthogonality(3, 128).unwrap();
    let b = verify_orthogonality(4, 64).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let worst = a.max_deviation.max(b.max_deviation);
    let ok = a.passed && b.passed && worst < ORTH_TOL && secs < ORTH_SECONDS;
    (ok, format!("max deviation {worst:.2e}, {secs:.2}s"))
}

fn singular_cross_method() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let ns: Vec<u64> = (0..20).map(|_| rng.random_range(1_000..=100_000)).collect();
    let mut worst = 0.0f64;
    let mut first_term_exact = true;
    for s in [3, 4] {
        for &n in &ns {
            first_term_exact &= singular_series_qsum(s, n, 1).unwrap().value == 1.0;
            let q = singular_series_qsum(s, n, 10_000).unwrap().value;
            let e = singular_series_euler(s, n, 1000, DepthPolicy::default()).unwrap().value;
            worst = worst.max((q - e).abs() / e.abs());
        }
    }
    (
        worst < SERIES_REL_TOL && first_term_exact,
        format!("40 (s, n) pairs, max relative gap {worst:.2e}, q = 1 partial sum exactly 1: {first_term_exact}"),
    )
}

/// Fourth-moment count by running over all 4-tuples.
fn slow_fourth_moment(p: u64) -> u128 {
    let mut count = 0;
    for a in 1..=p {
        for b in 1..=p {
            let lhs = a.pow(4) + b.pow(4);
            for c in 1..=p {
                for d in 1..=p {
                    count += u128::from(lhs == c.pow(4) + d.pow(4));
                }
            }
        }
    }
    count
}

fn moments() -> (bool, String) {
    let m190 = moment_count(4, 2, 10).unwrap();
    let slow_ok = (1..=12).all(|p| moment_count(4, 2, p).unwrap() == slow_fourth_moment(p));
    let ps: Vec<u64> = (10..=40).collect();
    let expo = fitted_moment_exponent(4, 3, &ps).unwrap();
    (
        m190 == 190 && slow_ok && expo <= SIXTH_MOMENT_MAX_EXPONENT,
        format!("count(4,2,10) = {m190}, slow enumeration agrees for P <= 12: {slow_ok}, sixth-moment exponent {expo:.3}"),
    )
}

/// Levels of `M(Q)` holding `alpha`, by trying every denominator.
fn levels_by_search(alpha: f64, params: &DissectionParams) -> Vec<MajorLevel> {
    let x = params.x();
    let top = params.half_sqrt_x().floor() as u64;
    let mut best = vec![f64::INFINITY; top as usize + 1];
    for q in 1..=top {
        let t = q as f64 * alpha;
        best[q as usize] = (t - t.round()).abs();
    }
    MajorLevel::ALL
        .into_iter()
        .filter(|&l| {
            let qv = params.level(l);
            (1..=(qv.floor() as u64).min(top)).any(|q| best[q as usize] <= qv / x)
        })
        .collect()
}

fn expected_kind(levels: &[MajorLevel]) -> Option<Stratum> {
    match levels.first() {
        Some(MajorLevel::R) => None,
        Some(MajorLevel::P4) => Some(Stratum::M4),
        Some(MajorLevel::Y) => Some(Stratum::M3),
        Some(MajorLevel::HalfSqrtX) => Some(Stratum::M2),
        None => Some(Stratum::M1),
    }
}

fn dissection() -> (bool, String) {
    let params = DissectionParams::new(1e8, 0.2, 0.05, 1.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut tally = [0usize; 5];
    let mut disagreements = 0;
    for _ in 0..ARC_SAMPLES {
        let alpha: f64 = rng.random();
        let label = classify_arc(alpha, &params);
        let searched = levels_by_search(alpha, &params);
        let slot = match label.kind {
            ArcKind::Major { .. } => 0,
            ArcKind::Minor { stratum } => stratum as usize + 1,
        };
        tally[slot] += 1;
        let consistent = match (label.kind, expected_kind(&searched)) {
            (ArcKind::Major { level: MajorLevel::R, .. }, None) => true,
            (ArcKind::Minor { stratum }, Some(want)) => stratum == want,
            _ => false,
        };
        if !consistent || label.major_levels != searched {
            disagreements += 1;
        }
    }
    let chain_rejected = DissectionParams::new(65536.0, 0.05, 0.05, 2.0).is_err()
        && DissectionParams::new(65536.0, 1.5, 0.05, 1.0).is_err();
    let x = params.x();
    let probes: [(f64, Option<Stratum>); 6] = [
        (0.5, None),
        (0.5 + 30.0 / x, Some(Stratum::M4)),
        (3.0 / 7.0, Some(Stratum::M4)),
        (500.0 / 997.0, Some(Stratum::M3)),
        (2000.0 / 4001.0, Some(Stratum::M2)),
        ((5f64.sqrt() - 1.0) / 2.0, Some(Stratum::M1)),
    ];
    let probes_ok = probes.iter().all(|&(alpha, want)| match (classify_arc(alpha, &params).kind, want) {
        (ArcKind::Major { level: MajorLevel::R, .. }, None) => true,
        (ArcKind::Minor { stratum }, Some(w)) => stratum == w,
        _ => false,
    });
    (
        disagreements == 0 && chain_rejected && probes_ok && tally.iter().sum::<usize>() == ARC_SAMPLES,
        format!(
            "{ARC_SAMPLES} draws (M(R), m1..m4) = {tally:?}, {disagreements} disagree with denominator search, \
             chain enforced: {chain_rejected}, probes ok: {probes_ok}"
        ),
    )
}

fn approximation_bound() -> (bool, String) {
    let a = approximation_diagnostic(2, 65536.0, 1000, 7).unwrap();
    let b = approximation_diagnostic(4, 65536.0, 1000, 7).unwrap();
    let worst = a.max_difference_ratio.max(b.max_difference_ratio);
    (
        worst < DIFFERENCE_BOUND,
        format!(
            "max ratio k=2 {:.3}, k=4 {:.3}, frozen bound {DIFFERENCE_BOUND}",
            a.max_difference_ratio, b.max_difference_ratio
        ),
    )
}

fn csv_bytes(report: &ScanReport) -> Vec<u8> {
    let mut buf = Vec::new();
    write_csv(report, &mut buf).unwrap();
    buf
}

fn fit_text(fit: &Option<ExponentFit>) -> String {
    match fit {
        Some(ExponentFit::AllClear) => "no exceptional n".into(),
        Some(ExponentFit::Slope { slope, blocks }) => format!("{slope:.3} over {blocks} blocks"),
        None => "too few blocks with exceptions".into(),
    }
}

fn scans() -> (bool, String) {
    let psi = PsiSpec::power(0.1).unwrap();
    let params = ScanParams::default();
    let in_pool = |threads: usize, s: u32| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| scan(s, 0, 1 << 18, psi, params).unwrap())
    };
    let start = Instant::now();
    let four = in_pool(2, 4);
    let secs = start.elapsed().as_secs_f64();
    let four_single = in_pool(1, 4);
    let deterministic = csv_bytes(&four) == csv_bytes(&four_single);

    let medians: Vec<(u64, f64)> = four
        .ranges
        .iter()
        .filter(|b| b.x >= 1 << 14)
        .map(|b| (b.x, b.median_relative_error.unwrap()))
        .collect();
    let non_increasing = medians.len() == 5 && medians.windows(2).all(|w| w[1].1 <= MEDIAN_SLACK * w[0].1);
    let three = in_pool(2, 3);
    let median_text: Vec<String> = medians.iter().map(|(x, m)| format!("2^{}:{m:.4}", x.trailing_zeros())).collect();
    (
        non_increasing && deterministic && secs < SCAN_SECONDS,
        format!(
            "(a) s=4 medians [{}] non-increasing within 10%: {non_increasing}; (b) CSV identical on 1 and 2 threads: \
             {deterministic}; (c) fitted exponents s=3 {} (theorem {}), s=4 {} (theorem {}); s=4 scan to 2^18 took {secs:.1}s",
            median_text.join(" "),
            fit_text(&three.fitted_exponent),
            three.theorem_exponent,
            fit_text(&four.fitted_exponent),
            four.theorem_exponent,
        ),
    )
}

#[test]
fn acceptance() {
    let cache = tempfile::tempdir().unwrap();
    std::env::set_var(wlab_core::scan::CACHE_ENV, cache.path());
    let mut out = Outcome { failures: Vec::new() };
    let criteria: [(u32, &str, fn() -> (bool, String)); 8] = [
        (1, "Gauss-sum closed form vs direct", gauss_equivalence),
        (2, "sieve vs brute force", oracle_equivalence),
        (3, "orthogonality recovery", orthogonality),
        (4, "singular series q-sum vs Euler product", singular_cross_method),
        (5, "moment counts", moments),
        (6, "arc dissection", dissection),
        (7, "major-arc approximation bound", approximation_bound),
        (8, "exceptional-set scan", scans),
    ];
    for (id, name, run) in criteria {
        let (ok, detail) = run();
        out.record(id, name, ok, detail);
    }
    assert!(out.failures.is_empty(), "failed criteria: {:?}", out.failures);
}
