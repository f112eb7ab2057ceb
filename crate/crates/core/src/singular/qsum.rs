//! Truncated `q`-sum of the singular series.

use super::aterm::{a_term_prime_power, a_term_residues};
use super::prime_power::{global_cache, GaussCache};
use super::{SeriesMethod, SingularSeriesResult};
use crate::arith::factor::smallest_prime_factors;
use crate::error::{Error, Result};

/// Default truncation for single-`n` queries.
pub const DEFAULT_Q_MAX: u64 = 10_000;
/// Default truncation in scans.
pub const SCAN_Q_MAX: u64 = 2048;

/// Prime-power decomposition data for every `q <= q_max`.
#[derive(Debug, Clone)]
struct Moduli {
    q_max: u64,
    /// For each `q >= 2`: (largest power of its smallest prime dividing q, index of that prime power).
    head: Vec<(u32, u32)>,
    /// `(p, h)` for every prime power `<= q_max`, indexed as in `head`.
    prime_powers: Vec<(u64, u32)>,
}

impl Moduli {
    fn new(q_max: u64) -> Self {
        let spf = smallest_prime_factors(q_max as usize);
        let mut prime_powers = Vec::new();
        let mut index_of = vec![u32::MAX; q_max as usize + 1];
        for p in 2..=q_max {
            if spf[p as usize] as u64 != p {
                continue;
            }
            let (mut pp, mut h) = (p, 1u32);
            while pp <= q_max {
                index_of[pp as usize] = prime_powers.len() as u32;
                prime_powers.push((p, h));
                pp = match pp.checked_mul(p) {
                    Some(v) => v,
                    None => break,
                };
                h += 1;
            }
        }
        let mut head = vec![(0u32, 0u32); q_max as usize + 1];
        for q in 2..=q_max as usize {
            let p = spf[q] as usize;
            let mut pp = p;
            while q % (pp * p) == 0 {
                pp *= p;
            }
            head[q] = (pp as u32, index_of[pp]);
        }
        Self { q_max, head, prime_powers }
    }

    /// Assembles the multiplicative `A(q)` for all `q <= q_max` from its
    /// prime-power values.
    fn assemble(&self, at_prime_power: &[f64]) -> Vec<f64> {
        let mut a = vec![0.0; self.q_max as usize + 1];
        if self.q_max >= 1 {
            a[1] = 1.0;
        }
        for q in 2..=self.q_max as usize {
            let (pp, idx) = self.head[q];
            a[q] = at_prime_power[idx as usize] * a[q / pp as usize];
        }
        a
    }
}

fn summarize(s: u32, n: u64, q_max: u64, a: &[f64]) -> SingularSeriesResult {
    let value: f64 = a[1..].iter().sum();
    let expo = 1.0 + s as f64 / 4.0;
    let c = (q_max / 2 + 1..=q_max)
        .map(|q| a[q as usize].abs() * (q as f64).powf(expo))
        .fold(0.0, f64::max)
        * 4.0
        / s as f64;
    SingularSeriesResult {
        s,
        n,
        value,
        method: SeriesMethod::QSum { q_max },
        tail_estimate: c * (q_max as f64).powf(-(s as f64) / 4.0),
        local_factors: None,
    }
}

/// `A(q, n)` for `q = 1..=q_max` (index 0 unused), built from the
/// prime-power terms by multiplicativity.
pub fn a_terms_up_to(cache: &GaussCache, s: u32, n: u64, q_max: u64) -> Result<Vec<f64>> {
    crate::check_s(s)?;
    if q_max == 0 {
        return Err(Error::invalid("q_max must be at least 1"));
    }
    let moduli = Moduli::new(q_max);
    let pp: Vec<f64> = moduli
        .prime_powers
        .iter()
        .map(|&(p, h)| a_term_prime_power(&cache.get(p, h), s, n))
        .collect::<Result<_>>()?;
    Ok(moduli.assemble(&pp))
}

/// `sum_{q <= q_max} A(q, n)` with a heuristic tail estimate
/// `C q_max^(-s/4)`, `C` fitted on `q` in `(q_max/2, q_max]`.
pub fn singular_series_qsum(s: u32, n: u64, q_max: u64) -> Result<SingularSeriesResult> {
    let a = a_terms_up_to(global_cache(), s, n, q_max)?;
    Ok(summarize(s, n, q_max, &a))
}

/// Residue tables `A(p^h, r)` for every prime power up to `q_max`, so that
/// the truncated series for any `n` costs `O(q_max)`.
#[derive(Debug, Clone)]
pub struct QSumTables {
    s: u32,
    moduli: Moduli,
    /// `residues[i][r] = A(p^h, r)` for the i-th prime power.
    residues: Vec<Vec<f64>>,
}

impl QSumTables {
    pub fn build(cache: &GaussCache, s: u32, q_max: u64) -> Result<Self> {
        crate::check_s(s)?;
        if q_max == 0 {
            return Err(Error::invalid("q_max must be at least 1"));
        }
        use rayon::prelude::*;
        let moduli = Moduli::new(q_max);
        let residues = moduli
            .prime_powers
            .par_iter()
            .map(|&(p, h)| a_term_residues(&cache.get(p, h), s))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { s, moduli, residues })
    }

    pub(crate) fn from_parts(s: u32, q_max: u64, residues: Vec<Vec<f64>>) -> Result<Self> {
        let moduli = Moduli::new(q_max);
        let ok = residues.len() == moduli.prime_powers.len()
            && residues.iter().zip(&moduli.prime_powers).all(|(r, &(p, h))| r.len() as u64 == p.pow(h));
        if !ok {
            return Err(Error::Format("residue tables do not match q_max".into()));
        }
        Ok(Self { s, moduli, residues })
    }

    pub(crate) fn residues(&self) -> &[Vec<f64>] {
        &self.residues
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn q_max(&self) -> u64 {
        self.moduli.q_max
    }

    pub fn evaluate(&self, n: u64) -> SingularSeriesResult {
        let pp: Vec<f64> = self
            .moduli
            .prime_powers
            .iter()
            .zip(&self.residues)
            .map(|(&(p, h), table)| table[(n % p.pow(h)) as usize])
            .collect();
        let a = self.moduli.assemble(&pp);
        summarize(self.s, n, self.moduli.q_max, &a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::singular::a_term;

    #[test]
    fn first_term_is_one() {
        let r = singular_series_qsum(3, 77, 1).unwrap();
        assert_eq!(r.value, 1.0);
        let r2 = singular_series_qsum(3, 5, 2).unwrap();
        assert_eq!(r2.value, 1.0);
    }

    #[test]
    fn multiplicative_assembly_matches_literal_terms() {
        let cache = GaussCache::new();
        for s in [3, 4] {
            for n in [5u64, 360, 2047] {
                let a = a_terms_up_to(&cache, s, n, 240).unwrap();
                for q in 1..=240u64 {
                    let lit = a_term(s, n, q).unwrap();
                    assert!((a[q as usize] - lit).abs() < 1e-12, "s={s} n={n} q={q}");
                }
            }
        }
    }

    #[test]
    fn tables_reproduce_direct_series() {
        let cache = GaussCache::new();
        let t = QSumTables::build(&cache, 4, 300).unwrap();
        for n in [6u64, 1000, 65_537] {
            let direct = summarize(4, n, 300, &a_terms_up_to(&cache, 4, n, 300).unwrap());
            let fast = t.evaluate(n);
            assert!((direct.value - fast.value).abs() < 1e-12);
        }
    }
}
