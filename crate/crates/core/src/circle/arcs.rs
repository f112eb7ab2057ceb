//! Major arcs `M(Q) = { alpha : |q alpha - a| <= Q/X, 1 <= a <= q <= Q }` and
//! the minor-arc strata `m1 = m \ M(X^(1/2)/2)`, `m2 = M(X^(1/2)/2) \ M(Y)`,
//! `m3 = M(Y) \ M(P4)`, `m4 = M(P4) \ M(R)`.

use serde::{Deserialize, Serialize};

use crate::arith::ReducedFraction;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DissectionParams {
    x: f64,
    nu: f64,
    tau: f64,
    psi_at_x: f64,
}

impl DissectionParams {
    /// Rejects parameters that break the chain `R <= P4 <= Y <= X^(1/2)/2`.
    pub fn new(x: f64, nu: f64, tau: f64, psi_at_x: f64) -> Result<Self> {
        for (name, v) in [("X", x), ("nu", nu), ("tau", tau), ("psi(X)", psi_at_x)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid(format!("{name} must be positive and finite, got {v}")));
            }
        }
        let p = Self { x, nu, tau, psi_at_x };
        let chain = [("R", p.r()), ("P4", p.p4()), ("Y", p.y()), ("X^(1/2)/2", p.half_sqrt_x())];
        for pair in chain.windows(2) {
            let ((ln, lv), (rn, rv)) = (pair[0], pair[1]);
            if lv > rv {
                return Err(Error::invalid(format!(
                    "dissection needs {ln} <= {rn}, got {lv} > {rv} (X={x}, nu={nu}, tau={tau}, psi={psi_at_x})"
                )));
            }
        }
        Ok(p)
    }

    pub fn x(&self) -> f64 {
        self.x
    }
    pub fn nu(&self) -> f64 {
        self.nu
    }
    pub fn tau(&self) -> f64 {
        self.tau
    }
    pub fn psi_at_x(&self) -> f64 {
        self.psi_at_x
    }
    pub fn p2(&self) -> f64 {
        self.x.sqrt()
    }
    pub fn p4(&self) -> f64 {
        self.x.powf(0.25)
    }
    pub fn r(&self) -> f64 {
        self.p4().powf(self.nu)
    }
    pub fn y(&self) -> f64 {
        self.p4().powf(1.5 + self.tau) * self.psi_at_x * self.psi_at_x
    }
    pub fn half_sqrt_x(&self) -> f64 {
        0.5 * self.x.sqrt()
    }

    pub fn level(&self, level: MajorLevel) -> f64 {
        match level {
            MajorLevel::R => self.r(),
            MajorLevel::P4 => self.p4(),
            MajorLevel::Y => self.y(),
            MajorLevel::HalfSqrtX => self.half_sqrt_x(),
        }
    }

    /// The unit interval `(R/X, 1 + R/X]` the dissection covers.
    pub fn unit_interval(&self) -> (f64, f64) {
        let lo = self.r() / self.x;
        (lo, 1.0 + lo)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum MajorLevel {
    R,
    P4,
    Y,
    HalfSqrtX,
}

impl MajorLevel {
    pub const ALL: [MajorLevel; 4] = [MajorLevel::R, MajorLevel::P4, MajorLevel::Y, MajorLevel::HalfSqrtX];
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Stratum {
    M1,
    M2,
    M3,
    M4,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum ArcKind {
    Major { level: MajorLevel, frac: ReducedFraction },
    Minor { stratum: Stratum },
}

/// Where `alpha` sits in the dissection.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArcLabel {
    pub kind: ArcKind,
    /// The unique `a/q` with `q <= X^(1/2)/2` and `|q alpha - a| <= X^(-1/2)/2`,
    /// if any, together with `beta = alpha - a/q`.
    pub approximant: Option<(ReducedFraction, f64)>,
    /// Every level `Q` with `alpha` in `M(Q)`, innermost first.
    pub major_levels: Vec<MajorLevel>,
}

impl ArcLabel {
    pub fn in_major(&self, level: MajorLevel) -> bool {
        self.major_levels.contains(&level)
    }

    pub fn stratum(&self) -> Option<Stratum> {
        match self.kind {
            ArcKind::Minor { stratum } => Some(stratum),
            ArcKind::Major { .. } => None,
        }
    }
}

/// Continued-fraction convergents `p/q` of `x` in `[0, 1)` with `q <= q_max`.
pub fn convergents(x: f64, q_max: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let (mut p0, mut q0, mut p1, mut q1) = (0u64, 1u64, 1u64, 0u64);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if a > 1e18 {
            break;
        }
        let a = a as u64;
        let (p2, q2) = match (a.checked_mul(p1).and_then(|v| v.checked_add(p0)), a.checked_mul(q1).and_then(|v| v.checked_add(q0))) {
            (Some(p), Some(q)) => (p, q),
            _ => break,
        };
        if q2 > q_max {
            break;
        }
        out.push((p2, q2));
        let frac = r - a as f64;
        if frac < 1e-15 {
            break;
        }
        r = 1.0 / frac;
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
    }
    out
}

/// Reduce `alpha` into the dissection's unit interval `(R/X, 1 + R/X]`.
pub fn reduce_alpha(alpha: f64, params: &DissectionParams) -> f64 {
    let (lo, _) = params.unit_interval();
    let mut t = alpha - (alpha - lo).floor();
    if t <= lo {
        t += 1.0;
    }
    t
}

/// Classify `alpha` (taken mod 1). The approximant is found among the
/// convergents of `alpha mod 1`: whenever `|q alpha - a| <= Q/X` with
/// `q <= Q <= X^(1/2)/2`, `|alpha - a/q| < 1/(2q^2)`, so `a/q` is a
/// convergent. The fraction `0/1` is read as `1/1`, the arc around the
/// right end of the unit interval.
pub fn classify_arc(alpha: f64, params: &DissectionParams) -> ArcLabel {
    let x = params.x();
    let t = alpha.rem_euclid(1.0);
    let top = params.half_sqrt_x();
    let mut approximant = None;
    // The convergent p/q of t is also valid at the nearest integer for q = 1.
    let mut candidates = convergents(t, top.floor() as u64);
    candidates.push((1, 1));
    for (p, q) in candidates {
        let dist = (q as f64 * t - p as f64).abs();
        if dist <= top / x {
            let a = if p == 0 { q } else { p };
            let frac = ReducedFraction::new(a, q).expect("convergents are reduced");
            approximant = Some((frac, dist, (t - p as f64 / q as f64)));
            break;
        }
    }
    let mut major_levels = Vec::new();
    if let Some((frac, dist, _)) = approximant {
        for level in MajorLevel::ALL {
            let qv = params.level(level);
            if frac.q() as f64 <= qv && dist <= qv / x {
                major_levels.push(level);
            }
        }
    }
    let kind = match (approximant, major_levels.first()) {
        (Some((frac, _, _)), Some(MajorLevel::R)) => ArcKind::Major { level: MajorLevel::R, frac },
        (_, Some(MajorLevel::P4)) => ArcKind::Minor { stratum: Stratum::M4 },
        (_, Some(MajorLevel::Y)) => ArcKind::Minor { stratum: Stratum::M3 },
        (_, Some(MajorLevel::HalfSqrtX)) => ArcKind::Minor { stratum: Stratum::M2 },
        _ => ArcKind::Minor { stratum: Stratum::M1 },
    };
    ArcLabel { kind, approximant: approximant.map(|(f, _, b)| (f, b)), major_levels }
}
