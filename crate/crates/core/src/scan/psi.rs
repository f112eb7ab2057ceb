use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest exponent accepted for `psi(t) = t^delta`.
pub const MAX_DELTA: f64 = 0.25;

/// A sedately increasing tolerance `psi`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum PsiSpec {
    /// `t^delta`
    Power { delta: f64 },
    /// `(log t)^e`
    LogPower { e: f64 },
    /// `c`
    Constant { c: f64 },
}

impl PsiSpec {
    pub fn power(delta: f64) -> Result<Self> {
        Self::Power { delta }.validated()
    }

    pub fn log_power(e: f64) -> Result<Self> {
        Self::LogPower { e }.validated()
    }

    pub fn constant(c: f64) -> Result<Self> {
        Self::Constant { c }.validated()
    }

    fn validated(self) -> Result<Self> {
        let (name, v) = match self {
            PsiSpec::Power { delta } => ("delta", delta),
            PsiSpec::LogPower { e } => ("e", e),
            PsiSpec::Constant { c } => ("c", c),
        };
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::invalid(format!("psi parameter {name} must be positive, got {v}")));
        }
        if let PsiSpec::Power { delta } = self {
            if delta > MAX_DELTA {
                return Err(Error::invalid(format!("psi = t^delta needs delta <= {MAX_DELTA}, got {delta}")));
            }
        }
        Ok(self)
    }

    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            PsiSpec::Power { delta } => t.powf(delta),
            PsiSpec::LogPower { e } => t.ln().max(0.0).powf(e),
            PsiSpec::Constant { c } => c,
        }
    }
}

impl fmt::Display for PsiSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PsiSpec::Power { delta } => write!(f, "pow:{delta}"),
            PsiSpec::LogPower { e } => write!(f, "logpow:{e}"),
            PsiSpec::Constant { c } => write!(f, "const:{c}"),
        }
    }
}

impl FromStr for PsiSpec {
    type Err = Error;

    /// `pow:D`, `logpow:E` or `const:C`.
    fn from_str(s: &str) -> Result<Self> {
        let (family, value) =
            s.split_once(':').ok_or_else(|| Error::invalid(format!("psi spec {s:?} should look like pow:0.02")))?;
        let v: f64 = value.trim().parse().map_err(|_| Error::invalid(format!("bad psi parameter in {s:?}")))?;
        match family.trim() {
            "pow" => Self::power(v),
            "logpow" => Self::log_power(v),
            "const" => Self::constant(v),
            other => Err(Error::invalid(format!("unknown psi family {other:?}"))),
        }
    }
}
