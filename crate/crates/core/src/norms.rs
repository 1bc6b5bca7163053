//! Schatten-p and Ky Fan-r norms.
//!
//! Both families are functions of the singular values only, so every norm
//! here is unitary similarity invariant. For a Hermitian matrix the singular
//! values are the absolute eigenvalues.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::spectra::{hermitian_singular_values, HermitianMatrix};

/// Which unitary similarity invariant norm to use.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormSpec {
    /// `(Σ σ_j^p)^(1/p)`, `p ∈ [1, ∞]`; `p = ∞` is the operator norm.
    Schatten(f64),
    /// Sum of the `r` largest singular values.
    KyFan(usize),
}

impl NormSpec {
    pub const fn trace() -> Self {
        NormSpec::Schatten(1.0)
    }

    pub const fn frobenius() -> Self {
        NormSpec::Schatten(2.0)
    }

    pub const fn operator() -> Self {
        NormSpec::Schatten(f64::INFINITY)
    }

    pub fn schatten(p: f64) -> Result<Self> {
        let spec = NormSpec::Schatten(p);
        spec.check_parameter()?;
        Ok(spec)
    }

    pub fn kyfan(r: usize) -> Result<Self> {
        let spec = NormSpec::KyFan(r);
        spec.check_parameter()?;
        Ok(spec)
    }

    /// Checks `p ≥ 1` / `r ≥ 1`, independent of any dimension.
    pub fn check_parameter(&self) -> Result<()> {
        match *self {
            NormSpec::Schatten(p) if !(p >= 1.0) => {
                Err(Error::InvalidSpec(format!("Schatten exponent p = {p} must be >= 1")))
            }
            NormSpec::KyFan(0) => Err(Error::InvalidSpec("Ky Fan index r must be >= 1".into())),
            _ => Ok(()),
        }
    }

    /// Checks the spec against a dimension `n`.
    pub fn check_for_dim(&self, n: usize) -> Result<()> {
        self.check_parameter()?;
        if let NormSpec::KyFan(r) = *self {
            if r > n {
                return Err(Error::InvalidSpec(format!(
                    "Ky Fan index r = {r} exceeds dimension {n}"
                )));
            }
        }
        Ok(())
    }

    /// Finite Schatten exponent, if this is one.
    pub fn finite_schatten_p(&self) -> Option<f64> {
        match *self {
            NormSpec::Schatten(p) if p.is_finite() => Some(p),
            _ => None,
        }
    }

    /// The same norm in its canonical form (Ky Fan 1 is the operator norm).
    pub fn canonical(&self) -> NormSpec {
        match *self {
            NormSpec::KyFan(1) => NormSpec::operator(),
            other => other,
        }
    }
}

impl fmt::Display for NormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            NormSpec::Schatten(p) if p.is_infinite() => write!(f, "schatten:inf"),
            NormSpec::Schatten(p) => write!(f, "schatten:{p}"),
            NormSpec::KyFan(r) => write!(f, "kyfan:{r}"),
        }
    }
}

impl Serialize for NormSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for NormSpec {
    type Err = Error;

    /// `schatten:<p>` (`p` decimal or `inf`), `kyfan:<r>`, or one of the
    /// aliases `trace`, `frobenius`, `operator`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.to_ascii_lowercase().as_str() {
            "trace" => return Ok(NormSpec::trace()),
            "frobenius" => return Ok(NormSpec::frobenius()),
            "operator" => return Ok(NormSpec::operator()),
            _ => {}
        }
        let (kind, arg) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidSpec(format!("unrecognised norm '{s}'")))?;
        match kind.to_ascii_lowercase().as_str() {
            "schatten" => {
                let p = parse_extended_real(arg)
                    .ok_or_else(|| Error::InvalidSpec(format!("bad Schatten exponent '{arg}'")))?;
                NormSpec::schatten(p)
            }
            "kyfan" => {
                let r = arg
                    .trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidSpec(format!("bad Ky Fan index '{arg}'")))?;
                NormSpec::kyfan(r)
            }
            _ => Err(Error::InvalidSpec(format!("unrecognised norm '{s}'"))),
        }
    }
}

/// Parses a decimal or `inf` / `infinity`.
pub fn parse_extended_real(s: &str) -> Option<f64> {
    let t = s.trim();
    match t.to_ascii_lowercase().as_str() {
        "inf" | "infinity" | "+inf" => Some(f64::INFINITY),
        _ => t.parse::<f64>().ok().filter(|x| !x.is_nan()),
    }
}

/// Norm of a descending, nonnegative vector of singular values.
pub fn norm_of_values(sv: &[f64], spec: NormSpec) -> Result<f64> {
    spec.check_for_dim(sv.len())?;
    Ok(match spec {
        NormSpec::KyFan(r) => sv[..r].iter().sum(),
        NormSpec::Schatten(p) => schatten_value(sv, p),
    })
}

/// `Σ σ_j^p` for finite `p ≥ 1`, without the `1/p` root.
pub fn norm_power_of_values(sv: &[f64], p: f64) -> Result<f64> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::InvalidSpec(format!(
            "power sum needs a finite exponent >= 1, got {p}"
        )));
    }
    Ok(sv.iter().map(|s| s.abs().powf(p)).sum())
}

/// `ln Σ σ_j^p`, evaluated with the largest value factored out.
pub(crate) fn log_power_sum(sv: &[f64], p: f64) -> f64 {
    let top = sv.iter().fold(0.0_f64, |m, s| m.max(s.abs()));
    if top == 0.0 {
        return f64::NEG_INFINITY;
    }
    let rest: f64 = sv.iter().map(|s| (s.abs() / top).powf(p)).sum();
    p * top.ln() + rest.ln()
}

fn schatten_value(sv: &[f64], p: f64) -> f64 {
    let top = sv.iter().fold(0.0_f64, |m, s| m.max(s.abs()));
    if top == 0.0 || p.is_infinite() {
        return top;
    }
    if p == 1.0 {
        return sv.iter().map(|s| s.abs()).sum();
    }
    let scaled: f64 = sv.iter().map(|s| (s.abs() / top).powf(p)).sum();
    top * scaled.powf(1.0 / p)
}

/// Norm of a Hermitian matrix.
pub fn norm_of_matrix(x: &HermitianMatrix, spec: NormSpec) -> Result<f64> {
    spec.check_for_dim(x.dim())?;
    let sv = hermitian_singular_values(x)?;
    norm_of_values(&sv, spec)
}
