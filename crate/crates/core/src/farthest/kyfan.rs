//! Ky Fan norms: closed form of the candidate distances and the selector
//! for the farthest candidate.
//!
//! The residual of `I_m/m ⊕ O_{n−m}` has `k` entries of magnitude
//! `1/k − 1/m`, `m − k` entries `1/m`, and zeros. Summing its `r` largest
//! magnitudes gives
//!
//! ```text
//! m ≤ r                    2 − 2k/m
//! m > r, m ≥ 2k, r ≤ k     r(1/k − 1/m)
//! m > r, m ≥ 2k, r > k     1 + (r − 2k)/m
//! m > r, m < 2k, m−k ≥ r   r/m
//! m > r, m < 2k, m−k < r   (m − k)(2k + r − m)/(km)
//! ```
//!
//! The last branch peaks at `m = √(k(2k + r))`. It is reached both for
//! `r < k` and for `r/2 < k ≤ r`; in the latter range the peak can beat
//! `m = n` (smallest case: `n = 6, k = 3, r = 3`, where `m = 5` gives 8/15
//! against 1/2 at `m = 6`), so the selector keeps `⌊√(k(2k+r))⌋` and
//! `⌈√(k(2k+r))⌉` as candidates there.

use serde::Serialize;

use super::{candidate_distance, check_nk, farthest_search};
use crate::error::{Error, Result};
use crate::norms::NormSpec;

pub const GOLDEN_RATIO: f64 = 1.618_033_988_749_895;

/// `g(r, n) = (√(r(4n + r)) − r) / 2`, the positive root of `k² + rk − rn`.
pub fn kyfan_g(r: usize, n: usize) -> f64 {
    let (r, n) = (r as f64, n as f64);
    0.5 * ((r * (4.0 * n + r)).sqrt() - r)
}

/// Closed form of `d(I_m/m ⊕ O_{n−m}, D_{n,k})` under the Ky Fan `r`-norm
/// (table in the module docs). Independent of `n` as long as `r ≤ n`.
pub fn kyfan_candidate_closed_form(m: usize, k: usize, r: usize) -> f64 {
    let (mf, kf, rf) = (m as f64, k as f64, r as f64);
    if m <= r {
        2.0 - 2.0 * kf / mf
    } else if m >= 2 * k {
        if r <= k {
            rf * (1.0 / kf - 1.0 / mf)
        } else {
            1.0 + (rf - 2.0 * kf) / mf
        }
    } else if m - k >= r {
        rf / mf
    } else {
        (mf - kf) * (2.0 * kf + rf - mf) / (kf * mf)
    }
}

/// Which regime `(k, r)` falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KyFanCase {
    /// `k ≤ r/2`: `m = r`.
    SmallK,
    /// `r/2 < k ≤ r`: `m ∈ {n, ⌊√(k(2k+r))⌋, ⌈√(k(2k+r))⌉}`.
    ModerateK,
    /// `k > φr` and `k < g(r, n)`: `m = n`.
    LargeKBelowG,
    /// `k > φr` and `k ≥ g(r, n)`: `m = min(r + k, n)`.
    LargeKAboveG,
    /// `r < k ≤ φr`: `m ∈ {n, k + r, ⌊√(k(2k+r))⌋, ⌈√(k(2k+r))⌉}`.
    Intermediate,
}

/// Prediction of the farthest candidate for the Ky Fan `r`-norm.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KyFanSelector {
    pub n: usize,
    pub k: usize,
    pub r: usize,
    pub case: KyFanCase,
    pub g_value: f64,
    /// `φ · r`.
    pub golden_threshold: f64,
    /// Candidates the case allows, ascending, clamped to `{k+1, …, n}`.
    pub candidates: Vec<usize>,
    pub predicted_m: usize,
    pub predicted_value: f64,
    /// Argmax of the exhaustive search, for reference.
    pub search_m: usize,
}

fn isqrt(v: usize) -> usize {
    let mut s = (v as f64).sqrt() as usize;
    while s * s > v {
        s -= 1;
    }
    while (s + 1) * (s + 1) <= v {
        s += 1;
    }
    s
}

fn classify(n: usize, k: usize, r: usize) -> KyFanCase {
    if 2 * k <= r {
        KyFanCase::SmallK
    } else if k <= r {
        KyFanCase::ModerateK
    } else if k * k > k * r + r * r {
        // k/r > φ  ⟺  k² − kr − r² > 0
        if k * (k + r) < n * r {
            // k < g(r, n)
            KyFanCase::LargeKBelowG
        } else {
            KyFanCase::LargeKAboveG
        }
    } else {
        KyFanCase::Intermediate
    }
}

fn case_candidates(n: usize, k: usize, r: usize, case: KyFanCase) -> Vec<usize> {
    let s2 = k * (2 * k + r);
    let lo = isqrt(s2);
    let hi = if lo * lo == s2 { lo } else { lo + 1 };
    let mut c = match case {
        // r = 2k: every m ≥ r ties at 1
        KyFanCase::SmallK if r == 2 * k => vec![r, n],
        KyFanCase::SmallK => vec![r],
        KyFanCase::ModerateK => vec![n, lo, hi],
        KyFanCase::LargeKBelowG => vec![n],
        // k = g(r, n) exactly ties m = k + r with m = n
        KyFanCase::LargeKAboveG if k * (k + r) == n * r => vec![(r + k).min(n), n],
        KyFanCase::LargeKAboveG => vec![(r + k).min(n)],
        KyFanCase::Intermediate => vec![n, (k + r).min(n), lo, hi],
    };
    c.retain(|&m| m > k && m <= n);
    c.sort_unstable();
    c.dedup();
    c
}

/// The single `m` given by the usual case table, which names `m = n` for the
/// whole range `r/2 < k ≤ r`; `None` where the table lists several
/// candidates. Not always optimal: see the module docs.
pub fn kyfan_case_table_m(n: usize, k: usize, r: usize) -> Result<Option<usize>> {
    check_args(n, k, r)?;
    Ok(match classify(n, k, r) {
        KyFanCase::SmallK => Some(r),
        KyFanCase::ModerateK | KyFanCase::LargeKBelowG => Some(n),
        KyFanCase::LargeKAboveG => Some((r + k).min(n)),
        KyFanCase::Intermediate => None,
    })
}

fn check_args(n: usize, k: usize, r: usize) -> Result<()> {
    check_nk(n, k)?;
    if r == 0 || r > n {
        return Err(Error::BadRange(format!("Ky Fan index r = {r} outside 1..={n}")));
    }
    Ok(())
}

/// Farthest candidate for the Ky Fan `r`-norm, from the case analysis.
///
/// Multi-candidate cases are resolved by evaluating each candidate (ties go
/// to the larger `m`). The prediction is always checked against
/// [`farthest_search`]; a value mismatch beyond `1e-10` is an
/// `InternalInconsistency`.
pub fn kyfan_optimal_m(n: usize, k: usize, r: usize) -> Result<KyFanSelector> {
    check_args(n, k, r)?;
    let spec = NormSpec::KyFan(r);
    let case = classify(n, k, r);
    let mut candidates = case_candidates(n, k, r, case);
    candidates.sort_unstable();
    candidates.dedup();

    let mut predicted_m = 0;
    let mut predicted_value = f64::NEG_INFINITY;
    for &m in &candidates {
        let d = candidate_distance(n, m, k, spec)?;
        if d >= predicted_value - 1e-12 * predicted_value.abs().max(1.0) {
            predicted_value = d;
            predicted_m = m;
        }
    }
    if candidates.is_empty() {
        return Err(Error::InternalInconsistency(format!(
            "no admissible candidate for n = {n}, k = {k}, r = {r}"
        )));
    }

    let search = farthest_search(n, k, spec)?;
    if (search.max_distance - predicted_value).abs() > 1e-10 {
        return Err(Error::InternalInconsistency(format!(
            "Ky Fan selector predicts m = {predicted_m} ({predicted_value}) but exhaustive search finds m = {} ({}) for n = {n}, k = {k}, r = {r}",
            search.argmax_m, search.max_distance
        )));
    }

    Ok(KyFanSelector {
        n,
        k,
        r,
        case,
        g_value: kyfan_g(r, n),
        golden_threshold: GOLDEN_RATIO * r as f64,
        candidates,
        predicted_m,
        predicted_value,
        search_m: search.argmax_m,
    })
}
