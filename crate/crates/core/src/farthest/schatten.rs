//! Schatten-norm closed forms, the `p ∈ {1} ∪ [2, 4]` classification,
//! counterexample search, and threshold root-finding.

use serde::Serialize;

use super::{check_nk, uniform_spectrum};
use crate::approx::{distance_to_low_rank, residual_spectrum};
use crate::error::{Error, Result};
use crate::norms::{log_power_sum, NormSpec};

/// Bracket width at which [`schatten_crossing`] stops.
pub const CROSSING_WIDTH: f64 = 1e-10;

fn check_p(p: f64) -> Result<()> {
    if !(p >= 1.0) {
        return Err(Error::BadRange(format!("Schatten exponent p = {p} must be >= 1")));
    }
    Ok(())
}

/// `d(I_n/n, D_{n,k})^p = (n−k)/n^p + k(1/k − 1/n)^p` for finite `p`.
pub fn schatten_maxmixed_power(n: usize, k: usize, p: f64) -> Result<f64> {
    check_nk(n, k)?;
    check_p(p)?;
    if p.is_infinite() {
        return Err(Error::BadRange("power form needs a finite p".into()));
    }
    let (nf, kf) = (n as f64, k as f64);
    Ok((nf - kf) / nf.powf(p) + kf * (1.0 / kf - 1.0 / nf).powf(p))
}

/// `d(I_n/n, D_{n,k})` under the Schatten-p norm.
pub fn schatten_maxmixed_distance(n: usize, k: usize, p: f64) -> Result<f64> {
    check_nk(n, k)?;
    check_p(p)?;
    let (nf, kf) = (n as f64, k as f64);
    let tail = 1.0 / nf;
    let shift = 1.0 / kf - 1.0 / nf;
    if p.is_infinite() {
        return Ok(tail.max(shift));
    }
    // factor out the larger magnitude
    let top = tail.max(shift);
    let scaled = (nf - kf) * (tail / top).powf(p) + kf * (shift / top).powf(p);
    Ok(top * scaled.powf(1.0 / p))
}

/// Whether `I_n/n` is the farthest state for every `n` and `k`.
pub fn schatten_is_always_maxmixed(p: f64) -> bool {
    p == 1.0 || (2.0..=4.0).contains(&p)
}

/// `f(x) = (x + x^p) / (x + 1)^p`.
///
/// With `k = 1`, `d(I_n/n)^p = f(n−1)` and `d(I_{n−1}/(n−1) ⊕ 0)^p = f(n−2)`.
pub fn rank_one_tail_ratio(x: f64, p: f64) -> f64 {
    // divide through by (x+1)^p in a form that survives large x
    let base = x / (x + 1.0);
    x / (x + 1.0).powf(p) + base.powf(p)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum CounterexampleFamily {
    /// `k = 1`, `X = I_{n−1}/(n−1) ⊕ 0`.
    RankOne,
    /// `n = 3m`, `k = 2m`, `X = I_{3m−1}/(3m−1) ⊕ 0`.
    Thirds { m: usize },
}

/// A state `I_{n−1}/(n−1) ⊕ 0` strictly farther from `D_{n,k}` than `I_n/n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SchattenCounterexample {
    pub p: f64,
    pub n: usize,
    pub k: usize,
    pub family: CounterexampleFamily,
    /// Size of the uniform block of `X` (always `n − 1`).
    pub support: usize,
    pub distance: f64,
    pub maxmixed_distance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SearchBounds {
    pub n_max: usize,
    pub m_max: usize,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds {
            n_max: 10_000,
            m_max: 2_000,
        }
    }
}

/// Counterexample search with default bounds.
pub fn schatten_counterexample(p: f64) -> Result<SchattenCounterexample> {
    schatten_counterexample_within(p, SearchBounds::default())
}

/// Searches for `(n, k)` where `I_{n−1}/(n−1) ⊕ 0` beats `I_n/n`.
///
/// For `1 < p < 2` the `k = 1` family is scanned over `n`; for `p > 4` the
/// `(3m, 2m)` family is scanned over `m`. For other `p` both families are
/// scanned. Every hit is re-checked through [`distance_to_low_rank`] before it
/// is returned; `NotFound` only means the bounds were exhausted.
pub fn schatten_counterexample_within(p: f64, bounds: SearchBounds) -> Result<SchattenCounterexample> {
    check_p(p)?;
    let rank_one_first = p < 2.0;
    let thirds_first = p > 4.0;
    if rank_one_first || !thirds_first {
        if let Some(c) = scan_rank_one(p, bounds.n_max)? {
            return Ok(c);
        }
    }
    if thirds_first || !rank_one_first {
        if let Some(c) = scan_thirds(p, bounds.m_max)? {
            return Ok(c);
        }
    }
    Err(Error::NotFound(format!(
        "p = {p}, n_max = {}, m_max = {}",
        bounds.n_max, bounds.m_max
    )))
}

fn scan_rank_one(p: f64, n_max: usize) -> Result<Option<SchattenCounterexample>> {
    for n in 3..=n_max {
        let x = (n - 2) as f64;
        if rank_one_tail_ratio(x, p) > rank_one_tail_ratio(x + 1.0, p) {
            if let Some(c) = verify(p, n, 1, CounterexampleFamily::RankOne)? {
                return Ok(Some(c));
            }
        }
    }
    Ok(None)
}

/// Sign of `d(X)^p − d(I_n/n)^p` for the `(3m, 2m)` family, scaled by
/// `(6m − 2)^p` so it stays finite for large `p`.
fn thirds_gap(m: usize, p: f64) -> f64 {
    let mf = m as f64;
    if p.is_infinite() {
        return mf - 1.0;
    }
    (mf - 1.0) + 2.0 * mf * (0.5 * (1.0 - 1.0 / mf)).powf(p)
        - mf * (1.0 + 2f64.powf(1.0 - p)) * (1.0 - 1.0 / (3.0 * mf)).powf(p)
}

fn scan_thirds(p: f64, m_max: usize) -> Result<Option<SchattenCounterexample>> {
    for m in 2..=m_max {
        if thirds_gap(m, p) > 0.0 {
            if let Some(c) = verify(p, 3 * m, 2 * m, CounterexampleFamily::Thirds { m })? {
                return Ok(Some(c));
            }
        }
    }
    Ok(None)
}

fn verify(p: f64, n: usize, k: usize, family: CounterexampleFamily) -> Result<Option<SchattenCounterexample>> {
    let spec = NormSpec::Schatten(p);
    let support = n - 1;
    let distance = distance_to_low_rank(&uniform_spectrum(n, support), k, spec)?;
    let maxmixed_distance = distance_to_low_rank(&uniform_spectrum(n, n), k, spec)?;
    if distance > maxmixed_distance {
        Ok(Some(SchattenCounterexample {
            p,
            n,
            k,
            family,
            support,
            distance,
            maxmixed_distance,
        }))
    } else {
        Ok(None)
    }
}

/// Exponent `p*` in `[lo, hi]` where candidates `m1` and `m2` are equally far
/// from `D_{n,k}`, found by bisection on `ln d_{m1}^p − ln d_{m2}^p`.
pub fn schatten_crossing(n: usize, k: usize, m1: usize, m2: usize, bracket: (f64, f64)) -> Result<f64> {
    check_nk(n, k)?;
    for m in [m1, m2] {
        if m <= k || m > n {
            return Err(Error::BadRange(format!("candidate m = {m} outside {}..={n}", k + 1)));
        }
    }
    let (mut lo, mut hi) = bracket;
    if !(lo >= 1.0 && hi > lo && hi.is_finite()) {
        return Err(Error::BadRange(format!("bad bracket [{lo}, {hi}]")));
    }
    let r1 = residual_spectrum(&uniform_spectrum(n, m1), k)?;
    let r2 = residual_spectrum(&uniform_spectrum(n, m2), k)?;
    let gap = |p: f64| log_power_sum(&r1, p) - log_power_sum(&r2, p);

    let mut g_lo = gap(lo);
    let g_hi = gap(hi);
    if g_lo == 0.0 {
        return Ok(lo);
    }
    if g_hi == 0.0 {
        return Ok(hi);
    }
    if g_lo.signum() == g_hi.signum() {
        return Err(Error::NoSignChange { lo, hi });
    }
    while hi - lo > CROSSING_WIDTH {
        let mid = 0.5 * (lo + hi);
        let g_mid = gap(mid);
        if g_mid == 0.0 {
            return Ok(mid);
        }
        if g_mid.signum() == g_lo.signum() {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn maxmixed_closed_form() {
        for n in 2..15usize {
            for k in 1..n {
                let tr = schatten_maxmixed_distance(n, k, 1.0).unwrap();
                assert_abs_diff_eq!(tr, 2.0 * (n - k) as f64 / n as f64, epsilon = 1e-14);
                let inf = schatten_maxmixed_distance(n, k, f64::INFINITY).unwrap();
                let expected = (1.0 / n as f64).max(1.0 / k as f64 - 1.0 / n as f64);
                assert_abs_diff_eq!(inf, expected, epsilon = 1e-15);
            }
        }
        assert_abs_diff_eq!(schatten_maxmixed_distance(4, 2, 2.0).unwrap(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(schatten_maxmixed_power(4, 2, 2.0).unwrap(), 0.25, epsilon = 1e-15);
    }

    #[test]
    fn closed_form_matches_spectral_route() {
        for n in 2..12usize {
            for k in 1..n {
                for p in [1.0, 1.3, 2.0, 3.5, 8.0, f64::INFINITY] {
                    let direct = schatten_maxmixed_distance(n, k, p).unwrap();
                    let via = distance_to_low_rank(&uniform_spectrum(n, n), k, NormSpec::Schatten(p)).unwrap();
                    assert_abs_diff_eq!(direct, via, epsilon = 1e-13);
                }
            }
        }
    }

    #[test]
    fn classification() {
        assert!(schatten_is_always_maxmixed(1.0));
        assert!(schatten_is_always_maxmixed(2.0));
        assert!(schatten_is_always_maxmixed(3.0));
        assert!(schatten_is_always_maxmixed(4.0));
        assert!(!schatten_is_always_maxmixed(1.5));
        assert!(!schatten_is_always_maxmixed(5.0));
        assert!(!schatten_is_always_maxmixed(f64::INFINITY));
    }

    #[test]
    fn tail_ratio_is_the_rank_one_distance_power() {
        for n in 3..20usize {
            for p in [1.2, 1.7] {
                let d = distance_to_low_rank(&uniform_spectrum(n, n), 1, NormSpec::Schatten(p)).unwrap();
                assert_abs_diff_eq!(d.powf(p), rank_one_tail_ratio((n - 1) as f64, p), epsilon = 1e-13);
                let d = distance_to_low_rank(&uniform_spectrum(n, n - 1), 1, NormSpec::Schatten(p)).unwrap();
                assert_abs_diff_eq!(d.powf(p), rank_one_tail_ratio((n - 2) as f64, p), epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn thirds_gap_sign_matches_direct_evaluation() {
        for m in 2..40usize {
            for p in [4.5, 5.0, 6.0, 12.0] {
                let spec = NormSpec::Schatten(p);
                let dx = distance_to_low_rank(&uniform_spectrum(3 * m, 3 * m - 1), 2 * m, spec).unwrap();
                let di = distance_to_low_rank(&uniform_spectrum(3 * m, 3 * m), 2 * m, spec).unwrap();
                assert_eq!(thirds_gap(m, p) > 0.0, dx > di, "m = {m}, p = {p}");
            }
        }
    }

    #[test]
    fn counterexamples_found_and_verified() {
        let c = schatten_counterexample(1.5).unwrap();
        assert_eq!(c.k, 1);
        assert!(c.distance > c.maxmixed_distance);
        let c = schatten_counterexample(5.0).unwrap();
        assert!(matches!(c.family, CounterexampleFamily::Thirds { .. }));
        assert!(c.distance > c.maxmixed_distance);
        let c = schatten_counterexample(f64::INFINITY).unwrap();
        assert!(c.distance > c.maxmixed_distance);
    }

    #[test]
    fn no_counterexample_inside_the_good_range() {
        let small = SearchBounds { n_max: 500, m_max: 200 };
        for p in [1.0, 2.0, 3.0, 4.0] {
            assert!(matches!(
                schatten_counterexample_within(p, small),
                Err(Error::NotFound(_))
            ));
        }
    }

    #[test]
    fn crossing_without_sign_change() {
        assert!(matches!(
            schatten_crossing(14, 9, 14, 13, (1.0, 3.0)),
            Err(Error::NoSignChange { .. })
        ));
        assert!(schatten_crossing(14, 9, 9, 13, (1.0, 3.0)).is_err());
    }
}
