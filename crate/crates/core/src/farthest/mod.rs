//! States farthest from the rank-≤k set.
//!
//! For any USI norm the maximum of `d(X, D_{n,k})` over states `X` is attained
//! by one of the `n − k` candidates `I_m/m ⊕ O_{n−m}`, `m ∈ {k+1, …, n}`.
//! [`farthest_search`] evaluates all of them; the submodules hold closed
//! forms and selectors for the Schatten and Ky Fan families.

mod kyfan;
mod schatten;

pub use kyfan::{
    kyfan_candidate_closed_form, kyfan_case_table_m, kyfan_g, kyfan_optimal_m, KyFanCase,
    KyFanSelector, GOLDEN_RATIO,
};
pub use schatten::{
    rank_one_tail_ratio, schatten_counterexample, schatten_counterexample_within,
    schatten_crossing, schatten_is_always_maxmixed, schatten_maxmixed_distance,
    schatten_maxmixed_power, CounterexampleFamily, SchattenCounterexample, SearchBounds,
    CROSSING_WIDTH,
};

use serde::Serialize;

use crate::approx::{distance_to_low_rank, residual_spectrum};
use crate::error::{Error, Result};
use crate::norms::{log_power_sum, NormSpec};

/// Relative tolerance under which two candidates count as tied.
pub const TIE_TOL: f64 = 1e-12;

/// Eigenvalues of `I_m/m ⊕ O_{n−m}`, descending.
pub fn uniform_spectrum(n: usize, m: usize) -> Vec<f64> {
    let mut v = vec![0.0; n];
    v[..m].fill(1.0 / m as f64);
    v
}

pub(crate) fn check_nk(n: usize, k: usize) -> Result<()> {
    if k == 0 || k >= n {
        return Err(Error::BadRange(format!("need 1 <= k < n, got n = {n}, k = {k}")));
    }
    Ok(())
}

/// `d(I_m/m ⊕ O_{n−m}, D_{n,k})`.
pub fn candidate_distance(n: usize, m: usize, k: usize, spec: NormSpec) -> Result<f64> {
    if k == 0 || m <= k || m > n {
        return Err(Error::BadRange(format!(
            "need 1 <= k < m <= n, got n = {n}, m = {m}, k = {k}"
        )));
    }
    spec.check_for_dim(n)?;
    distance_to_low_rank(&uniform_spectrum(n, m), k, spec)
}

/// Ordering key for a candidate: `ln Σ σ^p` for finite Schatten exponents,
/// `ln d` otherwise. Both are monotone in the distance.
fn comparison_key(n: usize, m: usize, k: usize, spec: NormSpec, distance: f64) -> Result<f64> {
    Ok(match spec.finite_schatten_p() {
        Some(p) => {
            let r = residual_spectrum(&uniform_spectrum(n, m), k)?;
            log_power_sum(&r, p)
        }
        None => distance.ln(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CandidateDistance {
    pub m: usize,
    pub distance: f64,
}

/// Exhaustive evaluation of the candidate family.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FarthestReport {
    pub n: usize,
    pub k: usize,
    pub spec: NormSpec,
    /// One entry per `m = k+1, …, n`, in increasing `m`.
    pub candidate_distances: Vec<CandidateDistance>,
    pub argmax_m: usize,
    pub max_distance: f64,
    /// Every `m` whose distance is within [`TIE_TOL`] (relative) of the maximum.
    pub ties: Vec<usize>,
}

impl FarthestReport {
    pub fn distance_for(&self, m: usize) -> Option<f64> {
        self.candidate_distances
            .iter()
            .find(|c| c.m == m)
            .map(|c| c.distance)
    }

    /// Whether the maximally mixed state attains the maximum.
    pub fn maximally_mixed_is_farthest(&self) -> bool {
        self.argmax_m == self.n
    }
}

/// Evaluates every `m ∈ {k+1, …, n}` and reports the farthest candidate.
/// Ties go to the larger `m`.
pub fn farthest_search(n: usize, k: usize, spec: NormSpec) -> Result<FarthestReport> {
    check_nk(n, k)?;
    spec.check_for_dim(n)?;

    let mut candidates = Vec::with_capacity(n - k);
    let mut keys = Vec::with_capacity(n - k);
    for m in k + 1..=n {
        let d = candidate_distance(n, m, k, spec)?;
        keys.push(comparison_key(n, m, k, spec, d)?);
        candidates.push(CandidateDistance { m, distance: d });
    }
    let best_key = keys.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    // keys are logarithms, so an absolute gap is a relative one
    let ties: Vec<usize> = candidates
        .iter()
        .zip(&keys)
        .filter(|(_, &key)| best_key - key <= TIE_TOL)
        .map(|(c, _)| c.m)
        .collect();
    let argmax_m = *ties.last().expect("candidate family is nonempty");
    let max_distance = candidates[argmax_m - k - 1].distance;
    Ok(FarthestReport {
        n,
        k,
        spec,
        candidate_distances: candidates,
        argmax_m,
        max_distance,
        ties,
    })
}

/// Farthest candidate and its distance under the operator norm:
/// `(n, 1/k − 1/n)` when `k(k+1) ≤ n`, otherwise `(k+1, 1/(k+1))`.
pub fn operator_norm_farthest(n: usize, k: usize) -> Result<(usize, f64)> {
    check_nk(n, k)?;
    if k * (k + 1) <= n {
        Ok((n, 1.0 / k as f64 - 1.0 / n as f64))
    } else {
        Ok((k + 1, 1.0 / (k + 1) as f64))
    }
}
