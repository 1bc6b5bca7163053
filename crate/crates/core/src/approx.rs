//! Closest rank-≤k density matrix.
//!
//! With eigenvalues `x_1 ≥ … ≥ x_n` and eigenvectors `v_j` of `X`, the
//! minimiser of `‖X − Z‖` over states `Z` of rank at most `k` is the same for
//! every unitary similarity invariant norm:
//!
//! ```text
//! γ = (1/k) Σ_{j>k} x_j,    Y = Σ_{j≤k} (x_j + γ) v_j v_j*
//! ```
//!
//! and `X − Y` has eigenvalues `(−γ, …, −γ, x_{k+1}, …, x_n)` (k copies of −γ).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::norms::{norm_of_values, NormSpec};
use crate::spectra::{sorted_abs_desc, DensityMatrix, Spectrum};

/// Output of [`closest_rank_k`].
#[derive(Debug, Clone)]
pub struct ApproxResult {
    pub k: usize,
    pub spec: NormSpec,
    pub gamma: f64,
    /// The closest state of rank at most `k`.
    pub closest: DensityMatrix,
    pub distance: f64,
    /// Eigenvalues of `X − Y` in the order `(−γ ×k, x_{k+1}, …, x_n)`.
    pub residual_spectrum: Vec<f64>,
}

#[derive(Serialize)]
struct ApproxSummary<'a> {
    k: usize,
    spec: NormSpec,
    gamma: f64,
    distance: f64,
    residual_spectrum: &'a [f64],
    closest_eigenvalues: &'a [f64],
}

impl Serialize for ApproxResult {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ApproxSummary {
            k: self.k,
            spec: self.spec,
            gamma: self.gamma,
            distance: self.distance,
            residual_spectrum: &self.residual_spectrum,
            closest_eigenvalues: self.closest.eigenvalues(),
        }
        .serialize(s)
    }
}

fn check_rank(n: usize, k: usize) -> Result<()> {
    if k == 0 || k > n {
        return Err(Error::BadRank { k, n });
    }
    Ok(())
}

/// `(1/k) Σ_{j>k} x_j` for descending eigenvalues `eigs`.
pub fn gamma_shift(eigs: &[f64], k: usize) -> Result<f64> {
    check_rank(eigs.len(), k)?;
    Ok(eigs[k..].iter().sum::<f64>() / k as f64)
}

/// `(−γ ×k, x_{k+1}, …, x_n)`.
pub fn residual_spectrum(eigs: &[f64], k: usize) -> Result<Vec<f64>> {
    let gamma = gamma_shift(eigs, k)?;
    let mut r = vec![-gamma; k];
    r.extend_from_slice(&eigs[k..]);
    Ok(r)
}

/// `d(X, D_{n,k})` from the eigenvalues of `X` alone.
pub fn distance_to_low_rank(eigs: &[f64], k: usize, spec: NormSpec) -> Result<f64> {
    spec.check_for_dim(eigs.len())?;
    let r = residual_spectrum(eigs, k)?;
    norm_of_values(&sorted_abs_desc(&r), spec)
}

/// Closest state of rank at most `k` to `x`, and its distance under `spec`.
///
/// The state returned does not depend on `spec`; only `distance` does.
pub fn closest_rank_k(x: &DensityMatrix, k: usize, spec: NormSpec) -> Result<ApproxResult> {
    let n = x.dim();
    check_rank(n, k)?;
    spec.check_for_dim(n)?;

    if k == n {
        return Ok(ApproxResult {
            k,
            spec,
            gamma: 0.0,
            closest: x.clone(),
            distance: 0.0,
            residual_spectrum: vec![0.0; n],
        });
    }

    let eigs = x.eigenvalues();
    let gamma = gamma_shift(eigs, k)?;
    let mut y_eigs = vec![0.0; n];
    for j in 0..k {
        y_eigs[j] = eigs[j] + gamma;
    }
    let closest = DensityMatrix::from_spectrum(Spectrum {
        eigenvalues: y_eigs,
        eigenvectors: x.spectrum().eigenvectors.clone(),
    });
    let residual = residual_spectrum(eigs, k)?;
    let distance = norm_of_values(&sorted_abs_desc(&residual), spec)?;
    Ok(ApproxResult {
        k,
        spec,
        gamma,
        closest,
        distance,
        residual_spectrum: residual,
    })
}
