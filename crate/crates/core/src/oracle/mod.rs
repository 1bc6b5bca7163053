//! Brute-force checks that use no closed form for the closest low-rank state.
//!
//! [`oracle_min_distance`] minimises `‖X − Z‖` directly over states `Z` of
//! rank at most `k`. `Z` is written as `L L* / tr(L L*)` with `L` an `n × k`
//! lower-trapezoidal complex matrix with real diagonal; this reaches every
//! rank-≤k state whose leading `k × k` block is nonsingular (all but a null
//! set) with the minimal number of real parameters. The search runs in the
//! eigenbasis of `X`, which changes no norm. Each restart is a sequence of
//! Nelder–Mead runs from randomly oriented simplices of shrinking size; the
//! first restart starts from the rescaled top-`k` truncation of `X`, the rest
//! from random `L`.
//!
//! [`oracle_max_distance`] maximises `d(X, D_{n,k})` over spectra on the
//! probability simplex, with `d` taken from [`distance_to_low_rank`]. It does
//! not use the candidate family `I_m/m ⊕ O`.

mod nelder_mead;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use self::nelder_mead::{random_frame, NelderMead};
use crate::approx::distance_to_low_rank;
use crate::error::{Error, Result};
use crate::norms::{norm_of_values, NormSpec};
use crate::spectra::{eigenvalues_only, sorted_abs_desc, validate_density, DensityMatrix, Tolerances};
use crate::{CMatrix, C64};

/// Settings for the multistart local search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleConfig {
    pub restarts: usize,
    /// Nelder–Mead iterations per local-search cycle.
    pub max_iters: usize,
    /// Upper bound on Nelder–Mead cycles per restart.
    pub max_cycles: usize,
    pub seed: u64,
    /// Simplex size at which a restart stops.
    pub step_tolerance: f64,
    /// Improvement below which a cycle counts as stalled.
    pub value_tolerance: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            restarts: 32,
            max_iters: 2000,
            max_cycles: 40,
            seed: 0,
            step_tolerance: 1e-9,
            value_tolerance: 1e-8,
        }
    }
}

impl OracleConfig {
    pub fn with_seed(seed: u64) -> Self {
        OracleConfig {
            seed,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.restarts == 0 || self.max_iters == 0 || self.max_cycles == 0 {
            return Err(Error::BadRange("oracle needs restarts, max_iters and max_cycles >= 1".into()));
        }
        if !(self.step_tolerance > 0.0 && self.value_tolerance > 0.0) {
            return Err(Error::BadRange("oracle tolerances must be positive".into()));
        }
        Ok(())
    }

    fn rng_for(&self, restart: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(restart as u64);
        rng
    }
}

/// Result of [`oracle_min_distance`].
#[derive(Debug, Clone)]
pub struct OracleMin {
    pub value: f64,
    /// Best state found, in the original basis.
    pub state: DensityMatrix,
    pub best_restart: usize,
    pub restarts_converged: usize,
    pub evaluations: usize,
}

/// Result of [`oracle_max_distance`].
#[derive(Debug, Clone, Serialize)]
pub struct OracleMax {
    pub value: f64,
    /// Best spectrum found, descending.
    pub eigenvalues: Vec<f64>,
    pub best_restart: usize,
    pub restarts_converged: usize,
    pub evaluations: usize,
}

struct LocalResult {
    x: Vec<f64>,
    value: f64,
    converged: bool,
    evaluations: usize,
}

/// Repeated Nelder–Mead from `x0`, re-orienting the simplex each cycle and
/// shrinking it whenever a cycle stalls.
fn local_search<F, R>(f: &mut F, x0: Vec<f64>, scale0: f64, cfg: &OracleConfig, rng: &mut R) -> LocalResult
where
    F: FnMut(&[f64]) -> f64,
    R: Rng + ?Sized,
{
    let dim = x0.len();
    let nm = NelderMead {
        max_iters: cfg.max_iters,
        xtol: cfg.step_tolerance,
        ftol: cfg.value_tolerance * 1e-3,
    };
    let mut x = x0;
    let mut fx = f(&x);
    let mut evaluations = 1;
    let mut scale = scale0;
    let mut converged = false;
    for _ in 0..cfg.max_cycles {
        let res = nm.minimize(f, &x, &random_frame(dim, scale, rng));
        evaluations += res.evaluations;
        let gain = fx - res.value;
        if res.value < fx {
            x = res.x;
            fx = res.value;
        }
        if gain < cfg.value_tolerance {
            if scale <= cfg.step_tolerance {
                converged = true;
                break;
            }
            scale *= 0.1;
        } else {
            scale *= 0.5;
        }
    }
    LocalResult {
        x,
        value: fx,
        converged,
        evaluations,
    }
}

/// Lower-trapezoidal factor from raw parameters: column `j` holds a real
/// diagonal entry followed by `n − j − 1` complex entries.
fn factor_from_params(theta: &[f64], n: usize, k: usize) -> CMatrix {
    let mut l = CMatrix::zeros(n, k);
    let mut it = theta.iter();
    for j in 0..k {
        l[(j, j)] = C64::new(*it.next().unwrap(), 0.0);
        for i in j + 1..n {
            let re = *it.next().unwrap();
            let im = *it.next().unwrap();
            l[(i, j)] = C64::new(re, im);
        }
    }
    l
}

fn factor_param_count(n: usize, k: usize) -> usize {
    (0..k).map(|j| 1 + 2 * (n - j - 1)).sum()
}

/// `L L* / tr(L L*)`, or `None` for `L = 0`.
fn state_from_factor(l: &CMatrix) -> Option<CMatrix> {
    let tr = l.norm_squared();
    if !(tr > 0.0) || !tr.is_finite() {
        return None;
    }
    Some(l * l.adjoint() / C64::new(tr, 0.0))
}

/// Numerically minimises `‖X − Z‖` over states `Z` of rank at most `k`.
pub fn oracle_min_distance(x: &DensityMatrix, k: usize, spec: NormSpec, cfg: &OracleConfig) -> Result<OracleMin> {
    cfg.validate()?;
    let n = x.dim();
    if k == 0 || k > n {
        return Err(Error::BadRank { k, n });
    }
    spec.check_for_dim(n)?;

    let eigs = x.eigenvalues().to_vec();
    let diag = CMatrix::from_fn(n, n, |i, j| if i == j { C64::new(eigs[i], 0.0) } else { C64::new(0.0, 0.0) });
    // Ky Fan norms below full index are nonsmooth exactly where the optimum
    // sits; those restarts first follow a smoothed objective with shrinking μ.
    let smoothing: &[Option<f64>] = match spec {
        NormSpec::KyFan(r) if r < n => &[Some(1e-3), Some(1e-5), Some(1e-7), None],
        _ => &[None],
    };
    let objective = |theta: &[f64], mu: Option<f64>| -> f64 {
        let l = factor_from_params(theta, n, k);
        let Some(z) = state_from_factor(&l) else {
            return f64::INFINITY;
        };
        let Ok(ev) = eigenvalues_only(&(&diag - z)) else {
            return f64::INFINITY;
        };
        let sv = sorted_abs_desc(&ev);
        match (spec, mu) {
            (NormSpec::KyFan(r), Some(mu)) => smoothed_kyfan(&sv, r, mu),
            _ => norm_of_values(&sv, spec).unwrap_or(f64::INFINITY),
        }
    };

    let dim = factor_param_count(n, k);
    let mut best: Option<(usize, LocalResult)> = None;
    let mut converged = 0;
    let mut evaluations = 0;
    for restart in 0..cfg.restarts {
        let mut rng = cfg.rng_for(restart);
        let (start, scale) = if restart == 0 {
            // rescaled top-k truncation: L = diag(√x_1, …, √x_k)
            let mut l = CMatrix::zeros(n, k);
            for j in 0..k {
                l[(j, j)] = C64::new(eigs[j].max(0.0).sqrt(), 0.0);
            }
            (params_from_factor(&l), 0.05)
        } else {
            let t: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(&mut rng)).collect();
            (t, 0.5)
        };
        let mut x = start;
        let mut res = None;
        for (stage, &mu) in smoothing.iter().enumerate() {
            let mut f = |theta: &[f64]| objective(theta, mu);
            // smoothed stages only need to resolve the optimum to about μ
            let stage_cfg = OracleConfig {
                step_tolerance: mu.map_or(cfg.step_tolerance, |m| m.max(cfg.step_tolerance)),
                ..*cfg
            };
            let r = local_search(&mut f, x, scale * 0.1f64.powi(stage as i32), &stage_cfg, &mut rng);
            evaluations += r.evaluations;
            x = r.x.clone();
            res = Some(r);
        }
        let res = res.expect("at least one stage");
        if res.converged {
            converged += 1;
        }
        if best.as_ref().is_none_or(|(_, b)| res.value < b.value) {
            best = Some((restart, res));
        }
    }
    let (best_restart, best) = best.expect("at least one restart");
    if converged == 0 {
        return Err(Error::NonConvergence { best: best.value });
    }

    let l = factor_from_params(&best.x, n, k);
    let z_eig = state_from_factor(&l).ok_or(Error::NonConvergence { best: best.value })?;
    let v = &x.spectrum().eigenvectors;
    let z = v * z_eig * v.adjoint();
    let z = (&z + z.adjoint()) * C64::new(0.5, 0.0);
    let state = validate_density(z, &Tolerances::default())?;
    Ok(OracleMin {
        value: best.value,
        state,
        best_restart,
        restarts_converged: converged,
        evaluations,
    })
}

/// `μ ln e_r(exp(σ/μ))`, with `e_r` the elementary symmetric polynomial.
///
/// Smooth, and within `μ ln C(n, r)` above the sum of the `r` largest `σ`.
fn smoothed_kyfan(sv: &[f64], r: usize, mu: f64) -> f64 {
    // log e_j over the values seen so far
    let mut log_e = vec![f64::NEG_INFINITY; r + 1];
    log_e[0] = 0.0;
    for &s in sv {
        let a = s / mu;
        for j in (1..=r).rev() {
            log_e[j] = log_add_exp(log_e[j], a + log_e[j - 1]);
        }
    }
    mu * log_e[r]
}

fn log_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

fn params_from_factor(l: &CMatrix) -> Vec<f64> {
    let (n, k) = l.shape();
    let mut out = Vec::with_capacity(factor_param_count(n, k));
    for j in 0..k {
        out.push(l[(j, j)].re);
        for i in j + 1..n {
            out.push(l[(i, j)].re);
            out.push(l[(i, j)].im);
        }
    }
    out
}

/// Spectrum `w_j² / Σ w²`, sorted descending.
fn simplex_from_params(w: &[f64]) -> Option<Vec<f64>> {
    let s: f64 = w.iter().map(|v| v * v).sum();
    if !(s > 0.0) || !s.is_finite() {
        return None;
    }
    let mut e: Vec<f64> = w.iter().map(|v| v * v / s).collect();
    e.sort_by(|a, b| b.total_cmp(a));
    Some(e)
}

/// Numerically maximises `d(X, D_{n,k})` over states of dimension `n`.
///
/// The distance depends on `X` only through its spectrum, so the search runs
/// over spectra `w² / Σ w²`.
pub fn oracle_max_distance(n: usize, k: usize, spec: NormSpec, cfg: &OracleConfig) -> Result<OracleMax> {
    cfg.validate()?;
    if k == 0 || k >= n {
        return Err(Error::BadRange(format!("need 1 <= k < n, got n = {n}, k = {k}")));
    }
    spec.check_for_dim(n)?;

    let mut objective = |w: &[f64]| -> f64 {
        match simplex_from_params(w) {
            Some(e) => -distance_to_low_rank(&e, k, spec).unwrap_or(f64::NEG_INFINITY),
            None => f64::INFINITY,
        }
    };

    let mut best: Option<(usize, LocalResult)> = None;
    let mut converged = 0;
    let mut evaluations = 0;
    for restart in 0..cfg.restarts {
        let mut rng = cfg.rng_for(restart);
        let start: Vec<f64> = (0..n).map(|_| rng.random::<f64>() + 0.05).collect();
        let res = local_search(&mut objective, start, 0.3, cfg, &mut rng);
        evaluations += res.evaluations;
        if res.converged {
            converged += 1;
        }
        if best.as_ref().is_none_or(|(_, b)| res.value < b.value) {
            best = Some((restart, res));
        }
    }
    let (best_restart, best) = best.expect("at least one restart");
    if converged == 0 {
        return Err(Error::NonConvergence { best: -best.value });
    }
    let eigenvalues = simplex_from_params(&best.x).ok_or(Error::NonConvergence { best: -best.value })?;
    Ok(OracleMax {
        value: -best.value,
        eigenvalues,
        best_restart,
        restarts_converged: converged,
        evaluations,
    })
}
