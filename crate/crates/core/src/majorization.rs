//! Majorization, and the criterion for `‖X‖ ≤ ‖Y‖` in every unitary
//! similarity invariant norm at once.
//!
//! For Hermitian `X`, `Y` that holds iff `λ(X) ≺ t·λ(Y) + (1−t)·λ(−Y)` for
//! some `t ∈ [0, 1]`. Both `λ(Y)` and `λ(−Y)` are sorted descending, so their
//! convex combination is too, and every prefix-sum condition is affine in
//! `t`. The feasible set of `t` is therefore an interval, computed exactly.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::spectra::HermitianMatrix;

pub const DEFAULT_TOL: f64 = 1e-9;

/// `x ≺ y`: descending prefix sums of `x` never exceed those of `y` and the
/// totals agree, all within `tol`.
pub fn majorizes(x: &[f64], y: &[f64], tol: f64) -> Result<bool> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let xs = sorted_desc(x);
    let ys = sorted_desc(y);
    let (mut px, mut py) = (0.0, 0.0);
    for (a, b) in xs.iter().zip(&ys) {
        px += a;
        py += b;
        if px > py + tol {
            return Ok(false);
        }
    }
    Ok((px - py).abs() <= tol)
}

/// Result of [`usi_dominates`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Dominance {
    pub dominated: bool,
    /// Largest feasible `t`, when one exists.
    pub witness: Option<f64>,
    /// Full feasible interval of `t`, when nonempty.
    pub feasible: Option<(f64, f64)>,
}

/// Decides whether `‖X‖ ≤ ‖Y‖` for all USI norms.
///
/// The witness returned is the largest feasible `t`, so `X = Y` gives `t = 1`.
pub fn usi_dominates(x: &HermitianMatrix, y: &HermitianMatrix, tol: f64) -> Result<Dominance> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            left: x.dim(),
            right: y.dim(),
        });
    }
    let lx = x.eigenvalues()?;
    let ly = y.eigenvalues()?;
    Ok(dominance_from_eigenvalues(&lx, &ly, tol))
}

/// Same test on eigenvalue vectors (any order).
///
/// The interval is computed without slack first; `tol` only widens it when the
/// exact interval is empty.
pub fn dominance_from_eigenvalues(lx: &[f64], ly: &[f64], tol: f64) -> Dominance {
    let lx = sorted_desc(lx);
    let ly = sorted_desc(ly);
    match feasible_interval(&lx, &ly, 0.0).or_else(|| feasible_interval(&lx, &ly, tol)) {
        Some((lo, hi)) => Dominance {
            dominated: true,
            witness: Some(hi),
            feasible: Some((lo, hi)),
        },
        None => Dominance {
            dominated: false,
            witness: None,
            feasible: None,
        },
    }
}

fn feasible_interval(lx: &[f64], ly: &[f64], tol: f64) -> Option<(f64, f64)> {
    let n = lx.len();
    // λ(−Y), descending.
    let lny: Vec<f64> = ly.iter().rev().map(|v| -v).collect();

    let mut lo = 0.0_f64;
    let mut hi = 1.0_f64;
    let (mut px, mut pa, mut pb) = (0.0, 0.0, 0.0);
    for r in 0..n {
        px += lx[r];
        pa += ly[r];
        pb += lny[r];
        // prefix of target at t is t·pa + (1−t)·pb = pb + t·(pa − pb)
        let slope = pa - pb;
        let need = px - pb;
        if r + 1 < n {
            // pb + t·slope ≥ px − tol
            restrict_ge(&mut lo, &mut hi, slope, need - tol);
        } else {
            // |pb + t·slope − px| ≤ tol
            restrict_ge(&mut lo, &mut hi, slope, need - tol);
            restrict_ge(&mut lo, &mut hi, -slope, -(need + tol));
        }
        if lo > hi {
            return None;
        }
    }
    Some((lo, hi))
}

/// Intersects `[lo, hi]` with `{t : slope·t ≥ bound}`.
fn restrict_ge(lo: &mut f64, hi: &mut f64, slope: f64, bound: f64) {
    if slope == 0.0 {
        if bound > 0.0 {
            *lo = f64::INFINITY;
        }
    } else if slope > 0.0 {
        *lo = lo.max(bound / slope);
    } else {
        *hi = hi.min(bound / slope);
    }
}

fn sorted_desc(v: &[f64]) -> Vec<f64> {
    let mut s = v.to_vec();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn simple_majorization() {
        assert!(majorizes(&[0.5, 0.5, 0.0], &[1.0, 0.0, 0.0], DEFAULT_TOL).unwrap());
        assert!(!majorizes(&[1.0, 0.0, 0.0], &[0.5, 0.5, 0.0], DEFAULT_TOL).unwrap());
        let x = [0.3, -0.1, 0.8];
        assert!(majorizes(&x, &x, DEFAULT_TOL).unwrap());
    }

    #[test]
    fn unequal_totals_fail() {
        assert!(!majorizes(&[0.5, 0.4], &[1.0, 0.0], DEFAULT_TOL).unwrap());
    }

    #[test]
    fn length_mismatch() {
        assert!(matches!(
            majorizes(&[1.0], &[1.0, 0.0], DEFAULT_TOL),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn constant_shift_is_majorized_by_any_equal_sum_vector() {
        // k copies of the mean are majorized by anything with the same total
        let y = [0.31, -0.07, -0.2, 0.01];
        let mean = y.iter().sum::<f64>() / 4.0;
        assert!(majorizes(&[mean; 4], &y, DEFAULT_TOL).unwrap());
    }

    #[test]
    fn equal_matrices_witness_one() {
        let x = HermitianMatrix::from_diagonal(&[0.4, -0.3, 0.1]);
        let d = usi_dominates(&x, &x, DEFAULT_TOL).unwrap();
        assert!(d.dominated);
        assert_abs_diff_eq!(d.witness.unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn larger_matrix_not_dominated() {
        let x = HermitianMatrix::from_diagonal(&[0.5, 0.5]);
        let y = HermitianMatrix::from_diagonal(&[0.1, 0.1]);
        assert!(!usi_dominates(&x, &y, DEFAULT_TOL).unwrap().dominated);
        assert!(usi_dominates(&y, &x, DEFAULT_TOL).unwrap().dominated);
    }

    #[test]
    fn dimension_mismatch() {
        let x = HermitianMatrix::from_diagonal(&[0.5, 0.5]);
        let y = HermitianMatrix::from_diagonal(&[0.5, 0.5, 0.0]);
        assert!(matches!(
            usi_dominates(&x, &y, DEFAULT_TOL),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn three_level_witnesses() {
        let y = HermitianMatrix::from_diagonal(&[1.0 / 3.0, 1.0 / 3.0, -2.0 / 3.0]);
        // x2 <= 1/3: t = 1
        let x = HermitianMatrix::from_diagonal(&[0.3, 0.1, -0.4]);
        let d = usi_dominates(&x, &y, DEFAULT_TOL).unwrap();
        assert!(d.dominated);
        assert_abs_diff_eq!(d.witness.unwrap(), 1.0, epsilon = 1e-9);
        // 1/3 <= x2 <= 1/2: t = 2 - 3 x2
        let x = HermitianMatrix::from_diagonal(&[0.45, 0.05, -0.5]);
        let d = usi_dominates(&x, &y, DEFAULT_TOL).unwrap();
        assert!(d.dominated);
        assert_abs_diff_eq!(d.witness.unwrap(), 2.0 - 3.0 * 0.45, epsilon = 1e-9);
    }

    #[test]
    fn nonzero_trace_pins_t() {
        // trace X = 0.2, trace Y = 1 => t = (0.2 + 1)/2 = 0.6
        let x = HermitianMatrix::from_diagonal(&[0.1, 0.1]);
        let y = HermitianMatrix::from_diagonal(&[0.5, 0.5]);
        let d = usi_dominates(&x, &y, DEFAULT_TOL).unwrap();
        assert!(d.dominated);
        assert_abs_diff_eq!(d.witness.unwrap(), 0.6, epsilon = 1e-9);
        let (lo, hi) = d.feasible.unwrap();
        assert_abs_diff_eq!(lo, 0.6, epsilon = 1e-8);
        assert_abs_diff_eq!(hi, 0.6, epsilon = 1e-8);
    }
}
