//! Hermitian and density matrices, and the eigendecomposition every other
//! module builds on.
//!
//! A [`DensityMatrix`] is validated once, at construction, and carries its
//! own [`Spectrum`]; eigenvalues within `tol_psd` below zero are clipped to
//! zero in that stored spectrum.

use nalgebra::linalg::SymmetricEigen;
use serde::Serialize;

use crate::error::{Error, Result, StateViolation};
use crate::{CMatrix, C64};

const EIGEN_MAX_ITERS: usize = 10_000;

/// Numerical tolerances used when validating inputs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    /// Max |a_ij - conj(a_ji)|.
    pub herm: f64,
    /// Max |trace - 1|.
    pub trace: f64,
    /// Eigenvalues down to `-psd` are accepted (and clipped to zero).
    pub psd: f64,
    /// Entrywise reconstruction error of a spectral decomposition.
    pub recon: f64,
    /// Orthonormality error of eigenvector columns.
    pub orth: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            herm: 1e-10,
            trace: 1e-10,
            psd: 1e-9,
            recon: 1e-8,
            orth: 1e-8,
        }
    }
}

/// Square complex matrix equal to its conjugate transpose within tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    entries: CMatrix,
}

impl HermitianMatrix {
    pub fn new(entries: CMatrix, tol_herm: f64) -> Result<Self> {
        if !entries.is_square() {
            return Err(Error::NotSquare {
                rows: entries.nrows(),
                cols: entries.ncols(),
            });
        }
        let dev = hermitian_deviation(&entries);
        if !(dev <= tol_herm) {
            return Err(Error::NotHermitian { max_deviation: dev });
        }
        Ok(HermitianMatrix { entries })
    }

    /// Real diagonal matrix.
    pub fn from_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let entries = CMatrix::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(diag[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        HermitianMatrix { entries }
    }

    /// Wraps a matrix known to be Hermitian up to rounding (e.g. a difference
    /// or unitary conjugate of Hermitian matrices). The matrix is symmetrised.
    pub(crate) fn from_hermitian_parts(m: CMatrix) -> Self {
        let sym = (&m + m.adjoint()) * C64::new(0.5, 0.0);
        HermitianMatrix { entries: sym }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_matrix(self) -> CMatrix {
        self.entries
    }

    pub fn trace(&self) -> f64 {
        self.entries.diagonal().iter().map(|z| z.re).sum()
    }

    /// Eigenvalues sorted descending.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(hermitian_eigen(&self.entries)?.eigenvalues)
    }

    /// `U* X U` for a square `u` of matching size.
    pub fn conjugate_by(&self, u: &CMatrix) -> Result<Self> {
        if u.nrows() != self.dim() || u.ncols() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: u.nrows(),
            });
        }
        Ok(Self::from_hermitian_parts(u.adjoint() * &self.entries * u))
    }

    pub fn sub(&self, other: &HermitianMatrix) -> Result<HermitianMatrix> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(HermitianMatrix {
            entries: &self.entries - &other.entries,
        })
    }

    pub fn neg(&self) -> HermitianMatrix {
        HermitianMatrix {
            entries: -self.entries.clone(),
        }
    }
}

/// A Hermitian, positive semidefinite, unit-trace matrix with its spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    base: HermitianMatrix,
    spectrum: Spectrum,
}

impl DensityMatrix {
    /// Builds `Σ_j λ_j v_j v_j*` from a spectrum already known to describe a
    /// density matrix. Eigenvalues must be nonnegative, descending, and sum to one.
    pub(crate) fn from_spectrum(spectrum: Spectrum) -> Self {
        let base = HermitianMatrix::from_hermitian_parts(spectrum.reconstruct());
        DensityMatrix { base, spectrum }
    }

    /// Maximally mixed state on an `m`-dimensional block, padded with zeros to size `n`.
    pub fn uniform_block(n: usize, m: usize) -> Result<Self> {
        if m == 0 || m > n {
            return Err(Error::BadRange(format!("block size {m} for n = {n}")));
        }
        let mut eig = vec![0.0; n];
        eig[..m].fill(1.0 / m as f64);
        Ok(Self::from_spectrum(Spectrum {
            eigenvalues: eig,
            eigenvectors: CMatrix::identity(n, n),
        }))
    }

    pub fn hermitian(&self) -> &HermitianMatrix {
        &self.base
    }

    pub fn matrix(&self) -> &CMatrix {
        self.base.matrix()
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    /// Descending, nonnegative eigenvalues.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.spectrum.eigenvalues
    }

    /// Number of eigenvalues strictly above `tol`.
    pub fn rank(&self, tol: f64) -> usize {
        self.spectrum.eigenvalues.iter().filter(|&&x| x > tol).count()
    }
}

/// Descending eigenvalues with orthonormal eigenvectors stored column-wise.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `Σ_j x_j v_j v_j*`.
    pub fn reconstruct(&self) -> CMatrix {
        let v = &self.eigenvectors;
        let mut scaled = v.clone();
        for (j, &x) in self.eigenvalues.iter().enumerate() {
            scaled.column_mut(j).scale_mut(x);
        }
        scaled * v.adjoint()
    }

    /// Max entrywise deviation of `V* V` from the identity.
    pub fn orthonormality_error(&self) -> f64 {
        let n = self.dim();
        let g = self.eigenvectors.adjoint() * &self.eigenvectors;
        max_abs_entry(&(g - CMatrix::identity(n, n)))
    }
}

/// Checks the three density-matrix conditions and returns every violated one.
///
/// A non-Hermitian input is reported alone, since its eigenvalues are not real.
pub fn validate_density(m: CMatrix, tols: &Tolerances) -> Result<DensityMatrix> {
    let base = HermitianMatrix::new(m, tols.herm)?;
    let mut spectrum = hermitian_eigen(base.matrix())?;

    let mut violations = Vec::new();
    let min_eig = spectrum.eigenvalues.last().copied().unwrap_or(0.0);
    if min_eig < -tols.psd {
        violations.push(StateViolation::NotPsd {
            min_eigenvalue: min_eig,
        });
    }
    let trace = base.trace();
    if !((trace - 1.0).abs() <= tols.trace) {
        violations.push(StateViolation::TraceNotOne { trace });
    }
    if !violations.is_empty() {
        return Err(Error::InvalidState(violations));
    }

    for x in spectrum.eigenvalues.iter_mut() {
        if *x < 0.0 {
            *x = 0.0;
        }
    }
    Ok(DensityMatrix { base, spectrum })
}

/// Spectral decomposition of a validated state (eigenvalues clipped at zero).
pub fn spectral_decompose(x: &DensityMatrix) -> Spectrum {
    x.spectrum.clone()
}

/// Singular values of a Hermitian matrix: |eigenvalues|, sorted descending.
pub fn hermitian_singular_values(x: &HermitianMatrix) -> Result<Vec<f64>> {
    let eig = eigenvalues_only(x.matrix())?;
    Ok(sorted_abs_desc(&eig))
}

pub(crate) fn sorted_abs_desc(values: &[f64]) -> Vec<f64> {
    let mut sv: Vec<f64> = values.iter().map(|x| x.abs()).collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Full Hermitian eigendecomposition, eigenvalues descending.
pub(crate) fn hermitian_eigen(m: &CMatrix) -> Result<Spectrum> {
    let n = m.nrows();
    if n == 0 {
        return Ok(Spectrum {
            eigenvalues: Vec::new(),
            eigenvectors: CMatrix::zeros(0, 0),
        });
    }
    let eig = SymmetricEigen::try_new(m.clone(), f64::EPSILON, EIGEN_MAX_ITERS)
        .ok_or(Error::EigensolverFailure)?;
    if eig.eigenvalues.iter().any(|x| !x.is_finite()) {
        return Err(Error::EigensolverFailure);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let eigenvalues = order.iter().map(|&j| eig.eigenvalues[j]).collect();
    let eigenvectors = CMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
    })
}

/// Eigenvalues only (unsorted); cheaper than [`hermitian_eigen`].
pub(crate) fn eigenvalues_only(m: &CMatrix) -> Result<Vec<f64>> {
    if m.nrows() == 0 {
        return Ok(Vec::new());
    }
    let eig = SymmetricEigen::try_new(m.clone(), f64::EPSILON, EIGEN_MAX_ITERS)
        .ok_or(Error::EigensolverFailure)?;
    let v: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::EigensolverFailure);
    }
    Ok(v)
}

fn hermitian_deviation(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut dev: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            let d = (m[(i, j)] - m[(j, i)].conj()).norm();
            if d.is_nan() {
                return f64::NAN;
            }
            dev = dev.max(d);
        }
    }
    dev
}

pub(crate) fn max_abs_entry(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc: f64, z| acc.max(z.norm()))
}
