//! Seeded random matrices for tests, the oracle, and the CLI.

use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::spectra::{DensityMatrix, HermitianMatrix, Spectrum};
use crate::{CMatrix, C64};

fn gaussian_complex<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im)
}

/// `rows × cols` matrix of independent standard complex Gaussians.
pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| gaussian_complex(rng))
}

/// Haar-random unitary from the QR factorisation of a Ginibre matrix.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let qr = ginibre(n, n, rng).qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Random Hermitian matrix `(G + G*)/2`.
pub fn random_hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> HermitianMatrix {
    HermitianMatrix::from_hermitian_parts(ginibre(n, n, rng))
}

/// Uniform point on the probability simplex (flat Dirichlet).
pub fn random_simplex<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    let mut w: Vec<f64> = (0..n).map(|_| Exp1.sample(rng)).collect();
    let s: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= s);
    w
}

/// Random state `G G* / tr(G G*)` with `G` an `n × n` Ginibre matrix.
pub fn random_density<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DensityMatrix {
    let u = random_unitary(n, rng);
    let mut eig: Vec<f64> = {
        let g = ginibre(n, n, rng);
        let a = &g * g.adjoint();
        let tr: f64 = a.diagonal().iter().map(|z| z.re).sum();
        crate::spectra::eigenvalues_only(&(a / C64::new(tr, 0.0)))
            .expect("eigenvalues of a Wishart matrix")
            .into_iter()
            .map(|x| x.max(0.0))
            .collect()
    };
    normalise_desc(&mut eig);
    DensityMatrix::from_spectrum(Spectrum {
        eigenvalues: eig,
        eigenvectors: u,
    })
}

/// Random state of rank at most `k`: random orthonormal `k`-frame with
/// simplex weights.
pub fn random_low_rank_state<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> DensityMatrix {
    let u = random_unitary(n, rng);
    let mut eig = random_simplex(k, rng);
    eig.resize(n, 0.0);
    normalise_desc(&mut eig);
    DensityMatrix::from_spectrum(Spectrum {
        eigenvalues: eig,
        eigenvectors: u,
    })
}

/// State with the given eigenvalues in a random eigenbasis.
pub fn random_state_with_spectrum<R: Rng + ?Sized>(eigenvalues: &[f64], rng: &mut R) -> DensityMatrix {
    let mut eig = eigenvalues.to_vec();
    normalise_desc(&mut eig);
    DensityMatrix::from_spectrum(Spectrum {
        eigenvectors: random_unitary(eig.len(), rng),
        eigenvalues: eig,
    })
}

fn normalise_desc(eig: &mut [f64]) {
    eig.sort_by(|a, b| b.total_cmp(a));
    let s: f64 = eig.iter().sum();
    eig.iter_mut().for_each(|x| *x /= s);
}
