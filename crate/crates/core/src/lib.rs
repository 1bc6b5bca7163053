//! Closest low-rank density matrices under unitary similarity invariant
//! norms, and the states that sit farthest from the low-rank set.
//!
//! The crate is organised bottom-up:
//!
//! * [`spectra`]: Hermitian / density matrix validation and eigendecomposition.
//! * [`norms`]: Schatten-p and Ky Fan-r norms on singular values and matrices.
//! * [`majorization`]: majorization and the all-USI-norm dominance test.
//! * [`approx`]: the closest rank-≤k state and its distance.
//! * [`farthest`]: the candidate family `I_m/m ⊕ O`, closed forms, selectors,
//!   counterexample finders and threshold root-finding.
//! * [`oracle`]: brute-force minimisation / maximisation used to check the
//!   closed forms independently.
//! * [`cli`]: request handling behind the `lowrankdm` binary.

pub mod approx;
pub mod cli;
pub mod error;
pub mod farthest;
pub mod majorization;
pub mod matrix_io;
pub mod norms;
pub mod oracle;
pub mod random;
pub mod spectra;

pub use approx::{closest_rank_k, distance_to_low_rank, gamma_shift, ApproxResult};
pub use error::{Error, Result, StateViolation};
pub use farthest::{
    candidate_distance, farthest_search, kyfan_optimal_m, operator_norm_farthest,
    schatten_counterexample, schatten_crossing, schatten_is_always_maxmixed,
    schatten_maxmixed_distance, FarthestReport, KyFanSelector,
};
pub use majorization::{majorizes, usi_dominates, Dominance};
pub use norms::{norm_of_matrix, norm_of_values, norm_power_of_values, NormSpec};
pub use oracle::{oracle_max_distance, oracle_min_distance, OracleConfig};
pub use spectra::{
    hermitian_singular_values, spectral_decompose, validate_density, DensityMatrix,
    HermitianMatrix, Spectrum, Tolerances,
};

/// Complex scalar used for all matrix entries.
pub type C64 = num_complex::Complex64;
/// Dense complex matrix.
pub type CMatrix = nalgebra::DMatrix<C64>;
