use std::fmt;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// One way in which a matrix fails to be a density matrix.
#[derive(Debug, Clone, PartialEq)]
pub enum StateViolation {
    NotHermitian { max_deviation: f64 },
    NotPsd { min_eigenvalue: f64 },
    TraceNotOne { trace: f64 },
}

impl fmt::Display for StateViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateViolation::NotHermitian { max_deviation } => {
                write!(f, "NotHermitian (max |a_ij - conj(a_ji)| = {max_deviation:e})")
            }
            StateViolation::NotPsd { min_eigenvalue } => {
                write!(f, "NotPSD (smallest eigenvalue {min_eigenvalue:e})")
            }
            StateViolation::TraceNotOne { trace } => write!(f, "TraceNotOne (trace {trace})"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (max |a_ij - conj(a_ji)| = {max_deviation:e})")]
    NotHermitian { max_deviation: f64 },

    #[error("not a density matrix: {}", join_violations(.0))]
    InvalidState(Vec<StateViolation>),

    #[error("eigensolver did not converge")]
    EigensolverFailure,

    #[error("invalid norm specification: {0}")]
    InvalidSpec(String),

    #[error("rank bound k = {k} outside 1..={n}")]
    BadRank { k: usize, n: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("parameters out of range: {0}")]
    BadRange(String),

    #[error("no counterexample found within search bounds ({0})")]
    NotFound(String),

    #[error("no sign change on bracket [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("local search did not converge (best value {best})")]
    NonConvergence { best: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by bad input rather than numerical trouble.
    pub fn is_validation(&self) -> bool {
        !matches!(
            self,
            Error::EigensolverFailure
                | Error::NotFound(_)
                | Error::NoSignChange { .. }
                | Error::InternalInconsistency(_)
                | Error::NonConvergence { .. }
        )
    }

    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotSquare { .. } => "NotSquare",
            Error::NotHermitian { .. } => "NotHermitian",
            Error::InvalidState(_) => "InvalidState",
            Error::EigensolverFailure => "EigensolverFailure",
            Error::InvalidSpec(_) => "InvalidSpec",
            Error::BadRank { .. } => "BadRank",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::BadRange(_) => "BadRange",
            Error::NotFound(_) => "NotFound",
            Error::NoSignChange { .. } => "NoSignChange",
            Error::InternalInconsistency(_) => "InternalInconsistency",
            Error::NonConvergence { .. } => "NonConvergence",
            Error::Parse(_) => "Parse",
            Error::Io(_) => "Io",
        }
    }
}

fn join_violations(v: &[StateViolation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}
