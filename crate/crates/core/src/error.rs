use thiserror::Error;

use crate::state::Violation;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("matrix is not Hermitian (max |m - m†| = {0:.3e})")]
    NotHermitian(f64),

    #[error("not a valid density matrix: {}", fmt_violations(.0))]
    InvalidState(Vec<Violation>),

    #[error("matrix is not of X form (off-pattern magnitude {0:.3e})")]
    NotXState(f64),

    #[error("spectrum check failed: {0}")]
    Spectrum(String),

    #[error("invariant drift at tau = {tau}: {what} = {value:.3e}")]
    InvariantDrift { tau: f64, what: &'static str, value: f64 },

    #[error("trajectory too sparse near tau = {tau}: sample gap {gap:.3e}")]
    TooSparse { tau: f64, gap: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Numerical failures (as opposed to bad input or configuration).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Spectrum(_) | Error::InvariantDrift { .. } | Error::TooSparse { .. }
        )
    }
}

fn fmt_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
