use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A pairing that must be nonzero vanished (pole of an orbit invariant).
    #[error("point is not in the strongly regular set")]
    NotInRegularSet,

    #[error("eigenvalue {re}+{im}i of the leading matrix lies on the imaginary axis")]
    BoundaryEigenvalue { re: f64, im: f64 },

    #[error("series remainder {remainder:.3e} too large at z0={z0}; try z0 <= {suggested_z0:.4}")]
    RadiusError { z0: f64, remainder: f64, suggested_z0: f64 },

    #[error("reduction step j={j} is singular although no resonance was detected (eigenvalues {pair:?})")]
    ResonanceFailure { j: usize, pair: (f64, f64) },

    #[error("numerical rank is ambiguous; singular values {spectrum:?}")]
    AmbiguousRank { spectrum: Vec<f64> },

    #[error("integration step underflow near z={z}")]
    StepUnderflow { z: f64 },

    #[error("numerical failure: {0}")]
    Numeric(String),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidParameter(_) | Error::NotInRegularSet => 2,
            _ => 3,
        }
    }
}
