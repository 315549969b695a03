use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("unsupported state dimension {0}, expected 2 or 4")]
    UnsupportedDimension(usize),

    #[error("state is not normalized (squared norm {0})")]
    NotNormalized(f64),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    /// The overlap vanished, so its argument carries no information.
    #[error("phase undefined: overlap modulus {modulus:e} is below tolerance")]
    UndefinedPhase { modulus: f64 },

    #[error("invalid qubit index {0}, expected 1 or 2")]
    InvalidQubit(usize),

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("time {t} s outside [0, {total}] s")]
    TimeOutOfRange { t: f64, total: f64 },
}

impl Error {
    /// True for failures of the numerics rather than of the caller's input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::UndefinedPhase { .. } | Error::NoConvergence { .. }
        )
    }
}
