use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("signature mismatch: expected {expected:?}, found {found:?}")]
    SignatureMismatch { expected: Vec<usize>, found: Vec<usize> },

    #[error("subsystem index {index} out of range for {count} subsystems")]
    SlotOutOfRange { index: usize, count: usize },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The pump reached the parametric instability threshold |Ω_p| ≥ δ_m.
    #[error("parametric instability: |omega_p| = {omega_p} must stay below delta_m = {delta_m}")]
    Instability { omega_p: f64, delta_m: f64 },

    #[error("no squeezed fixed point: d_plus = {d_plus} must stay below d_minus = {d_minus}")]
    NoSqueezedFixedPoint { d_plus: f64, d_minus: f64 },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("operator is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("truncation failure: {0}")]
    Truncation(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("mean spin {length:e} is below the threshold {threshold:e}; squeezing direction undefined")]
    UndefinedDirection { length: f64, threshold: f64 },
}

impl Error {
    /// True for the two failure classes that a caller can only fix by
    /// changing numerics (truncation or integrator tolerances).
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Truncation(_) | Error::Numerical(_))
    }
}
