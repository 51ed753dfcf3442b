use thiserror::Error;

/// Errors produced by the scattering library.
#[derive(Debug, Error)]
pub enum Error {
    /// Input lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A stated precondition on the call was violated.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The scatterer configuration itself is invalid.
    #[error("invalid potential: {0}")]
    InvalidPotential(String),

    /// The charge system is numerically singular: the chosen positions,
    /// strengths, and energy sit near a spectral singularity of the model.
    #[error(
        "resonant configuration: cond(A) = {cond:.3e} exceeds {limit:.1e} at kappa = {kappa:.6e}"
    )]
    Resonant { cond: f64, limit: f64, kappa: f64 },

    /// An iterative numerical kernel failed to converge or verify.
    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("scatterer index {index} out of range for {len} scatterers")]
    IndexOutOfRange { index: usize, len: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
