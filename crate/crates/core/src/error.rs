use thiserror::Error;

pub type Result<T> = std::result::Result<T, CrownError>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum CrownError {
    /// Malformed or inconsistent input (shape, finiteness, symmetry).
    #[error("invalid input: {0}")]
    Input(String),

    /// Input is well formed but outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A certified residual exceeded its tolerance.
    #[error("validation failed: residual {residual:e} exceeds tolerance {tol:e}")]
    Validation { residual: f64, tol: f64 },

    /// `cz + d` is numerically singular; the image leaves the affine chart.
    #[error("chart escape: smallest singular value {sigma_min:e} of cz+d")]
    ChartEscape { sigma_min: f64 },

    #[error("numeric failure in {what}: residual {residual:e}")]
    Numeric { what: String, residual: f64 },

    /// Takagi value too close to 1 for a stable interior resolution.
    #[error("ill-conditioned: Takagi value {value} at index {index} is within tolerance of 1")]
    Conditioning { index: usize, value: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),
}
