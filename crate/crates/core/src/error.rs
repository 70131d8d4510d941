//! Error taxonomy shared by every module in the crate.
//!
//! All fallible public functions return [`Result`]. The variants are coarse
//! on purpose: callers dispatch on the *kind* of failure (bad argument,
//! corrupted data, broken symmetry, band overflow, quadrature stall), while
//! the message carries the specifics.

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An argument is outside its documented domain (negative time, even
    /// grid side, oversampling below the Nyquist requirement, ...).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Input data is malformed: wrong length, non-finite values, bad header.
    #[error("invalid data: {0}")]
    InvalidData(String),

    /// A field that must satisfy the reality constraint
    /// `coeff(-k) == conj(coeff(k))` violates it beyond tolerance.
    #[error("symmetry violation: {0}")]
    SymmetryViolation(String),

    /// A spectral operation received coefficients outside the band it can
    /// represent or fold.
    #[error("unsupported band: {0}")]
    UnsupportedBand(String),

    /// An adaptive quadrature failed to reach its relative tolerance within
    /// the node budget.
    #[error("quadrature failure: {0}")]
    QuadratureFailure(String),

    /// An I/O error while reading or writing serialized fields.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Short machine-readable code, used in logs and test output.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidParameter(_) => "invalid-parameter",
            Error::InvalidData(_) => "invalid-data",
            Error::SymmetryViolation(_) => "symmetry-violation",
            Error::UnsupportedBand(_) => "unsupported-band",
            Error::QuadratureFailure(_) => "quadrature-failure",
            Error::Io(_) => "io",
        }
    }
}
