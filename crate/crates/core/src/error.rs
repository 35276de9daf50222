//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by geometric and algebraic routines.
///
/// The broad split matters to callers: `DimensionMismatch`, `OffQuadric`,
/// `Unsupported` and `InvalidParameter` indicate malformed input, while
/// `NotDegenerate`, `DegenerateFace` and `Singular` indicate input that is
/// well-formed but violates an assumption of the requested computation.
#[derive(Debug, Error)]
pub enum GeomError {
    /// A coordinate vector has the wrong length for the ambient space.
    #[error("dimension mismatch: expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A point that should lie on the model quadric does not, beyond the
    /// projection tolerance.
    #[error("point lies off the quadric: residual {residual:.3e} exceeds tolerance {tol:.3e}")]
    OffQuadric { residual: f64, tol: f64 },

    /// The requested operation is not defined in the given space.
    #[error("unsupported operation: {0}")]
    Unsupported(String),

    /// The vertex set admits no linear/affine dependence, i.e. it is a
    /// genuine simplex rather than a degenerate one.
    #[error("configuration is not degenerate: the vertices admit no dependence")]
    NotDegenerate,

    /// A face that must be non-degenerate has deficient rank.
    #[error("degenerate face: {0}")]
    DegenerateFace(String),

    /// A linear system or limit that must be regular is singular.
    #[error("singular configuration: {0}")]
    Singular(String),

    /// A scalar or structural parameter is out of range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, GeomError>;
