use thiserror::Error;

/// Errors raised by the algebra, group and boundary routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("shape mismatch: expected {expected}, got {got}")]
    Shape { expected: String, got: String },

    #[error("matrix is not skew-symmetric (defect {defect:e})")]
    NotSkew { defect: f64 },

    #[error("matrix is not in so(n+1,1): X^T J + J X has defect {defect:e}")]
    NotInAlgebra { defect: f64 },

    #[error("dimension mismatch: n = {left} vs n = {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("J-orthogonality violated: |g^T J g - J| = {defect:e} (tolerance {tolerance:e})")]
    NotJOrthogonal { defect: f64, tolerance: f64 },

    #[error("determinant {det} differs from 1")]
    Determinant { det: f64 },

    #[error("wrong component: time-time entry {entry} < 1")]
    WrongComponent { entry: f64 },

    #[error("norm {norm} exceeds cap {cap}")]
    NormCap { norm: f64, cap: f64 },

    #[error("Iwasawa scale |t| = {t} exceeds cap {cap}")]
    ScaleCap { t: f64, cap: f64 },

    #[error("reconstruction defect {defect:e} exceeds tolerance {tolerance:e}")]
    Reconstruction { defect: f64, tolerance: f64 },

    #[error("not a unit vector (|b| = {norm})")]
    NotUnit { norm: f64 },

    #[error("tangent vector not orthogonal to its base point (w.b = {dot:e})")]
    NotTangent { dot: f64 },

    #[error("unsupported boundary dimension n = {0}")]
    UnsupportedDimension(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("quadrature self-check failed: relative discrepancy {discrepancy:e} against doubled degree")]
    QuadratureTooCoarse { discrepancy: f64 },

    #[error("wrong section space: {0}")]
    WrongSectionSpace(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
