//! Error type shared by all modules.

use thiserror::Error;

/// Structured errors for every fallible operation in the crate.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("coefficient fields differ: {0} vs {1}")]
    FieldMismatch(String, String),

    #[error("variable counts differ: {0} vs {1}")]
    ArityMismatch(usize, usize),

    #[error("variable index {index} out of range for {nvars} variables")]
    VarOutOfRange { index: usize, nvars: usize },

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("division by zero in {0}")]
    DivisionByZero(String),

    #[error("exact division failed: {0}")]
    InexactDivision(String),

    #[error("target degree {target} below polynomial degree {actual}")]
    DegreeTooLow { target: usize, actual: usize },

    #[error("zero input not allowed: {0}")]
    ZeroInput(String),

    #[error("polynomial is not squarefree")]
    NotSquarefree,

    #[error("unsupported arity {0}: at most 3 variables")]
    UnsupportedArity(usize),

    #[error("modulus must be monic of degree >= 1")]
    BadModulus,

    #[error("modulus is reducible over the rationals: root {0}")]
    ReducibleModulus(String),

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("vertex on base plane")]
    VertexOnPlane,

    #[error("curve is a line")]
    CurveIsLine,

    #[error("vertices coincide")]
    CoincidentVertices,

    #[error("line lies on surface")]
    LineOnSurface,

    #[error("cone and surface share a component")]
    CommonComponent,

    #[error("surface singular at point")]
    SurfaceSingularAtPoint,

    #[error("point not on curve")]
    NotOnCurve,

    #[error("not a smooth chart direction")]
    NotSmoothChartDirection,

    #[error("non-isolated singularities")]
    NonIsolatedSingularities,

    #[error("local invariant undetermined at jet ceiling {0}")]
    Undetermined(usize),

    #[error("class {0} is not simple")]
    NotSimple(String),

    #[error("invariant violation: {0}")]
    Internal(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
