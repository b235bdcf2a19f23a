//! Error type shared across the crate, with the exit-code classes used by the
//! command-line interface (1 = configuration, 2 = numeric precondition,
//! 3 = convergence).

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left}x{left} vs {right}x{right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix has non-finite entries")]
    NonFinite,

    #[error("matrix is not Hermitian: deviation {deviation:.3e} exceeds tolerance {tol:.3e}")]
    NotHermitian { deviation: f64, tol: f64 },

    #[error("matrix is not skew-Hermitian: deviation {deviation:.3e} exceeds tolerance {tol:.3e}")]
    NotSkewHermitian { deviation: f64, tol: f64 },

    #[error("matrix is not positive definite: smallest eigenvalue {min_eig:.3e} below floor {floor:.3e}")]
    NotPositiveDefinite { min_eig: f64, floor: f64 },

    #[error("trace {trace:.12} is not 1 within {tol:.3e}")]
    NotUnitTrace { trace: f64, tol: f64 },

    #[error("operator is not unitary: deviation {deviation:.3e} exceeds tolerance {tol:.3e}")]
    NotUnitary { deviation: f64, tol: f64 },

    #[error("not a purification: Hilbert-Schmidt norm {norm:.12} is not 1 within {tol:.3e}")]
    NotUnitNorm { norm: f64, tol: f64 },

    #[error("purification is near-singular: smallest singular value {sv:.3e} below floor {floor:.3e}")]
    NearSingular { sv: f64, floor: f64 },

    #[error("vector is not tangent at the given base point: residual {residual:.3e} exceeds tolerance {tol:.3e}")]
    NotTangent { residual: f64, tol: f64 },

    #[error("point is off the momentum level set: drift {drift:.3e} exceeds tolerance {tol:.3e}")]
    LevelSetDrift { drift: f64, tol: f64 },

    #[error("initial purification does not project onto the initial density operator: residual {residual:.3e}")]
    ProjectionMismatch { residual: f64 },

    #[error("invalid time grid: t1 ({t1}) must exceed t0 ({t0}) and steps ({steps}) must be positive")]
    InvalidGrid { t0: f64, t1: f64, steps: usize },

    #[error("curve needs at least 3 samples for differentiation, got {got}")]
    TooFewSamples { got: usize },

    #[error("sample index {index} out of range (curve has {len} samples)")]
    SampleOutOfRange { index: usize, len: usize },

    #[error("curve is discontinuous at t = {t}: jump {jump:.3e} exceeds bound {bound:.3e}")]
    CurveDiscontinuity { t: f64, jump: f64, bound: f64 },

    #[error("eigenvalue crossing detected at t = {t}: degeneracy cluster structure changed mid-curve")]
    EigenvalueCrossing { t: f64 },

    #[error("Bloch vector exits the open unit ball at t = {t} (r = {r:.6})")]
    BlochExitsBall { t: f64, r: f64 },

    #[error("evolution operator does not parallel transport the state: residual {residual:.3e} exceeds {tol:.3e}")]
    NotParallelTransporting { residual: f64, tol: f64 },

    #[error("basis construction produced {got} vectors where {expected} were expected (degenerate Gram system)")]
    DegenerateBasis { expected: usize, got: usize },

    #[error("scenario parameter out of domain: {0}")]
    ParameterDomain(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("config syntax error at line {line}, column {column}: {message}")]
    ConfigSyntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("expression error in `{expr}` at position {position}: {message}")]
    Expression {
        expr: String,
        position: usize,
        message: String,
    },

    #[error("lift failed to converge: {0}")]
    Convergence(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Exit-code class for the CLI: 1 config, 2 numeric precondition, 3 convergence.
    pub fn exit_class(&self) -> i32 {
        use Error::*;
        match self {
            Config(_) | ConfigSyntax { .. } | Expression { .. } | Io { .. } => 1,
            Convergence(_) => 3,
            _ => 2,
        }
    }
}
