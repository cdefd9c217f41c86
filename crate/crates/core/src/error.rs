use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("inversion of a series with zero constant term")]
    InversionAtZero,
    #[error("system matrix is not regular at zero")]
    NotRegularAtZero,
    #[error("system not in the required form: {0}")]
    FormViolation(String),
    #[error("element type does not allow this operation: {0}")]
    TypeMismatch(String),
    #[error("the zero element has no inverse")]
    ZeroInverse,
    #[error("transformation is not admissible: {0}")]
    NotAdmissible(String),
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("unsupported element: {0}")]
    Unsupported(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("json: {0}")]
    Json(String),
    #[error("coupling condition violated: {0}")]
    CouplingViolated(String),
}

pub type Result<T> = std::result::Result<T, Error>;
