use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("index out of range: {0}")]
    OutOfRange(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("malformed graph: {0}")]
    MalformedGraph(String),
    #[error("graph is not connected")]
    Disconnected,
    #[error("relative structure invalid: {0}")]
    InvalidRelative(String),
    #[error("oracle does not apply: {0}")]
    OracleMismatch(String),
    #[error("loop is not closed: {0}")]
    LoopNotClosed(String),
    #[error("cells are not incident: {0}")]
    NotIncident(String),
    #[error("degenerate geometry: {0}")]
    Degenerate(String),
    #[error("automorphism does not preserve the intersection form")]
    NotSymplectic,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("complex is not concentrated in degree {expected}: {cells} cell(s) in degree {degree}")]
    NotConcentrated { expected: usize, degree: usize, cells: usize },
    #[error("specialization invalid: {0}")]
    BadSpecialization(String),
}

pub type Result<T> = std::result::Result<T, Error>;
