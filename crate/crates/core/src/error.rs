use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("malformed decimal `{0}`")]
    Decimal(String),
    #[error("line {line}: {message}")]
    Config { line: usize, message: String },
    #[error("missing geometry key `{0}`")]
    MissingKey(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum IntervalError {
    #[error("division by an interval containing zero")]
    DivisionByZero,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("determinant of a non-square {rows}x{cols} matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("minor size {k} exceeds matrix dimensions {rows}x{cols}")]
    MinorTooLarge { k: usize, rows: usize, cols: usize },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("platform sides {0} violate the strict triangle inequality")]
    DegenerateTriangle(String),
    #[error("invalid geometry: {0}")]
    Invalid(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("system has unsubstituted parameter `{0}`")]
    UnboundParameter(String),
    #[error("box has {got} components, system has {expected} unknowns")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("system needs at least as many equations as unknowns ({equations} < {unknowns})")]
    Underdetermined { equations: usize, unknowns: usize },
    #[error("expected a square system, got {equations} equations in {unknowns} unknowns")]
    NotSquare { equations: usize, unknowns: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AtlasError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid sampling: {0}")]
    InvalidSampling(String),
    #[error("negative leg length {0}")]
    NegativeLength(String),
    #[error(transparent)]
    Solve(#[from] SolveError),
}
