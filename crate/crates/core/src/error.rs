use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate edge id `{0}`")]
    DuplicateEdge(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("simple-cycle enumeration exceeded the cap of {0} cycles")]
    CycleCapExceeded(usize),
    #[error("graph has a cycle")]
    Cyclic,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            column,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdealError {
    #[error("vertex set is not hereditary")]
    NotHereditary,
    #[error("vertex set is not saturated")]
    NotSaturated,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("hereditary saturated enumeration exceeded the cap of {0} sets")]
    CapExceeded(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LpError {
    #[error("dimension mismatch: matrix has {rows} rows but right-hand side has {rhs} entries")]
    DimensionMismatch { rows: usize, rhs: usize },
    #[error("ragged matrix: row {row} has {found} columns, expected {expected}")]
    Ragged { row: usize, found: usize, expected: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShiftError {
    #[error("matrix has a zero row at index {0}")]
    ZeroRow(usize),
    #[error("word is not a path of the matrix graph")]
    InvalidWord,
    #[error("vertex {0} does not connect to a cycle with an exit")]
    NoExitCycle(usize),
    #[error("vertex index {0} out of range")]
    UnknownVertex(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("report is not valid JSON: {0}")]
    Json(String),
    #[error("unknown input format `{0}`")]
    Format(String),
    #[error("embedded input does not parse: {0}")]
    Input(#[from] ParseError),
}
