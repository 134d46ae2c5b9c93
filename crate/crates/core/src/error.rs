use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("projection undefined: point {index} has vanishing third coordinate")]
    ProjectionUndefined { index: usize },
    #[error("invalid rotation: {0}")]
    InvalidRotation(String),
    #[error("zero vector where a direction was required")]
    ZeroVector,
    #[error("matrix is not positive definite (min eigenvalue {0:e})")]
    NotPositiveDefinite(f64),
    #[error("degenerate camera pair: {0}")]
    DegeneratePair(&'static str),
    #[error("rank deficient: expected nullspace dimension {expected}, found {found}")]
    RankDeficient { expected: usize, found: usize },
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("elimination pivot below tolerance; retry in rotated coordinates")]
    EliminationFailed,
    #[error("no decomposition candidate passes cheirality")]
    CheiralityFailed,
    #[error("triangulation undefined")]
    TriangulationFailed,
    #[error("sampling failed after {0} attempts")]
    SamplingFailed(usize),
    #[error("expected {expected} points, got {found}")]
    WrongPointCount { expected: usize, found: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("all homotopy paths failed")]
    AllPathsFailed,
    #[error("no valid hypothesis found")]
    NoHypothesis,
    #[error("solver produced no model")]
    NoSolution,
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
