use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid cluster spec: {0}")]
    InvalidSpec(String),
    #[error("degenerate cluster: {0}")]
    DegenerateCluster(String),
    #[error("degenerate embedding: {0}")]
    EmbeddingDegenerate(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("RegionTooLarge: {candidates:.3e} candidates exceed the budget of {budget}")]
    RegionTooLarge { candidates: f64, budget: u64 },
    #[error("BudgetExceeded: {work:.3e} evaluations exceed the budget of {budget}")]
    BudgetExceeded { work: f64, budget: u64 },
    #[error("lattice point is not in the strip")]
    NotInStrip,
    #[error("center is not a point of the pattern")]
    CenterNotInPattern,
    #[error("at least two points are required")]
    TooFewPoints,
    #[error("empty point set")]
    EmptyPointSet,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}
