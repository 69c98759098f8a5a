use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degenerate lattice")]
    DegenerateLattice,
    #[error("singular matrix")]
    Singular,
    #[error("unsupported place: {0}")]
    UnsupportedPlace(String),
    #[error("not a regular covector at {0}")]
    NotRegularCovector(String),
    #[error("empty generator list at {0}")]
    EmptyGenerators(String),
    #[error("empty ambient: first cohomology vanishes")]
    EmptyAmbient,
    #[error("different base bundles")]
    DifferentBaseBundles,
    #[error("different Quot points")]
    DifferentQuotPoints,
    #[error("evaluation generically degenerate")]
    DegenerateEvaluation,
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error{}: {message}", offset.map(|o| format!(" at byte {o}")).unwrap_or_default())]
    Parse { offset: Option<usize>, message: String },
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
