use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable set mismatch: {0}")]
    VarSetMismatch(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("denominator factor vanishes: {0}")]
    VanishingFactor(String),
    #[error("ill-posed specialization: {0}")]
    IllPosedSpecialization(String),
    #[error("series is not expandable as a power series: {0}")]
    NotExpandable(String),
    #[error("empty point set")]
    Empty,
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("non-lattice vertex: {0}")]
    NonLattice(String),
    #[error("weight is not linear: {0}")]
    NonLinearWeight(String),
    #[error("negative weight coefficient: {0}")]
    NegativeWeight(String),
    #[error("invalid weight: {0}")]
    InvalidWeight(String),
    #[error("guard exceeded: {0}")]
    GuardExceeded(String),
    #[error("cone is not pointed: {0}")]
    NonPointed(String),
    #[error("generator with zero grading: {0}")]
    ZeroGrading(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
