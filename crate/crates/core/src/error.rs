use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degenerate lattice: periods are linearly dependent over R within the error radius")]
    DegenerateLattice,
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("z reduces into the lattice within the error radius")]
    PoleAtZ,
    #[error("raw form of X1({n}) unsupported: {reason}")]
    UnsupportedN { n: u32, reason: String },
    #[error("exact division failed: {0}")]
    DivisionFails(String),
    #[error("invalid D = {0}: must be a squarefree negative integer")]
    InvalidD(i64),
    #[error("case mismatch: {0}")]
    CaseMismatch(String),
    #[error("singular lattice basis")]
    SingularBasis,
    #[error("lattice identity falsified at j = {j}")]
    Falsified { j: i64 },
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("C is not invertible modulo N = {n}")]
    InvalidC { n: u32 },
    #[error("non-principal form class ({a}, {b}, {c}) needs beta_Q data")]
    MissingBetaQ { a: i64, b: i64, c: i64 },
    #[error("level N = {0} is degenerate for (b, c); N >= 4 is required")]
    DegenerateLevel(u32),
    #[error("wp'(1/N) vanishes within the error radius")]
    PoleAtTorsion,
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
