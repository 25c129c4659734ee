use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} must be an odd prime")]
    EvenModulus(u64),
    #[error("{a} is not a quadratic residue modulo {p}")]
    NonResidue { a: u64, p: u64 },
    #[error("{d} is not a quadratic non-residue modulo {p}")]
    NotNonResidue { d: u64, p: u64 },
    #[error("{0} is not squarefree")]
    NotSquarefree(u64),
    #[error("segment [{lo}, {hi}] exceeds the sieve budget of {budget}")]
    SegmentTooLarge { lo: u64, hi: u64, budget: u64 },
    #[error("value {0} out of the supported range")]
    OutOfRange(u64),
    #[error("bad reduction at p = {0}")]
    BadReduction(u64),
    #[error("prime {0} is too small (p must be at least 5)")]
    PrimeTooSmall(u64),
    #[error("singular curve")]
    Singular,
    #[error("exhaustive count over F_{p} exceeds the budget of {budget}")]
    BudgetExceeded { p: u64, budget: u64 },
    #[error("trace at p = {0} not pinned down within the iteration cap")]
    Ambiguous(u64),
    #[error("division polynomial index {index} exceeds the budget of {budget}")]
    IndexTooLarge { index: u64, budget: u64 },
    #[error("ell-adic test for ell = {ell} needs index {index} beyond the budget of {budget}")]
    EllTooLarge { ell: u64, index: u64, budget: u64 },
    #[error("endomorphism ring at p = {p} could not be resolved (ell = {ell})")]
    Unresolved { p: u64, a: i64, ell: u64 },
    #[error("modular polynomial for ell = {0} is not available")]
    DataMissing(u64),
    #[error("j-invariant {j} is 0 or 1728 modulo {p}")]
    JInvariantCollision { j: u64, p: u64 },
    #[error("volcano walk did not reach the floor")]
    WalkDiverged,
    #[error("curve is not ordinary")]
    NotOrdinary,
    #[error("curve {0} has complex multiplication; pass the override to sweep it anyway")]
    CmRefused(String),
    #[error("checkpoint is corrupt: {0}")]
    CheckpointCorrupt(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("record at p = {p} violates {what}")]
    InvariantViolation { p: u64, what: String },
    #[error("unknown curve {0}")]
    UnknownCurve(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
