use crate::logic::Pattern;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("radix must be at least 2, got {0}")]
    InvalidRadix(u32),
    #[error("level {level} out of range for radix {d}")]
    LevelOutOfRange { level: u32, d: u32 },
    #[error("radix mismatch: expected {expected}, found {found}")]
    RadixMismatch { expected: u32, found: u32 },
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("energy model parameters must be positive")]
    NonPositiveEnergy,
    #[error("incomplete table: missing input {missing:?}")]
    IncompleteTable { missing: Vec<u32> },
    #[error("duplicate input {input:?}")]
    DuplicateInput { input: Vec<u32> },
    #[error("truth table with {rows} rows exceeds the supported size")]
    TableTooLarge { rows: u128 },
    #[error("model not unit-scalable: epsilon0/delta = {ratio} is not a positive integer")]
    NotUnitScalable { ratio: String },
    #[error("not a conservative computation: deltas sum to {sum}")]
    NotConservative { sum: i64 },
    #[error("malformed permutation: {0}")]
    MalformedPermutation(String),
    #[error("instance too large for exact solver: k = {k}, limit {limit}")]
    InstanceTooLarge { k: usize, limit: usize },
    #[error("invalid partition instance: {0}")]
    InvalidPartition(String),
    #[error("invalid program: {0}")]
    InvalidProgram(String),
    #[error("ancilla not restored on input {input:?}: final ancillas {ancillas:?}")]
    AncillaNotRestored { input: Pattern, ancillas: Vec<u32> },
    #[error("state space too large: {states} input configurations")]
    StateSpaceTooLarge { states: u128 },
    #[error("formula gap at ({d},{i},{j})")]
    FormulaGap { d: u32, i: u32, j: u32 },
    #[error("requires n = m, gate is ({n},{m})")]
    NonSquareGate { n: usize, m: usize },
    #[error("operator dimension {dim} exceeds limit {limit}")]
    DimensionTooLarge { dim: u128, limit: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid rational {0:?}")]
    InvalidRational(String),
    #[error("invalid file: {0}")]
    Format(String),
}
