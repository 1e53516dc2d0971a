use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {0} is outside 1..2^63")]
    InvalidModulus(u64),
    #[error("additive order {order} of basis element {index} does not divide the modulus {modulus}")]
    InvalidOrder { index: usize, order: u64, modulus: u64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("map is not well defined on generator {0}")]
    NotWellDefined(usize),
    #[error("structure constants of b{i}*b{j} are incompatible with the additive orders")]
    OrderViolation { i: usize, j: usize },
    #[error("associativity fails on basis triple ({i}, {j}, {k})")]
    AssociativityViolation { i: usize, j: usize, k: usize },
    #[error("unity fails on basis element {0}")]
    UnityViolation(usize),
    #[error("elements belong to different rings")]
    RingMismatch,
    #[error("element is not idempotent")]
    NotIdempotent,
    #[error("ideal is not nil")]
    NotNilIdeal,
    #[error("x^2 - x does not lie in the ideal")]
    DefectNotInIdeal,
    #[error("enumeration of {size} elements exceeds the cap {cap}")]
    CapExceeded { size: u128, cap: u64 },
    #[error("map is not a ring endomorphism: {0}")]
    NotEndomorphism(String),
    #[error("map is not a ring homomorphism: {0}")]
    NotHomomorphism(String),
    #[error("automorphism does not square to the identity")]
    NotInvolution,
    #[error("subrings live in different ambient rings")]
    AmbientMismatch,
    #[error("span is not a subring: {0}")]
    NotSubring(String),
    #[error("unsupported tower specification: {0}")]
    UnsupportedSpec(String),
    #[error("associated idempotents are incompatible at level {0}")]
    CompatibilityViolation(usize),
    #[error("subring levels are incompatible at level {0}")]
    IncompatibleSubringSpec(usize),
    #[error("candidate is not in the submodule at level {0}")]
    LevelUnsolvable(usize),
    #[error("resolution is not exact at position {0}")]
    NotExact(i64),
    #[error("module axiom fails: {0}")]
    ModuleAxiom(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
