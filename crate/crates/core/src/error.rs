use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed permutation {0:?}: not a bijection on 0..{len}", len = .0.len())]
    MalformedPermutation(Vec<usize>),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("permutation sums over S_{0} exceed the enumeration limit of S_8")]
    PermutationTooLarge(usize),

    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),

    #[error("unknown generator index {0}")]
    UnknownGenerator(usize),

    #[error("operands live over different bases")]
    BasisMismatch,

    #[error("arity {arity} exceeds the configured maximum {max}")]
    ArityOverflow { arity: usize, max: usize },

    #[error("enumeration at arity {arity} needs exponents above the configured cap {cap}")]
    ExponentCap { arity: usize, cap: u32 },

    #[error("entry {tuple:?} has output generator {output} of degree {got}, expected {expected}")]
    NonHomogeneous { tuple: Vec<usize>, output: usize, got: i64, expected: i64 },

    #[error("skewness violation at tuple {tuple:?}: {detail}")]
    SkewViolation { tuple: Vec<usize>, detail: String },

    #[error("operation requires a skew family")]
    NotSkew,

    #[error("operation requires a family without skew symmetry constraints")]
    Skew,

    #[error("a representation is required but none was supplied")]
    MissingRepresentation,

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("the classical formula only applies to ungraded data (all vdeg = 0)")]
    GradedInput,

    #[error("the algebra is not associative: {0}")]
    NotAssociative(String),

    #[error("the differential does not square to zero: {0}")]
    NotNilpotent(String),

    #[error("the differential is not homogeneous in ghost degree: {0}")]
    InhomogeneousDifferential(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
