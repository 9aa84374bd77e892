use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field cardinality {0} exceeds cap {1}")]
    CardinalityCapExceeded(u128, u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("element index {0} does not belong to GF({1})")]
    FieldMismatch(u64, u64),
    #[error("GF({0}) is not a quadratic extension")]
    NotAQuadraticExtension(u64),
    #[error("operands live in different rings")]
    ContextMismatch,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("expansion size {0} exceeds cap {1}")]
    ExpansionTooLarge(u128, u64),
    #[error("Lambda family requires a quadratic extension field")]
    LambdaRequiresQuadraticExtension,
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("inconsistent element parameters: {0}")]
    InconsistentParams(String),
    #[error("group order {0} exceeds enumeration cap {1}")]
    CapExceeded(u128, u64),
    #[error("hypothesis (H) fails: B^T X2 B has a nonzero diagonal entry")]
    HypothesisHViolated,
    #[error("orbit size exceeds cap {0}")]
    OrbitCapExceeded(u64),
    #[error("invariant-space dimension {0} exceeds cap {1}")]
    DimensionCapExceeded(usize, u64),
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
    #[error("singular matrix")]
    SingularMatrix,
}
