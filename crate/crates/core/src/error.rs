use crate::field::FieldSpec;

/// Errors raised by the library.
///
/// The variants are grouped loosely by the exit-code classes the CLI
/// maps them onto: malformed input, budget overruns, refuted properties
/// and internal contradictions.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("prime modulus {0} exceeds the supported range (p < 2^32)")]
    ModulusTooLarge(u64),
    #[error("field mismatch: {left} vs {right}")]
    FieldMismatch { left: FieldSpec, right: FieldSpec },
    #[error("division by zero")]
    DivisionByZero,
    #[error("malformed scalar literal {0:?}")]
    MalformedScalar(String),
    #[error("malformed field descriptor {0:?} (expected `Q` or `GF:p`)")]
    MalformedField(String),
    #[error("the zero polynomial has every field element as a root")]
    ZeroPolynomial,
    #[error("root search over GF({0}) exceeds the exhaustive scan limit")]
    FieldTooLargeForRootSearch(u64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("the zero vector is not an eigenvector")]
    ZeroVector,
    #[error("subspace is not invariant under {0}")]
    NotInvariant(String),
    #[error("subspace must be non-trivial (0 < dim < {ambient}), got dim {dim}")]
    TrivialSubspace { dim: usize, ambient: usize },
    #[error("invalid operator family: {0}")]
    InvalidFamily(String),
    #[error("invalid set family: {0}")]
    InvalidSetFamily(String),
    #[error("operation requires a prime field, got {0}")]
    RequiresPrimeField(FieldSpec),
    #[error("budget exceeded: {what} needs {required}, budget is {budget}")]
    BudgetExceeded {
        what: String,
        required: u128,
        budget: u128,
    },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid witness: {0}")]
    InvalidWitness(String),
    #[error("hypothesis violated — input is not a genuine leave-one-out certificate: {0}")]
    HypothesisViolated(String),
    #[error("no redundant-union witness among {members} support sets over [{ground}]")]
    NoRedundantUnion { members: usize, ground: usize },
    #[error("construction failed verification: {0}")]
    ConstructionFailed(String),
    #[error("field {field} too small: {reason}")]
    FieldTooSmall { field: FieldSpec, reason: String },
    #[error("unsupported parameter: {0}")]
    Unsupported(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
