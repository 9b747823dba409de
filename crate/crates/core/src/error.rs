use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("Gram matrix is not symmetric")]
    NotSymmetric,
    #[error("quadratic form is degenerate")]
    Degenerate,
    #[error("discriminant too large to reduce modulo squares")]
    DiscriminantTooLarge,
    #[error("elements belong to different Clifford algebras")]
    SpaceMismatch,
    #[error("operator parity does not preserve the requested graded piece")]
    ParityViolation,
    #[error("element is not a grade-1 vector")]
    NotAVector,
    #[error("dimension {requested} exceeds the configured cap {cap}")]
    CapExceeded { requested: usize, cap: usize },
    #[error("period vectors are not orthogonal")]
    NotOrthogonal,
    #[error("period vectors have unequal norms")]
    UnequalNorm,
    #[error("period plane is not positive")]
    NotPositive,
    #[error("period vectors are linearly dependent")]
    DependentVectors,
    #[error("operator does not square to minus the identity")]
    NotComplexStructure,
    #[error("odd dimension {0} cannot carry a complex structure")]
    OddDimension(usize),
    #[error("eigenspace ranks do not partition the space into a symmetric spectrum")]
    InconsistentWeight,
    #[error("commutation identity failed: {0}")]
    CommutatorViolation(String),
    #[error("reference vector is isotropic")]
    NullReference,
    #[error("endomorphism square is not a negative multiple of the identity")]
    NotQuadratic,
    #[error("endomorphism does not commute with the complex structure")]
    NotCommutingWithJ,
    #[error("endomorphism square is not a scalar matrix")]
    NonScalarSquare,
    #[error("trace of phi*J is nonzero for a non-square d")]
    WeilInconsistent,
    #[error("unexpected subspace dimension: expected {expected}, found {found}")]
    UnexpectedDimension { expected: usize, found: usize },
    #[error("subspace is not invariant under the operator")]
    NotInvariant,
    #[error("harmonic blocks do not decompose the symmetric power")]
    DecompositionFailure,
    #[error("no rational isotropic vectors available")]
    NotApplicable,
    #[error("level filtration mismatch: kernel route has dim {kernel_dim}, image route has dim {image_dim}")]
    LevelMismatch { kernel_dim: usize, image_dim: usize },
    #[error("b2 = {0} is below 3")]
    TooSmall(u32),
    #[error("value {0} out of supported range")]
    OutOfRange(u64),
    #[error("hypothesis data missing from catalog entry")]
    MissingHypothesisData,
    #[error("index out of range")]
    IndexOutOfRange,
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
