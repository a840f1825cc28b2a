use num_bigint::{BigInt, BigUint};
use thiserror::Error;

/// Failures of the number-theory and finite-field layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("expected a positive integer, got {0}")]
    NonPositive(BigInt),
    #[error("{0} is not prime")]
    NotPrime(BigInt),
    #[error("expected a nonzero integer")]
    ZeroInteger,
    #[error("operation needs a nonzero polynomial")]
    ZeroPolynomial,
    #[error("operation needs positive characteristic")]
    CharacteristicZero,
    #[error("characteristic mismatch: {0} vs {1}")]
    CharacteristicMismatch(String, String),
    #[error("modulus is not monic irreducible over F_{0}")]
    ReducibleModulus(BigInt),
    #[error("enumeration needs {required} candidates, budget is {budget}")]
    EnumerationBudget { required: BigUint, budget: u64 },
    #[error("division by zero in a finite field")]
    DivisionByZero,
    #[error("leading coefficient {0} is not a unit")]
    NonUnitLeading(BigInt),
}

/// Failures of multivariate polynomial and rational-function arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("characteristic mismatch: {0} vs {1}")]
    CharacteristicMismatch(String, String),
    #[error("arity mismatch: {0} vs {1} variables")]
    ArityMismatch(usize, usize),
    #[error("exponent vector has length {got}, polynomial has {expected} variables")]
    ExponentLength { expected: usize, got: usize },
    #[error("operation needs a nonzero polynomial")]
    ZeroPolynomial,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("exact division failed")]
    NotDivisible,
    #[error("substitution verification failed after Kronecker fallback (arithmetic fault)")]
    SubstitutionFault,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Failures while building or working with a matrix group.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("generator list is empty")]
    NoGenerators,
    #[error("invalid generator label {0:?}")]
    BadLabel(String),
    #[error("duplicate generator label {0:?}")]
    DuplicateLabel(String),
    #[error("generator {label:?} is not a square {size}x{size} matrix")]
    Shape { label: String, size: usize },
    #[error("generator {0:?} is singular")]
    Singular(String),
    #[error("unknown generator label {0:?}")]
    UnknownLabel(String),
    #[error("malformed word: {0}")]
    BadWord(String),
    #[error("ball enumeration exceeded budget after {reached} elements")]
    BallBudget { reached: usize },
    #[error("rational function canonicalization incomplete (gcd budget exhausted)")]
    CanonicalizationIncomplete,
    #[error("the word is trivial in the group; nothing to separate")]
    IdentityWord,
    #[error("internal fault: {0}")]
    Fault(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Failures of the profiling layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProfileError {
    #[error("no separating homomorphism within budget ({searched} homomorphisms searched)")]
    NotFoundWithinBudget { searched: usize },
    #[error("reduction search would need {required} homomorphisms, budget is {budget}")]
    HomBudget { required: BigUint, budget: usize },
    #[error("threshold check needs samples with n >= 16")]
    InsufficientRange,
    #[error("unknown catalog group {0:?}")]
    UnknownGroup(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Syntax and semantic errors while reading entries, words, and files.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown variable {name:?} at byte {offset}")]
    UnknownVariable { name: String, offset: usize },
    #[error("zero denominator at byte {offset}")]
    ZeroDenominator { offset: usize },
    #[error("invalid file: {0}")]
    File(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}
