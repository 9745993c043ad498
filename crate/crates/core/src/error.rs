use thiserror::Error;

use crate::field::FieldTag;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("unknown field selector {0:?}; expected \"Q\" or \"Fp:<prime>\"")]
    BadTag(String),
    #[error("{0} is not an odd prime below 2^63")]
    NotPrime(u64),
    #[error("cannot parse {0:?} as a rational number")]
    BadNumber(String),
    #[error("denominator of {0:?} vanishes in {1}")]
    DenominatorVanishes(String, FieldTag),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("gcd of two zero polynomials is undefined")]
    ZeroGcd,
    #[error("operation requires a nonzero polynomial")]
    ZeroPolynomial,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormError {
    #[error("dual form of degree {e} cannot act on a form of degree {n}")]
    DegreeTooLarge { e: usize, n: usize },
    #[error("catalecticant index e = {e} outside 1..={max} for degree {n}")]
    CatalecticantRange { e: usize, n: usize, max: usize },
    #[error("forms of different degrees ({0} and {1})")]
    DegreeMismatch(usize, usize),
    #[error("the zero form has no Waring rank or decomposition")]
    ZeroForm,
    #[error("dual form is not apolar to the given form")]
    NotApolar,
    #[error("dual form has a repeated root")]
    NotSquarefree,
    #[error(
        "only {found} of {needed} roots of the dual form lie in {field}; \
         use certify-only mode (squarefree witness) instead of an explicit decomposition"
    )]
    RootsOutsideField { found: usize, needed: usize, field: FieldTag },
    #[error("secant index s = {s} outside 1..={max}")]
    SecantRange { s: usize, max: usize },
    #[error("expected {expected} coefficients, found {found}")]
    CoefficientCount { expected: usize, found: usize },
    #[error("characteristic {p} too small for degree {n} (need p > 2n)")]
    CharacteristicTooSmall { p: u64, n: usize },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BundleError {
    #[error("invalid projection center: {0}")]
    InvalidCenter(String),
    #[error("projection is not an immersion: Jacobian minors share the factor {gcd} (cusps at {cusps})")]
    NotImmersive { gcd: String, cusps: String },
    #[error("twist ladder invariant violated: {0}")]
    LadderInvariant(String),
    #[error("splitting type invariant violated: {0}")]
    SplittingInvariant(String),
    #[error(transparent)]
    Form(#[from] FormError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StrataError {
    #[error("index r = {r} outside the admissible range for n = {n}, k = {k}")]
    IndexOutOfRange { n: usize, k: usize, r: usize },
    #[error("stratum parameters violate bounds: {0}")]
    Bounds(String),
    #[error("no residual bundle: A = n - 1 - rho - k (or n - delta - k) is zero")]
    NoResidualBundle,
    #[error("construction failed after {attempts} attempts (last failure: {last})")]
    RetryBudgetExhausted { attempts: usize, last: String },
    #[error(transparent)]
    Bundle(#[from] BundleError),
    #[error(transparent)]
    Form(#[from] FormError),
}
