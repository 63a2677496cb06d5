use thiserror::Error;

pub type Result<T> = std::result::Result<T, LinkError>;

/// Broad failure class, used by front-ends to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// The caller supplied something that does not describe a valid input.
    InvalidInput,
    /// An exactness assertion fired (non-integral genus or Betti number, oracle mismatch).
    Internal,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinkError {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("polynomial is not weighted homogeneous: found degrees {first} and {second}")]
    NotHomogeneous { first: u64, second: u64 },
    #[error("polynomial is identically zero")]
    ZeroPolynomial,
    #[error("weighted degree must be positive")]
    ZeroDegree,
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("invalid weight system: {0}")]
    InvalidWeights(String),
    #[error("degree {degree} is not divisible by the weight gcd {gcd}")]
    DegreeNotDivisible { degree: u64, gcd: u64 },
    #[error("weights are not primitive (overall gcd {gcd}); normalize first")]
    NotPrimitive { gcd: u64 },
    #[error("linear term present in variable {index}")]
    LinearTermPresent { index: usize },
    #[error("expected 4 variables, found {found}")]
    WrongArity { found: usize },
    #[error("hypersurface contains the coordinate hyperplane z{index} = 0")]
    ContainsCoordinateHyperplane { index: usize },
    #[error("genus formula gave 2g = {value}, not a nonnegative even integer")]
    NonIntegralGenus { value: String },
    #[error("Betti number evaluated to {value}, not a nonnegative integer")]
    NonIntegralBetti { value: String },
    #[error("oracle b2 = {oracle} disagrees with divisor calculus b2 = {b2}")]
    OracleMismatch { b2: u64, oracle: u64 },
    #[error("oracle group order {order} exceeds cap {cap}")]
    CapExceeded { order: u64, cap: u64 },
    #[error("k = {k} must be odd")]
    EvenK { k: u64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("cyclic system {exponents:?} has no positive solution")]
    DegenerateSystem { exponents: [u64; 4] },
    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),
    #[error("malformed record on line {line}: {message}")]
    MalformedRecord { line: usize, message: String },
}

impl LinkError {
    /// Stable machine-readable identifier.
    pub fn code(&self) -> &'static str {
        match self {
            LinkError::Syntax { .. } => "syntax_error",
            LinkError::NotHomogeneous { .. } => "not_homogeneous",
            LinkError::ZeroPolynomial => "zero_polynomial",
            LinkError::ZeroDegree => "zero_degree",
            LinkError::LengthMismatch { .. } => "length_mismatch",
            LinkError::InvalidWeights(_) => "invalid_weights",
            LinkError::DegreeNotDivisible { .. } => "degree_not_divisible",
            LinkError::NotPrimitive { .. } => "not_primitive",
            LinkError::LinearTermPresent { .. } => "linear_term_present",
            LinkError::WrongArity { .. } => "wrong_arity",
            LinkError::ContainsCoordinateHyperplane { .. } => "contains_coordinate_hyperplane",
            LinkError::NonIntegralGenus { .. } => "non_integral_genus",
            LinkError::NonIntegralBetti { .. } => "non_integral_betti",
            LinkError::OracleMismatch { .. } => "oracle_mismatch",
            LinkError::CapExceeded { .. } => "cap_exceeded",
            LinkError::EvenK { .. } => "even_k",
            LinkError::InvalidParameter(_) => "invalid_parameter",
            LinkError::DegenerateSystem { .. } => "degenerate_system",
            LinkError::InvalidConfig(_) => "invalid_config",
            LinkError::MalformedRecord { .. } => "malformed_record",
        }
    }

    pub fn class(&self) -> ErrorClass {
        match self {
            LinkError::NonIntegralGenus { .. }
            | LinkError::NonIntegralBetti { .. }
            | LinkError::OracleMismatch { .. } => ErrorClass::Internal,
            _ => ErrorClass::InvalidInput,
        }
    }
}
