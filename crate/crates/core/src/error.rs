use thiserror::Error;

/// Errors raised by the jet, tensor and invariant-theory operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("truncation order mismatch: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("linear part is singular")]
    SingularLinearPart,
    #[error("symmetry violation: {0}")]
    SymmetryViolation(String),
    #[error("insufficient jet order: need at least {needed}, have {have}")]
    InsufficientOrder { needed: usize, have: usize },
    #[error("unbalanced variance: {p} covariant vs {q} contravariant slots")]
    UnbalancedVariance { p: usize, q: usize },
    #[error("resource cap exceeded: p = {p} > cap {cap}")]
    ResourceCap { p: usize, cap: usize },
    #[error("internal mismatch: {0}")]
    InternalMismatch(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DimensionMismatch(..) => "dimension_mismatch",
            Error::OrderMismatch(..) => "order_mismatch",
            Error::SingularLinearPart => "singular_linear_part",
            Error::SymmetryViolation(_) => "symmetry_violation",
            Error::InsufficientOrder { .. } => "insufficient_order",
            Error::UnbalancedVariance { .. } => "unbalanced_variance",
            Error::ResourceCap { .. } => "resource_cap",
            Error::InternalMismatch(_) => "internal_mismatch",
            Error::InvalidInput(_) => "invalid_input",
        }
    }
}
