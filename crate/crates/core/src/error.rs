use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("modulus matrix is singular")]
    SingularModulus,
    #[error("imaginary part of the period matrix is not positive definite")]
    NotSiegel,
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("required truncation radius {required} exceeds the cap {cap}")]
    TruncationOverflow { required: String, cap: i64 },
    #[error("1 + (i/2)(A_a + A_b)θ is singular")]
    SingularDeformation,
    #[error("labels violate A_a θ A_a = A_b θ A_b (asymmetry {asymmetry:.3e})")]
    NotCompatible { asymmetry: f64 },
    #[error("real part of the deformed quadratic form is not positive definite")]
    NotPositiveReal,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("coset index does not belong to the expected quotient")]
    IndexModulusMismatch,
    #[error("lagrangians are parallel (slope difference is singular)")]
    ParallelLagrangians,
    #[error("matrix is not unimodular")]
    NotUnimodular,
    #[error("difference of distinct labels is singular")]
    DegenerateDifference,
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Stable machine-readable code, used by the CLI error objects.
    pub fn code(&self) -> &'static str {
        match self {
            Error::SingularModulus => "singular_modulus",
            Error::NotSiegel => "not_siegel",
            Error::NotPositiveDefinite => "not_positive_definite",
            Error::TruncationOverflow { .. } => "truncation_overflow",
            Error::SingularDeformation => "singular_deformation",
            Error::NotCompatible { .. } => "not_compatible",
            Error::NotPositiveReal => "not_positive_real",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::IndexModulusMismatch => "index_modulus_mismatch",
            Error::ParallelLagrangians => "parallel_lagrangians",
            Error::NotUnimodular => "not_unimodular",
            Error::DegenerateDifference => "degenerate_difference",
            Error::InvalidInput(_) => "invalid_input",
        }
    }
}
