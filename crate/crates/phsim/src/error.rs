use thiserror::Error;

/// Errors surfaced by the pseudo-Hermitian core, spectral decomposition,
/// dilation, sampling and uncertainty modules.
#[derive(Debug, Clone, Error)]
pub enum PhError {
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix entries must be finite")]
    NonFinite,
    #[error("matrix is not Hermitian (relative residual {residual:.3e})")]
    NotHermitian { residual: f64 },
    #[error("metric is numerically singular (singular-value ratio {ratio:.3e})")]
    Singular { ratio: f64 },
    #[error("operator violates the pseudo-Hermiticity condition (relative residual {residual:.3e})")]
    NotPseudoHermitian { residual: f64 },
    #[error("state vector is zero")]
    ZeroVector,
    #[error("eta-norm vanishes (value {value:.3e}); state cannot be eta-normalized")]
    VanishingEtaNorm { value: f64 },
    #[error("density matrix is not positive semi-definite (min eigenvalue {min_eig:.3e})")]
    NotPositiveSemiDefinite { min_eig: f64 },
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("spectrum has complex eigenvalues (max imaginary part {max_imag:.3e})")]
    ComplexSpectrum { max_imag: f64 },
    #[error("degenerate spectrum (smallest eigenvalue gap {gap:.3e})")]
    Degenerate { gap: f64 },
    #[error("dual-vector construction ill-conditioned (|eta E| = {norm:.3e})")]
    IllConditioned { norm: f64 },
    #[error("vector is not unit norm (norm {norm})")]
    NotUnitVector { norm: f64 },
    #[error("subspace index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("observables use different metrics")]
    MetricMismatch,
    #[error("weighted event count sums to zero; empirical state is eta-null")]
    DegenerateStatistics,
    #[error("{op}: numerical check failed ({what} = {value:.3e})")]
    Numerical {
        op: &'static str,
        what: &'static str,
        value: f64,
    },
    #[error("linear algebra backend error: {0}")]
    Backend(String),
    #[error("unknown fixture name: {0}")]
    UnknownFixture(String),
    #[error("invalid configuration: {0}")]
    Config(String),
}

impl PhError {
    /// Stable machine-readable tag for CLI error reporting.
    pub fn tag(&self) -> &'static str {
        match self {
            PhError::NotSquare { .. } => "NotSquare",
            PhError::NonFinite => "NonFinite",
            PhError::NotHermitian { .. } => "NotHermitian",
            PhError::Singular { .. } => "Singular",
            PhError::NotPseudoHermitian { .. } => "NotPseudoHermitian",
            PhError::ZeroVector => "ZeroVector",
            PhError::VanishingEtaNorm { .. } => "VanishingEtaNorm",
            PhError::NotPositiveSemiDefinite { .. } => "NotPositiveSemiDefinite",
            PhError::DimensionMismatch { .. } => "DimensionMismatch",
            PhError::ComplexSpectrum { .. } => "ComplexSpectrum",
            PhError::Degenerate { .. } => "Degenerate",
            PhError::IllConditioned { .. } => "IllConditioned",
            PhError::NotUnitVector { .. } => "NotUnitVector",
            PhError::IndexOutOfRange { .. } => "IndexOutOfRange",
            PhError::MetricMismatch => "MetricMismatch",
            PhError::DegenerateStatistics => "DegenerateStatistics",
            PhError::Numerical { .. } => "Numerical",
            PhError::Backend(_) => "Backend",
            PhError::UnknownFixture(_) => "UnknownFixture",
            PhError::Config(_) => "ConfigParse",
        }
    }
}

impl From<ndarray_linalg::error::LinalgError> for PhError {
    fn from(e: ndarray_linalg::error::LinalgError) -> Self {
        PhError::Backend(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, PhError>;
