//! Numerical tolerances used across the crate.
//!
//! Matrices here are dense, at most 10x10, in f64. The thresholds below
//! leave several orders of magnitude of headroom over accumulated rounding
//! at that scale.

/// Relative tolerance for Frobenius-norm residual checks.
pub const TOL_REL: f64 = 1e-9;

/// Absolute tolerance for quantities compared against zero.
pub const TOL_ABS: f64 = 1e-12;

/// Smallest accepted singular-value ratio before a metric counts as singular.
pub const TOL_SING: f64 = 1e-12;

/// Eigenvalue gaps below `TOL_DEG_FACTOR * max|e|` are treated as degenerate.
pub const TOL_DEG_FACTOR: f64 = 1e-8;

/// Eigenvector eta-norms below this magnitude are rejected before rescaling.
pub const TOL_NORM: f64 = 1e-8;

/// PSD assertions on covariance matrices allow eigenvalues down to
/// `-TOL_PSD_FACTOR * ||M||`.
pub const TOL_PSD_FACTOR: f64 = 1e-9;
