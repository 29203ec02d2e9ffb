use crate::error::{PhError, Result};
use crate::linalg::{check_square, dagger, fro_norm, CMat};
use crate::phcore::PHMetric;
use crate::tol::TOL_REL;

/// A square complex matrix validated against the pseudo-Hermiticity
/// condition `H^dag = eta H eta^{-1}` for its metric.
#[derive(Debug, Clone)]
pub struct PHObservable {
    matrix: CMat,
    metric: PHMetric,
    residual: f64,
}

impl PHObservable {
    /// Checks the pseudo-Hermiticity condition and records the relative
    /// residual as a diagnostic.
    pub fn new(matrix: CMat, metric: PHMetric) -> Result<Self> {
        let n = check_square(&matrix)?;
        if n != metric.dim() {
            return Err(PhError::DimensionMismatch {
                expected: metric.dim(),
                found: n,
            });
        }
        let transformed = metric.eta().dot(&matrix).dot(metric.inverse());
        let scale = fro_norm(&matrix).max(1.0);
        let residual = fro_norm(&(dagger(&matrix) - transformed)) / scale;
        if residual > TOL_REL {
            return Err(PhError::NotPseudoHermitian { residual });
        }
        Ok(Self {
            matrix,
            metric,
            residual,
        })
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn metric(&self) -> &PHMetric {
        &self.metric
    }

    /// Relative residual of the pseudo-Hermiticity check at construction.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }
}
