use ndarray_linalg::{Inverse, UPLO};

use crate::error::{PhError, Result};
use crate::linalg::{check_square, fro_norm, hermiticity_residual, identity, CMat};
use crate::tol::{TOL_REL, TOL_SING};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Definiteness {
    PositiveDefinite,
    Indefinite,
}

/// An invertible Hermitian metric `eta` with cached inverse.
///
/// The metric defines the inner product `<a|b>_eta = <a|eta|b>` under which
/// pseudo-Hermitian operators behave as observables.
#[derive(Debug, Clone)]
pub struct PHMetric {
    eta: CMat,
    eta_inv: CMat,
    definiteness: Definiteness,
}

impl PHMetric {
    /// Validates Hermiticity and invertibility, caches the inverse and
    /// classifies definiteness.
    pub fn new(eta: CMat) -> Result<Self> {
        let n = check_square(&eta)?;
        if n < 2 {
            return Err(PhError::DimensionMismatch {
                expected: 2,
                found: n,
            });
        }
        let herm = hermiticity_residual(&eta);
        if herm > TOL_REL {
            return Err(PhError::NotHermitian { residual: herm });
        }
        // Hermitian, so singular values are |eigenvalues|.
        let eigs = eigvalsh(&eta)?;
        let max_abs = eigs.iter().fold(0.0f64, |a, e| a.max(e.abs()));
        let min_abs = eigs.iter().fold(f64::INFINITY, |a, e| a.min(e.abs()));
        let ratio = if max_abs > 0.0 { min_abs / max_abs } else { 0.0 };
        if ratio < TOL_SING {
            return Err(PhError::Singular { ratio });
        }
        let eta_inv = eta.inv()?;
        let resid = fro_norm(&(eta.dot(&eta_inv) - identity(n))) / (n as f64).sqrt();
        if resid > TOL_REL {
            return Err(PhError::Numerical {
                op: "PHMetric::new",
                what: "eta * eta_inv - identity",
                value: resid,
            });
        }
        let definiteness = if eigs.iter().all(|&e| e > 0.0) {
            Definiteness::PositiveDefinite
        } else {
            Definiteness::Indefinite
        };
        Ok(Self {
            eta,
            eta_inv,
            definiteness,
        })
    }

    pub fn dim(&self) -> usize {
        self.eta.nrows()
    }

    pub fn eta(&self) -> &CMat {
        &self.eta
    }

    pub fn inverse(&self) -> &CMat {
        &self.eta_inv
    }

    pub fn definiteness(&self) -> Definiteness {
        self.definiteness
    }

    pub fn is_positive_definite(&self) -> bool {
        self.definiteness == Definiteness::PositiveDefinite
    }

    /// Whether two metrics agree within the relative tolerance.
    pub fn same_as(&self, other: &PHMetric) -> bool {
        self.dim() == other.dim()
            && fro_norm(&(&self.eta - &other.eta)) <= TOL_REL * fro_norm(&self.eta).max(1.0)
    }
}

fn eigvalsh(m: &CMat) -> Result<Vec<f64>> {
    use ndarray_linalg::Eigh;
    let (vals, _) = m.eigh(UPLO::Lower)?;
    Ok(vals.to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{diag_real, C64};

    #[test]
    fn positive_definite_fixture_metric() {
        let m = PHMetric::new(diag_real(&[1.0, 1.0, 0.6])).unwrap();
        assert_eq!(m.definiteness(), Definiteness::PositiveDefinite);
    }

    #[test]
    fn indefinite_fixture_metric() {
        let m = PHMetric::new(diag_real(&[1.0, 1.0, -1.0])).unwrap();
        assert_eq!(m.definiteness(), Definiteness::Indefinite);
    }

    #[test]
    fn identity_metric_inverse_is_identity() {
        let m = PHMetric::new(identity(3)).unwrap();
        assert_eq!(m.definiteness(), Definiteness::PositiveDefinite);
        assert!(fro_norm(&(m.inverse() - &identity(3))) < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut eta = identity(2);
        eta[[0, 1]] = C64::new(0.5, 0.0);
        assert!(matches!(
            PHMetric::new(eta),
            Err(PhError::NotHermitian { .. })
        ));
    }

    #[test]
    fn rejects_singular() {
        let eta = diag_real(&[1.0, 0.0, 1.0]);
        assert!(matches!(PHMetric::new(eta), Err(PhError::Singular { .. })));
    }

    #[test]
    fn eta_times_inverse_is_identity() {
        let mut eta = diag_real(&[2.0, 1.0, -0.3]);
        eta[[0, 1]] = C64::new(0.1, 0.2);
        eta[[1, 0]] = C64::new(0.1, -0.2);
        let m = PHMetric::new(eta).unwrap();
        let resid = fro_norm(&(m.eta().dot(m.inverse()) - identity(3)));
        assert!(resid < 1e-12, "resid = {resid}");
    }
}
