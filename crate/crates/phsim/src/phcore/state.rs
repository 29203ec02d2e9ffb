use ndarray_linalg::{Eigh, UPLO};

use crate::error::{PhError, Result};
use crate::linalg::{check_square, hermiticity_residual, outer, trace, vec_norm, CMat, CVec, C64};
use crate::phcore::PHMetric;
use crate::tol::{TOL_ABS, TOL_REL};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// `Tr[rho] = 1`.
    Dirac,
    /// `Tr[rho eta] = 1` for the metric supplied at construction.
    EtaNormalized,
}

/// A density matrix stored as a PSD, unit-trace part plus a real scale.
///
/// Eta-normalization divides by `Tr[rho eta]`, which may be negative under
/// an indefinite metric; keeping the scale separate leaves the stored
/// matrix PSD in every case. `effective_rho` is the matrix that satisfies
/// the declared normalization.
#[derive(Debug, Clone)]
pub struct QuantumState {
    rho: CMat,
    scale: f64,
    normalization: Normalization,
}

impl QuantumState {
    /// Builds `rho = |psi><psi|` scaled per the requested normalization.
    pub fn from_pure(psi: &CVec, metric: &PHMetric, mode: Normalization) -> Result<Self> {
        if psi.len() != metric.dim() {
            return Err(PhError::DimensionMismatch {
                expected: metric.dim(),
                found: psi.len(),
            });
        }
        let norm = vec_norm(psi);
        if norm <= TOL_ABS {
            return Err(PhError::ZeroVector);
        }
        let unit = psi.mapv(|z| z / C64::new(norm, 0.0));
        let rho = outer(&unit, &unit);
        let scale = match mode {
            Normalization::Dirac => 1.0,
            Normalization::EtaNormalized => {
                let t = eta_inner(&unit, &unit, metric)?.re;
                if t.abs() <= TOL_ABS {
                    return Err(PhError::VanishingEtaNorm { value: t });
                }
                1.0 / t
            }
        };
        Ok(Self {
            rho,
            scale,
            normalization: mode,
        })
    }

    /// Accepts any PSD density matrix (mixed states included).
    pub fn from_density(rho: CMat, metric: &PHMetric, mode: Normalization) -> Result<Self> {
        let n = check_square(&rho)?;
        if n != metric.dim() {
            return Err(PhError::DimensionMismatch {
                expected: metric.dim(),
                found: n,
            });
        }
        let herm = hermiticity_residual(&rho);
        if herm > TOL_REL {
            return Err(PhError::NotHermitian { residual: herm });
        }
        let (eigs, _) = rho.eigh(UPLO::Lower)?;
        let max_eig = eigs.iter().fold(0.0f64, |a, &e| a.max(e.abs()));
        let min_eig = eigs.iter().fold(f64::INFINITY, |a, &e| a.min(e));
        if min_eig < -TOL_ABS * max_eig.max(1.0) {
            return Err(PhError::NotPositiveSemiDefinite { min_eig });
        }
        let tr = trace(&rho).re;
        if tr <= TOL_ABS {
            return Err(PhError::ZeroVector);
        }
        let rho = rho.mapv(|z| z / C64::new(tr, 0.0));
        let scale = match mode {
            Normalization::Dirac => 1.0,
            Normalization::EtaNormalized => {
                let t = trace(&rho.dot(metric.eta())).re;
                if t.abs() <= TOL_ABS {
                    return Err(PhError::VanishingEtaNorm { value: t });
                }
                1.0 / t
            }
        };
        Ok(Self {
            rho,
            scale,
            normalization: mode,
        })
    }

    /// The PSD, Dirac-normalized part.
    pub fn dirac_rho(&self) -> &CMat {
        &self.rho
    }

    /// The matrix satisfying the declared normalization (`scale * rho`).
    pub fn effective_rho(&self) -> CMat {
        self.rho.mapv(|z| z * C64::new(self.scale, 0.0))
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    pub fn dim(&self) -> usize {
        self.rho.nrows()
    }
}

/// The metric inner product `<psi1|eta|psi2>`.
pub fn eta_inner(psi1: &CVec, psi2: &CVec, metric: &PHMetric) -> Result<C64> {
    let n = metric.dim();
    if psi1.len() != n {
        return Err(PhError::DimensionMismatch {
            expected: n,
            found: psi1.len(),
        });
    }
    if psi2.len() != n {
        return Err(PhError::DimensionMismatch {
            expected: n,
            found: psi2.len(),
        });
    }
    let eta_psi2 = metric.eta().dot(psi2);
    Ok(psi1
        .iter()
        .zip(eta_psi2.iter())
        .map(|(a, b)| a.conj() * b)
        .sum())
}
