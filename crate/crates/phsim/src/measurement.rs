//! Analytic pseudo-Hermitian measurement statistics.
//!
//! Two equivalent routes are exposed on purpose: the trace forms
//! `Tr[rho eta H]` / `Tr[rho eta (H - <H>)^2]` and the spectral sums over
//! the decomposition coefficients `p_kl`. Tests pit them against each
//! other.

use crate::error::{PhError, Result};
use crate::linalg::{fro_norm, identity, outer, trace, CMat, C64};
use crate::phcore::{PHObservable, QuantumState};
use crate::spectral::PHSpectrum;
use crate::tol::{TOL_ABS, TOL_REL};

/// Eta-normalizes the state against the given metric.
///
/// Returns the matrix with `Tr[rho eta] = 1` and whether renormalization
/// was applied on top of the state's declared normalization.
pub fn eta_normalized_rho(
    state: &QuantumState,
    metric: &crate::phcore::PHMetric,
) -> Result<(CMat, bool)> {
    if state.dim() != metric.dim() {
        return Err(PhError::DimensionMismatch {
            expected: metric.dim(),
            found: state.dim(),
        });
    }
    let rho = state.effective_rho();
    let t = trace(&rho.dot(metric.eta())).re;
    if (t - 1.0).abs() <= TOL_REL {
        return Ok((rho, false));
    }
    if t.abs() <= TOL_ABS {
        return Err(PhError::VanishingEtaNorm { value: t });
    }
    Ok((rho.mapv(|z| z / C64::new(t, 0.0)), true))
}

fn real_part_checked(value: C64, op: &'static str) -> Result<f64> {
    if value.im.abs() > TOL_REL * value.norm().max(1.0) {
        return Err(PhError::Numerical {
            op,
            what: "imaginary residual",
            value: value.im,
        });
    }
    Ok(value.re)
}

/// `<H>_eta = Tr[rho eta H]` on the eta-normalized state.
pub fn expectation(observable: &PHObservable, state: &QuantumState) -> Result<f64> {
    let (rho, _) = eta_normalized_rho(state, observable.metric())?;
    let val = trace(&rho.dot(observable.metric().eta()).dot(observable.matrix()));
    real_part_checked(val, "expectation")
}

/// `<(Delta H)^2>_eta = Tr[rho eta (H - <H>)^2]`.
///
/// May be negative under an indefinite metric.
pub fn variance(observable: &PHObservable, state: &QuantumState) -> Result<f64> {
    let (rho, _) = eta_normalized_rho(state, observable.metric())?;
    let c = expectation(observable, state)?;
    let n = observable.dim();
    let shifted = observable.matrix() - &identity(n).mapv(|z| z * C64::new(c, 0.0));
    let val = trace(&rho.dot(observable.metric().eta()).dot(&shifted).dot(&shifted));
    real_part_checked(val, "variance")
}

/// Analytic moments plus the renormalization flag for reporting.
#[derive(Debug, Clone, Copy)]
pub struct AnalyticMoments {
    pub expectation: f64,
    pub variance: f64,
    pub renormalized: bool,
}

pub fn moments(observable: &PHObservable, state: &QuantumState) -> Result<AnalyticMoments> {
    let (_, renormalized) = eta_normalized_rho(state, observable.metric())?;
    Ok(AnalyticMoments {
        expectation: expectation(observable, state)?,
        variance: variance(observable, state)?,
        renormalized,
    })
}

/// Coefficients of `rho = sum_kl p_kl |E_k><E_l|` over the eta-normalized
/// eigenbasis, `p_kl = s_k s_l <E_k|eta rho eta|E_l>`.
#[derive(Debug, Clone)]
pub struct DecompositionCoefficients {
    p: CMat,
    signs: Vec<f64>,
}

impl DecompositionCoefficients {
    pub fn new(spectrum: &PHSpectrum, state: &QuantumState) -> Result<Self> {
        if state.dim() != spectrum.dim() {
            return Err(PhError::DimensionMismatch {
                expected: spectrum.dim(),
                found: state.dim(),
            });
        }
        let (rho, _) = eta_normalized_rho(state, spectrum.metric())?;
        let eta = spectrum.metric().eta();
        let sandwich = eta.dot(&rho).dot(eta);
        let n = spectrum.dim();
        let signs = spectrum.signs().to_vec();
        let p = CMat::from_shape_fn((n, n), |(k, l)| {
            let ek = spectrum.eigenvector(k);
            let el = spectrum.eigenvector(l);
            let val: C64 = ek
                .iter()
                .zip(sandwich.dot(el).iter())
                .map(|(a, b)| a.conj() * b)
                .sum();
            val * C64::new(signs[k] * signs[l], 0.0)
        });
        Ok(Self { p, signs })
    }

    pub fn matrix(&self) -> &CMat {
        &self.p
    }

    /// Real diagonal `p_kk`.
    pub fn diagonal(&self) -> Vec<f64> {
        self.p.diag().iter().map(|z| z.re).collect()
    }

    /// `sum_k s_k p_kk`; equals `Tr[rho eta]` (1 on eta-normalized input).
    pub fn weighted_sum(&self) -> f64 {
        self.diagonal()
            .iter()
            .zip(self.signs.iter())
            .map(|(p, s)| p * s)
            .sum()
    }

    /// Reassembles `sum_kl p_kl |E_k><E_l|`.
    pub fn reconstruct(&self, spectrum: &PHSpectrum) -> CMat {
        let n = spectrum.dim();
        let mut acc = CMat::zeros((n, n));
        for k in 0..n {
            for l in 0..n {
                let proj = outer(spectrum.eigenvector(k), spectrum.eigenvector(l));
                acc = acc + proj.mapv(|z| z * self.p[[k, l]]);
            }
        }
        acc
    }
}

/// The spectral-sum route for expectation and variance.
pub fn spectral_moments(spectrum: &PHSpectrum, state: &QuantumState) -> Result<(f64, f64)> {
    let coeffs = DecompositionCoefficients::new(spectrum, state)?;
    let diag = coeffs.diagonal();
    let signs = spectrum.signs();
    let e = spectrum.eigenvalues();
    let mean: f64 = diag
        .iter()
        .zip(signs.iter())
        .zip(e.iter())
        .map(|((p, s), ev)| p * s * ev)
        .sum();
    let var: f64 = diag
        .iter()
        .zip(signs.iter())
        .zip(e.iter())
        .map(|((p, s), ev)| p * s * (ev - mean).powi(2))
        .sum();
    Ok((mean, var))
}

/// The Hermitian effect operators `M_k = eta|E_k><E_k|eta / <E_k|eta|E_k>`.
///
/// They are non-orthogonal in general and sum to eta rather than to the
/// identity, which is what separates this measurement from a POVM.
#[derive(Debug, Clone)]
pub struct EffectSet {
    effects: Vec<CMat>,
}

impl EffectSet {
    pub fn new(spectrum: &PHSpectrum) -> Self {
        let eta = spectrum.metric().eta();
        let effects = (0..spectrum.dim())
            .map(|k| {
                let ev = spectrum.eigenvector(k);
                let eta_e = eta.dot(ev);
                outer(&eta_e, &eta_e).mapv(|z| z * C64::new(spectrum.signs()[k], 0.0))
            })
            .collect();
        Self { effects }
    }

    pub fn effects(&self) -> &[CMat] {
        &self.effects
    }

    pub fn sum(&self) -> CMat {
        let n = self.effects[0].nrows();
        self.effects
            .iter()
            .fold(CMat::zeros((n, n)), |acc, m| acc + m)
    }

    /// `Tr[rho M_k] = s_k p_kk` on the eta-normalized state.
    pub fn probabilities(&self, spectrum: &PHSpectrum, state: &QuantumState) -> Result<Vec<f64>> {
        let (rho, _) = eta_normalized_rho(state, spectrum.metric())?;
        self.effects
            .iter()
            .map(|m| real_part_checked(trace(&rho.dot(m)), "EffectSet::probabilities"))
            .collect()
    }

    pub fn max_hermiticity_residual(&self) -> f64 {
        self.effects
            .iter()
            .map(crate::linalg::hermiticity_residual)
            .fold(0.0, f64::max)
    }
}

/// Frobenius distance between the effect sum and the metric.
pub fn effect_sum_residual(spectrum: &PHSpectrum) -> f64 {
    fro_norm(&(EffectSet::new(spectrum).sum() - spectrum.metric().eta()))
}
