//! Covariance matrix, uncertainty ratio and the PH product decomposition.
//!
//! The 2x2 covariance matrix pairs the variances of two observables with
//! the cross term `<AB>_eta - <A>_eta <B>_eta`; its determinant sign is
//! the uncertainty relation. `AB` itself is generally not PH, so the
//! sampled route measures the two PH parts `C1`, `C2` with
//! `<AB> = (1+i)<C1> + (1-i)<C2>`.

use crate::error::{PhError, Result};
use crate::linalg::{fro_norm, trace, CMat, C64};
use crate::measurement;
use crate::phcore::{Definiteness, PHObservable, QuantumState};
use crate::sampler;
use crate::tol::{TOL_ABS, TOL_PSD_FACTOR, TOL_REL};

/// How the report's statistics were obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvaluationMode {
    Analytic,
    Sampled { trials: u64, seed: u64 },
}

/// Splits `AB` into two PH observables with
/// `(1+i) C1 + (1-i) C2 = AB` exactly as matrices.
///
/// `C1 = S/4 + K/(4i)`, `C2 = S/4 - K/(4i)` with the anticommutator
/// `S = AB + BA` and commutator `K = AB - BA`; both parts satisfy the PH
/// condition under the shared metric.
pub fn product_split(a: &PHObservable, b: &PHObservable) -> Result<(PHObservable, PHObservable)> {
    if !a.metric().same_as(b.metric()) {
        return Err(PhError::MetricMismatch);
    }
    let ab = a.matrix().dot(b.matrix());
    let ba = b.matrix().dot(a.matrix());
    let sym = (&ab + &ba).mapv(|z| z * C64::new(0.25, 0.0));
    let anti = (&ab - &ba).mapv(|z| z / C64::new(0.0, 4.0));
    let c1 = PHObservable::new(&sym + &anti, a.metric().clone())?;
    let c2 = PHObservable::new(&sym - &anti, a.metric().clone())?;
    Ok((c1, c2))
}

/// The matrix `[[var A, X], [conj(X), var B]]` with
/// `X = <AB>_eta - <A>_eta <B>_eta`, on the eta-normalized state.
pub fn covariance_matrix(
    a: &PHObservable,
    b: &PHObservable,
    state: &QuantumState,
) -> Result<CMat> {
    if !a.metric().same_as(b.metric()) {
        return Err(PhError::MetricMismatch);
    }
    let (rho, _) = measurement::eta_normalized_rho(state, a.metric())?;
    let eta = a.metric().eta();
    let mean_a = measurement::expectation(a, state)?;
    let mean_b = measurement::expectation(b, state)?;
    let var_a = measurement::variance(a, state)?;
    let var_b = measurement::variance(b, state)?;
    let ab = trace(&rho.dot(eta).dot(a.matrix()).dot(b.matrix()));
    let ba = trace(&rho.dot(eta).dot(b.matrix()).dot(a.matrix()));
    let cross = ab - C64::new(mean_a * mean_b, 0.0);
    let cross_rev = ba - C64::new(mean_b * mean_a, 0.0);
    let conj_resid = (cross_rev.conj() - cross).norm();
    if conj_resid > TOL_REL * cross.norm().max(1.0) {
        return Err(PhError::Numerical {
            op: "covariance_matrix",
            what: "off-diagonal conjugacy",
            value: conj_resid,
        });
    }
    let mut m = CMat::zeros((2, 2));
    m[[0, 0]] = C64::new(var_a, 0.0);
    m[[0, 1]] = cross;
    m[[1, 0]] = cross_rev;
    m[[1, 1]] = C64::new(var_b, 0.0);
    if a.metric().is_positive_definite() {
        let min_eig = hermitian_2x2_min_eig(&m);
        let scale = fro_norm(&m).max(1.0);
        if min_eig < -TOL_PSD_FACTOR * scale {
            return Err(PhError::Numerical {
                op: "covariance_matrix",
                what: "positive semi-definiteness",
                value: min_eig,
            });
        }
    }
    Ok(m)
}

fn hermitian_2x2_min_eig(m: &CMat) -> f64 {
    let a = m[[0, 0]].re;
    let d = m[[1, 1]].re;
    let off = m[[0, 1]].norm();
    let mid = 0.5 * (a + d);
    let rad = (0.25 * (a - d).powi(2) + off * off).sqrt();
    mid - rad
}

/// Uncertainty-relation evaluation for a pair of observables and a state.
#[derive(Debug, Clone)]
pub struct UncertaintyReport {
    pub var_a: f64,
    pub var_b: f64,
    pub cross_term: C64,
    pub m_matrix: CMat,
    /// `var_a * var_b / |cross|^2`; `None` when the cross term vanishes
    /// and the ratio is undefined (the bound is trivially satisfied).
    pub ratio_r: Option<f64>,
    pub std_error_r: Option<f64>,
    pub metric_definiteness: Definiteness,
    pub mode: EvaluationMode,
}

impl UncertaintyReport {
    pub fn cross_term_vanishes(&self) -> bool {
        self.ratio_r.is_none()
    }

    /// `det(M) = var_a var_b - |cross|^2`.
    pub fn determinant(&self) -> f64 {
        self.var_a * self.var_b - self.cross_term.norm_sqr()
    }
}

fn ratio(var_a: f64, var_b: f64, cross: C64) -> Option<f64> {
    if cross.norm() <= TOL_ABS {
        None
    } else {
        Some(var_a * var_b / cross.norm_sqr())
    }
}

/// Evaluates the ratio `R` analytically or through the full
/// dilation-plus-sampling pipeline for all four observables A, B, C1, C2.
pub fn uncertainty_ratio(
    a: &PHObservable,
    b: &PHObservable,
    state: &QuantumState,
    mode: EvaluationMode,
) -> Result<UncertaintyReport> {
    match mode {
        EvaluationMode::Analytic => {
            let m = covariance_matrix(a, b, state)?;
            let var_a = m[[0, 0]].re;
            let var_b = m[[1, 1]].re;
            let cross = m[[0, 1]];
            Ok(UncertaintyReport {
                var_a,
                var_b,
                cross_term: cross,
                m_matrix: m,
                ratio_r: ratio(var_a, var_b, cross),
                std_error_r: None,
                metric_definiteness: a.metric().definiteness(),
                mode,
            })
        }
        EvaluationMode::Sampled { trials, seed } => {
            if !a.metric().same_as(b.metric()) {
                return Err(PhError::MetricMismatch);
            }
            let (c1, c2) = product_split(a, b)?;
            // Independent seeds per measured observable.
            let run_a = sampler::run_experiment(a, state, trials, seed)?;
            let run_b = sampler::run_experiment(b, state, trials, seed.wrapping_add(1))?;
            let run_c1 = sampler::run_experiment(&c1, state, trials, seed.wrapping_add(2))?;
            let run_c2 = sampler::run_experiment(&c2, state, trials, seed.wrapping_add(3))?;

            let mean_a = run_a.estimate.expectation_hat;
            let mean_b = run_b.estimate.expectation_hat;
            let var_a = run_a.estimate.variance_hat;
            let var_b = run_b.estimate.variance_hat;
            let m1 = run_c1.estimate.expectation_hat;
            let m2 = run_c2.estimate.expectation_hat;
            // <AB> = (1+i) <C1> + (1-i) <C2>.
            let ab = C64::new(1.0, 1.0) * C64::new(m1, 0.0) + C64::new(1.0, -1.0) * C64::new(m2, 0.0);
            let cross = ab - C64::new(mean_a * mean_b, 0.0);

            let mut m = CMat::zeros((2, 2));
            m[[0, 0]] = C64::new(var_a, 0.0);
            m[[0, 1]] = cross;
            m[[1, 0]] = cross.conj();
            m[[1, 1]] = C64::new(var_b, 0.0);

            let r = ratio(var_a, var_b, cross);
            let std_error_r = r.map(|r_val| {
                propagate_r_error(
                    r_val,
                    var_a,
                    var_b,
                    cross,
                    mean_a,
                    mean_b,
                    run_a.estimate.std_error,
                    run_b.estimate.std_error,
                    run_a.estimate.variance_std_error,
                    run_b.estimate.variance_std_error,
                    run_c1.estimate.std_error,
                    run_c2.estimate.std_error,
                )
            });
            Ok(UncertaintyReport {
                var_a,
                var_b,
                cross_term: cross,
                m_matrix: m,
                ratio_r: r,
                std_error_r,
                metric_definiteness: a.metric().definiteness(),
                mode,
            })
        }
    }
}

/// First-order error propagation through
/// `R = var_a var_b / |X|^2` with `X = (c1 + c2 - a b) + i (c1 - c2)`,
/// treating the six sampled quantities as independent.
#[allow(clippy::too_many_arguments)]
fn propagate_r_error(
    r: f64,
    var_a: f64,
    var_b: f64,
    cross: C64,
    mean_a: f64,
    mean_b: f64,
    se_mean_a: f64,
    se_mean_b: f64,
    se_var_a: f64,
    se_var_b: f64,
    se_c1: f64,
    se_c2: f64,
) -> f64 {
    let var_re = se_c1.powi(2)
        + se_c2.powi(2)
        + (mean_b * se_mean_a).powi(2)
        + (mean_a * se_mean_b).powi(2);
    let var_im = se_c1.powi(2) + se_c2.powi(2);
    let abs_sq = cross.norm_sqr();
    let var_abs_sq = 4.0 * (cross.re.powi(2) * var_re + cross.im.powi(2) * var_im);
    let rel_sq = safe_rel_sq(se_var_a, var_a)
        + safe_rel_sq(se_var_b, var_b)
        + safe_rel_sq(var_abs_sq.sqrt(), abs_sq);
    r.abs() * rel_sq.sqrt()
}

fn safe_rel_sq(err: f64, value: f64) -> f64 {
    if value.abs() <= TOL_ABS {
        0.0
    } else {
        (err / value).powi(2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::linalg::dagger;
    use crate::phcore::Normalization;
    use std::f64::consts::PI;

    fn fig_state(metric: &crate::phcore::PHMetric, theta1: f64, theta2: f64) -> QuantumState {
        QuantumState::from_pure(
            &fixtures::psi_state(theta1, theta2),
            metric,
            Normalization::EtaNormalized,
        )
        .unwrap()
    }

    #[test]
    fn hermitian_commuting_split_is_half_square() {
        let metric = fixtures::eta_identity();
        let h = crate::linalg::from_real_rows([
            [0.0, 1.0, 0.0],
            [1.0, 0.0, 0.5],
            [0.0, 0.5, 2.0],
        ]);
        let a = PHObservable::new(h.clone(), metric.clone()).unwrap();
        let b = PHObservable::new(h.clone(), metric).unwrap();
        let (c1, c2) = product_split(&a, &b).unwrap();
        let half_sq = h.dot(&h).mapv(|z| z * C64::new(0.5, 0.0));
        assert!(fro_norm(&(c1.matrix() - &half_sq)) < 1e-12);
        assert!(fro_norm(&(c2.matrix() - &half_sq)) < 1e-12);
    }

    #[test]
    fn split_parts_are_ph_and_reconstruct_ab() {
        let a = fixtures::observable("eq5.A").unwrap();
        let b = fixtures::observable("eq5.B").unwrap();
        let (c1, c2) = product_split(&a, &b).unwrap();
        assert!(c1.residual() <= 1e-12);
        assert!(c2.residual() <= 1e-12);
        let rebuilt = c1.matrix().mapv(|z| z * C64::new(1.0, 1.0))
            + c2.matrix().mapv(|z| z * C64::new(1.0, -1.0));
        let ab = a.matrix().dot(b.matrix());
        assert!(fro_norm(&(rebuilt - ab)) <= 1e-12);
    }

    #[test]
    fn metric_mismatch_rejected() {
        let a = fixtures::observable("eq5.A").unwrap();
        let b = fixtures::observable("eq6.A").unwrap();
        assert!(matches!(
            product_split(&a, &b),
            Err(PhError::MetricMismatch)
        ));
    }

    #[test]
    fn equal_observables_give_singular_m() {
        let a = fixtures::observable("eq5.A").unwrap();
        let state = fig_state(&fixtures::eta_pos(), 0.0, 0.8);
        let m = covariance_matrix(&a, &a, &state).unwrap();
        let det = (m[[0, 0]] * m[[1, 1]] - m[[0, 1]] * m[[1, 0]]).re;
        assert!(det.abs() < 1e-9);
    }

    #[test]
    fn covariance_matrix_is_psd_under_positive_metric() {
        let a = fixtures::observable("eq5.A").unwrap();
        let b = fixtures::observable("eq5.B").unwrap();
        let state = fig_state(&fixtures::eta_pos(), 0.0, PI / 3.0);
        let m = covariance_matrix(&a, &b, &state).unwrap();
        assert!((m[[1, 0]].conj() - m[[0, 1]]).norm() < 1e-9);
        assert!(hermitian_2x2_min_eig(&m) >= -1e-9);
    }

    #[test]
    fn commuting_pair_has_real_cross_term() {
        // B = A^2 commutes with A, so the commutator part of the cross
        // term vanishes and M is real symmetric.
        let a = fixtures::observable("eq5.A").unwrap();
        let sq = a.matrix().dot(a.matrix());
        let b = PHObservable::new(sq, fixtures::eta_pos()).unwrap();
        let state = fig_state(&fixtures::eta_pos(), 0.3, 1.1);
        let m = covariance_matrix(&a, &b, &state).unwrap();
        assert!(m[[0, 1]].im.abs() < 1e-12, "im = {}", m[[0, 1]].im);
        assert!((m[[0, 1]] - m[[1, 0]]).norm() < 1e-12);
    }

    #[test]
    fn eq5_ratio_respects_bound_on_grid() {
        let a = fixtures::observable("eq5.A").unwrap();
        let b = fixtures::observable("eq5.B").unwrap();
        for theta1 in [0.0, PI / 2.5] {
            for i in 0..37 {
                let theta2 = i as f64 * PI / 37.0;
                let state = fig_state(&fixtures::eta_pos(), theta1, theta2);
                let report =
                    uncertainty_ratio(&a, &b, &state, EvaluationMode::Analytic).unwrap();
                if let Some(r) = report.ratio_r {
                    assert!(r >= 1.0 - 1e-6, "R = {r} at ({theta1}, {theta2})");
                }
            }
        }
    }

    #[test]
    fn eq6_ratio_violates_bound_at_theta1_zero() {
        let a = fixtures::observable("eq6.A").unwrap();
        let b = fixtures::observable("eq6.B").unwrap();
        let mut saw_negative = false;
        for i in 0..37 {
            let theta2 = i as f64 * PI / 37.0;
            let state = fig_state(&fixtures::eta_indef(), 0.0, theta2);
            let report = uncertainty_ratio(&a, &b, &state, EvaluationMode::Analytic).unwrap();
            if let Some(r) = report.ratio_r {
                assert!(r <= 1.0 + 1e-6, "R = {r} at theta2 = {theta2}");
                if r < 0.0 {
                    saw_negative = true;
                }
            }
        }
        assert!(saw_negative, "expected negative R somewhere on the grid");
    }

    #[test]
    fn eq6_ratio_holds_at_theta1_pi_over_two_point_five() {
        let a = fixtures::observable("eq6.A").unwrap();
        let b = fixtures::observable("eq6.B").unwrap();
        for i in 0..37 {
            let theta2 = i as f64 * PI / 37.0;
            let state = fig_state(&fixtures::eta_indef(), PI / 2.5, theta2);
            let report = uncertainty_ratio(&a, &b, &state, EvaluationMode::Analytic).unwrap();
            if let Some(r) = report.ratio_r {
                assert!(r >= 1.0 - 1e-6, "R = {r} at theta2 = {theta2}");
            }
        }
    }

    #[test]
    fn sampled_mode_agrees_with_analytic() {
        let a = fixtures::observable("eq5.A").unwrap();
        let b = fixtures::observable("eq5.B").unwrap();
        let state = fig_state(&fixtures::eta_pos(), 0.0, 1.0);
        let analytic = uncertainty_ratio(&a, &b, &state, EvaluationMode::Analytic).unwrap();
        let sampled = uncertainty_ratio(
            &a,
            &b,
            &state,
            EvaluationMode::Sampled {
                trials: 1_000_000,
                seed: 42,
            },
        )
        .unwrap();
        let (ra, rs) = (analytic.ratio_r.unwrap(), sampled.ratio_r.unwrap());
        let se = sampled.std_error_r.unwrap();
        assert!((ra - rs).abs() < 5.0 * se, "ra = {ra}, rs = {rs}, se = {se}");
    }

    #[test]
    fn report_matrix_is_hermitian() {
        let a = fixtures::observable("eq6.A").unwrap();
        let b = fixtures::observable("eq6.B").unwrap();
        let state = fig_state(&fixtures::eta_indef(), 0.0, 0.4);
        let report = uncertainty_ratio(&a, &b, &state, EvaluationMode::Analytic).unwrap();
        assert!(fro_norm(&(dagger(&report.m_matrix) - &report.m_matrix)) < 1e-9);
        assert_eq!(report.metric_definiteness, Definiteness::Indefinite);
    }
}
