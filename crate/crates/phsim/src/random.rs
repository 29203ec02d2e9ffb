//! Randomized generation of PH fixtures for property and acceptance tests.
//!
//! The construction guarantees the PH condition exactly: draw a Hermitian
//! `h` and a metric `eta`, then `H = eta^{-1} h` satisfies
//! `H^dag = eta H eta^{-1}` by algebra. With a positive-definite metric the
//! spectrum is real automatically (H is similar to a Hermitian matrix).

use ndarray_linalg::QR;
use rand::Rng;

use crate::linalg::{dagger, diag_real, CMat, CVec, C64};
use crate::phcore::{Normalization, PHMetric, PHObservable, QuantumState};

fn random_complex_matrix<R: Rng>(rng: &mut R, n: usize) -> CMat {
    CMat::from_shape_fn((n, n), |_| {
        C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    })
}

pub fn random_hermitian<R: Rng>(rng: &mut R, n: usize) -> CMat {
    let m = random_complex_matrix(rng, n);
    (&m + &dagger(&m)).mapv(|z| z * C64::new(0.5, 0.0))
}

/// A random well-conditioned positive-definite metric `S S^dag + eps I`.
pub fn random_positive_metric<R: Rng>(rng: &mut R, n: usize) -> PHMetric {
    loop {
        let s = random_complex_matrix(rng, n);
        let mut eta = s.dot(&dagger(&s));
        // Diagonal shift bounds the condition number.
        for i in 0..n {
            eta[[i, i]] += C64::new(0.5, 0.0);
        }
        if let Ok(metric) = PHMetric::new(eta) {
            return metric;
        }
    }
}

/// A random indefinite signature metric `Q diag(+-1) Q^dag` with at least
/// one negative direction, built from the unitary factor of a QR
/// decomposition.
pub fn random_signature_metric<R: Rng>(rng: &mut R, n: usize) -> PHMetric {
    loop {
        let m = random_complex_matrix(rng, n);
        let Ok((q, _)) = m.qr() else { continue };
        let mut signs: Vec<f64> = (0..n)
            .map(|_| if rng.gen_bool(0.5) { 1.0 } else { -1.0 })
            .collect();
        if signs.iter().all(|&s| s > 0.0) {
            signs[0] = -1.0;
        }
        let eta = q.dot(&diag_real(&signs)).dot(&dagger(&q));
        if let Ok(metric) = PHMetric::new(eta) {
            return metric;
        }
    }
}

/// A random PH observable over the given metric (`H = eta^{-1} h`).
pub fn random_ph_observable<R: Rng>(rng: &mut R, metric: &PHMetric) -> PHObservable {
    loop {
        let h = random_hermitian(rng, metric.dim());
        let candidate = metric.inverse().dot(&h);
        if let Ok(obs) = PHObservable::new(candidate, metric.clone()) {
            return obs;
        }
    }
}

/// A random pure state, eta-normalized against the metric. Retries the
/// (measure-zero) draws whose eta-norm vanishes.
pub fn random_eta_state<R: Rng>(rng: &mut R, metric: &PHMetric) -> QuantumState {
    loop {
        let psi = CVec::from_shape_fn(metric.dim(), |_| {
            C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        if let Ok(state) = QuantumState::from_pure(&psi, metric, Normalization::EtaNormalized) {
            if state.scale().abs() < 1e6 {
                return state;
            }
        }
    }
}

/// Same draw, Dirac-normalized (for the sampler path).
pub fn random_dirac_state<R: Rng>(rng: &mut R, metric: &PHMetric) -> QuantumState {
    loop {
        let psi = CVec::from_shape_fn(metric.dim(), |_| {
            C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        if let Ok(state) = QuantumState::from_pure(&psi, metric, Normalization::Dirac) {
            return state;
        }
    }
}

pub fn random_unit_vector<R: Rng>(rng: &mut R, n: usize) -> CVec {
    loop {
        let v = CVec::from_shape_fn(n, |_| {
            C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let norm = crate::linalg::vec_norm(&v);
        if norm > 1e-3 {
            return v.mapv(|z| z / C64::new(norm, 0.0));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_observables_satisfy_ph_condition_exactly() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let metric = random_positive_metric(&mut rng, 3);
            let obs = random_ph_observable(&mut rng, &metric);
            assert!(obs.residual() <= 1e-12);
        }
    }

    #[test]
    fn signature_metrics_are_indefinite() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..10 {
            let metric = random_signature_metric(&mut rng, 4);
            assert!(!metric.is_positive_definite());
        }
    }

    #[test]
    fn ph_over_signature_metric_validates() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let metric = random_signature_metric(&mut rng, 3);
        let obs = random_ph_observable(&mut rng, &metric);
        assert!(obs.residual() <= 1e-12);
    }
}
