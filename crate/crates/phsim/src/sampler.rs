//! Monte Carlo model of the photonic measurement run.
//!
//! Each emitted photon is allocated to a subspace with probability
//! proportional to `w_k`, projected onto the dual direction (a Bernoulli
//! detection with probability `<v_k|rho|v_k>`), and either detected or
//! discarded by postselection. Estimators weight the surviving counts by
//! the sign signature; normalization emerges from the weighted statistics,
//! so the sampler never eta-normalizes and never sees more of `rho` than
//! those projections.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dilation::DilatedMeasurement;
use crate::error::{PhError, Result};
use crate::linalg::C64;
use crate::measurement;
use crate::phcore::{PHObservable, QuantumState};
use crate::spectral::PHSpectrum;

/// Detected-event counts per subspace for one simulated run.
#[derive(Debug, Clone, PartialEq)]
pub struct EventRecord {
    pub counts: Vec<u64>,
    pub trials: u64,
    pub seed: u64,
    pub eigenvalues: Vec<f64>,
    pub signs: Vec<f64>,
}

impl EventRecord {
    pub fn detected(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Weighted estimators recovered from the counts.
#[derive(Debug, Clone)]
pub struct MeasurementEstimate {
    pub expectation_hat: f64,
    pub variance_hat: f64,
    /// Delta-method standard error of `expectation_hat`.
    pub std_error: f64,
    /// Delta-method standard error of `variance_hat`.
    pub variance_std_error: f64,
    pub counts_used: EventRecord,
}

/// Runs `trials` emitted photons through allocation, projection and
/// postselection. The state enters Dirac-normalized; detection uses its
/// PSD unit-trace part only.
pub fn simulate_events(
    dilation: &DilatedMeasurement,
    spectrum: &PHSpectrum,
    state: &QuantumState,
    trials: u64,
    seed: u64,
) -> Result<EventRecord> {
    let n = dilation.dim();
    if state.dim() != n {
        return Err(PhError::DimensionMismatch {
            expected: n,
            found: state.dim(),
        });
    }
    let total_weight: f64 = dilation.weights().iter().sum();
    // Cumulative allocation boundaries in [0, 1).
    let mut cumulative = Vec::with_capacity(n);
    let mut acc = 0.0;
    for w in dilation.weights() {
        acc += w / total_weight;
        cumulative.push(acc);
    }
    // Detection probability per subspace: <v_k|rho|v_k> on the Dirac part.
    let rho = state.dirac_rho();
    let detection: Vec<f64> = dilation
        .duals()
        .iter()
        .map(|v| {
            let p: C64 = v
                .iter()
                .zip(rho.dot(v).iter())
                .map(|(a, b)| a.conj() * b)
                .sum();
            p.re.clamp(0.0, 1.0)
        })
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = vec![0u64; n];
    for _ in 0..trials {
        let draw: f64 = rng.gen();
        let k = cumulative.partition_point(|&c| c <= draw).min(n - 1);
        let detect: f64 = rng.gen();
        if detect < detection[k] {
            counts[k] += 1;
        }
    }
    Ok(EventRecord {
        counts,
        trials,
        seed,
        eigenvalues: spectrum.eigenvalues().to_vec(),
        signs: spectrum.signs().to_vec(),
    })
}

/// Recovers expectation and variance from sign-weighted counts:
/// `e_hat = sum_k s_k e_k n_k / sum_k s_k n_k` and the matching
/// dispersion around it. Standard errors come from the multinomial
/// covariance of the counts via the delta method.
pub fn estimate(record: &EventRecord) -> Result<MeasurementEstimate> {
    let denom: f64 = record
        .counts
        .iter()
        .zip(record.signs.iter())
        .map(|(&n, s)| n as f64 * s)
        .sum();
    if denom == 0.0 {
        return Err(PhError::DegenerateStatistics);
    }
    let e_hat: f64 = record
        .counts
        .iter()
        .zip(record.signs.iter())
        .zip(record.eigenvalues.iter())
        .map(|((&n, s), e)| n as f64 * s * e)
        .sum::<f64>()
        / denom;
    let v_hat: f64 = record
        .counts
        .iter()
        .zip(record.signs.iter())
        .zip(record.eigenvalues.iter())
        .map(|((&n, s), e)| n as f64 * s * (e - e_hat).powi(2))
        .sum::<f64>()
        / denom;

    let trials = record.trials.max(1) as f64;
    // Gradients of both ratio estimators with respect to the counts. The
    // dependence of v_hat on e_hat drops out: the mixed term is
    // proportional to sum_k s_k (e_k - e_hat) n_k = 0.
    let grad_e: Vec<f64> = record
        .signs
        .iter()
        .zip(record.eigenvalues.iter())
        .map(|(s, e)| s * (e - e_hat) / denom)
        .collect();
    let grad_v: Vec<f64> = record
        .signs
        .iter()
        .zip(record.eigenvalues.iter())
        .map(|(s, e)| s * ((e - e_hat).powi(2) - v_hat) / denom)
        .collect();
    let std_error = multinomial_delta(&record.counts, trials, &grad_e);
    let variance_std_error = multinomial_delta(&record.counts, trials, &grad_v);

    Ok(MeasurementEstimate {
        expectation_hat: e_hat,
        variance_hat: v_hat,
        std_error,
        variance_std_error,
        counts_used: record.clone(),
    })
}

/// `sqrt(T [sum q g^2 - (sum q g)^2])` with plug-in `q_k = n_k / T`.
/// The discarded-event category carries zero gradient, so summing over
/// detected categories only is exact.
fn multinomial_delta(counts: &[u64], trials: f64, grad: &[f64]) -> f64 {
    let mut quad = 0.0;
    let mut lin = 0.0;
    for (&n, g) in counts.iter().zip(grad.iter()) {
        let q = n as f64 / trials;
        quad += q * g * g;
        lin += q * g;
    }
    (trials * (quad - lin * lin)).max(0.0).sqrt()
}

/// Analytic moments next to the sampled estimate for one observable.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub analytic_expectation: f64,
    pub analytic_variance: f64,
    pub estimate: MeasurementEstimate,
}

/// End-to-end pipeline: decompose, dilate, sample, estimate, and place the
/// analytic moments alongside. Deterministic for a given seed.
pub fn run_experiment(
    observable: &PHObservable,
    state: &QuantumState,
    trials: u64,
    seed: u64,
) -> Result<RunOutcome> {
    let spectrum = PHSpectrum::decompose(observable)?;
    let dilation = DilatedMeasurement::build(&spectrum)?;
    let analytic = measurement::moments(observable, state)?;
    let record = simulate_events(&dilation, &spectrum, state, trials, seed)?;
    let estimate = estimate(&record)?;
    Ok(RunOutcome {
        analytic_expectation: analytic.expectation,
        analytic_variance: analytic.variance,
        estimate,
    })
}
