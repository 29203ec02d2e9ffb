//! Experiment configuration: JSON ingestion and fixture-name resolution.

use serde::{Deserialize, Serialize};

use crate::error::{PhError, Result};
use crate::fixtures;
use crate::linalg::{matrix_from_json, vector_from_json, JsonMatrix, JsonVector, CMat};
use crate::phcore::{Normalization, PHMetric, PHObservable, QuantumState};

/// An observable or metric reference: a fixture name (`"eq5.A"`,
/// `"eta_pos"`, ...) or an inline matrix.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixSource {
    Name(String),
    Inline(JsonMatrix),
}

impl MatrixSource {
    pub fn resolve_observable_matrix(&self) -> Result<CMat> {
        match self {
            MatrixSource::Name(name) => fixtures::observable_matrix(name),
            MatrixSource::Inline(rows) => matrix_from_json(rows),
        }
    }

    pub fn resolve_metric(&self) -> Result<PHMetric> {
        match self {
            MatrixSource::Name(name) => fixtures::metric(name),
            MatrixSource::Inline(rows) => PHMetric::new(matrix_from_json(rows)?),
        }
    }
}

/// State specification: the two-angle family, an inline pure vector or an
/// inline density matrix.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StateSource {
    Angles { theta1: f64, theta2: f64 },
    Pure { psi: JsonVector },
    Density { rho: JsonMatrix },
}

impl StateSource {
    pub fn resolve(&self, metric: &PHMetric, mode: Normalization) -> Result<QuantumState> {
        match self {
            StateSource::Angles { theta1, theta2 } => {
                QuantumState::from_pure(&fixtures::psi_state(*theta1, *theta2), metric, mode)
            }
            StateSource::Pure { psi } => {
                QuantumState::from_pure(&vector_from_json(psi)?, metric, mode)
            }
            StateSource::Density { rho } => {
                QuantumState::from_density(matrix_from_json(rho)?, metric, mode)
            }
        }
    }
}

/// One experiment: an observable over a metric, a state, and the sampling
/// parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub observable: MatrixSource,
    pub metric: MatrixSource,
    pub state: StateSource,
    #[serde(default)]
    pub trials: Option<u64>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub mode: Option<String>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| PhError::Config(e.to_string()))
    }

    pub fn resolve_observable(&self) -> Result<PHObservable> {
        let metric = self.metric.resolve_metric()?;
        PHObservable::new(self.observable.resolve_observable_matrix()?, metric)
    }
}
