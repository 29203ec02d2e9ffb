//! Core pseudo-Hermitian domain types: metrics, observables and states.

mod metric;
mod observable;
mod state;

pub use metric::{Definiteness, PHMetric};
pub use observable::PHObservable;
pub use state::{eta_inner, Normalization, QuantumState};
