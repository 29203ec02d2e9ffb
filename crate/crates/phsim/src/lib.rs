//! Pseudo-Hermitian quantum measurement toolkit.
//!
//! Implements observables that are Hermitian under a modified metric inner
//! product, their eta-orthogonal spectral decomposition, the direct-sum
//! dilated projective measurement protocol with postselection, a shot-noise
//! Monte Carlo model of the photonic realization, and the metric-dependent
//! uncertainty relation. Everything is dense, double-precision and sized
//! for desk-scale (qutrit) experiments.

pub mod config;
pub mod dilation;
pub mod error;
pub mod fixtures;
pub mod linalg;
pub mod measurement;
pub mod phcore;
pub mod random;
pub mod sampler;
pub mod spectral;
pub mod tol;
pub mod uncertainty;

pub use error::{PhError, Result};
pub use phcore::{Definiteness, Normalization, PHMetric, PHObservable, QuantumState};
pub use spectral::PHSpectrum;
