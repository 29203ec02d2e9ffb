//! Built-in 3-dimensional fixtures: two observable pairs, two metrics and
//! the two-angle pure-state family used throughout the experiment curves.

use crate::error::{PhError, Result};
use crate::linalg::{diag_real, from_real_rows, identity, CMat, CVec, C64};
use crate::phcore::{PHMetric, PHObservable};

pub fn eq5_a() -> CMat {
    from_real_rows([[0.0, 0.3, 1.2], [0.3, 0.0, 0.0], [2.0, 0.0, 0.0]])
}

pub fn eq5_b() -> CMat {
    from_real_rows([[0.0, 2.0, -0.6], [2.0, 0.0, 0.0], [-1.0, 0.0, 0.0]])
}

pub fn eq6_a() -> CMat {
    from_real_rows([[0.0, 2.0, -1.0], [2.0, 0.0, 0.0], [1.0, 0.0, 0.0]])
}

pub fn eq6_b() -> CMat {
    from_real_rows([[0.0, 4.0, -3.0], [4.0, 0.0, 0.0], [3.0, 0.0, 0.0]])
}

pub fn eta_pos() -> PHMetric {
    PHMetric::new(diag_real(&[1.0, 1.0, 0.6])).expect("fixture metric is valid")
}

pub fn eta_indef() -> PHMetric {
    PHMetric::new(diag_real(&[1.0, 1.0, -1.0])).expect("fixture metric is valid")
}

pub fn eta_identity() -> PHMetric {
    PHMetric::new(identity(3)).expect("identity metric is valid")
}

pub const OBSERVABLE_NAMES: &[&str] = &["eq5.A", "eq5.B", "eq6.A", "eq6.B"];
pub const METRIC_NAMES: &[&str] = &["eta_pos", "eta_indef", "identity"];

pub fn observable_matrix(name: &str) -> Result<CMat> {
    match name {
        "eq5.A" => Ok(eq5_a()),
        "eq5.B" => Ok(eq5_b()),
        "eq6.A" => Ok(eq6_a()),
        "eq6.B" => Ok(eq6_b()),
        other => Err(PhError::UnknownFixture(other.to_string())),
    }
}

pub fn metric(name: &str) -> Result<PHMetric> {
    match name {
        "eta_pos" => Ok(eta_pos()),
        "eta_indef" => Ok(eta_indef()),
        "identity" => Ok(eta_identity()),
        other => Err(PhError::UnknownFixture(other.to_string())),
    }
}

/// The fixture observable paired with its own metric (eq5 with the
/// positive metric, eq6 with the indefinite one).
pub fn observable(name: &str) -> Result<PHObservable> {
    let metric = match name {
        "eq5.A" | "eq5.B" => eta_pos(),
        "eq6.A" | "eq6.B" => eta_indef(),
        other => return Err(PhError::UnknownFixture(other.to_string())),
    };
    PHObservable::new(observable_matrix(name)?, metric)
}

/// `|psi(theta1, theta2)> = (cos t1 sin t2, cos t1 cos t2, sin t1)`,
/// unnormalized.
pub fn psi_state(theta1: f64, theta2: f64) -> CVec {
    CVec::from_vec(vec![
        C64::new(theta1.cos() * theta2.sin(), 0.0),
        C64::new(theta1.cos() * theta2.cos(), 0.0),
        C64::new(theta1.sin(), 0.0),
    ])
}
