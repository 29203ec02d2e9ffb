//! Direct-sum dilated projective measurement construction.
//!
//! For each eigenmode `E_k` of the observable there is a dual direction
//! `v_k ~ eta E_k` (orthogonal to every other eigenvector), a rank-1
//! projector `P_k = |v_k><v_k|`, an allocation weight
//! `w_k = 1 / |<v_k|E_k>|^2` and a unitary `U_k` that steers `v_k` onto
//! the first standard basis vector. Everything here depends only on the
//! spectrum, never on the measured state.

use crate::error::{PhError, Result};
use crate::linalg::{identity, inner, outer, vec_norm, CMat, CVec, C64};
use crate::phcore::QuantumState;
use crate::spectral::PHSpectrum;
use crate::tol::{TOL_ABS, TOL_REL};

/// One Givens-style rotation on the adjacent pair `(first, first + 1)`.
///
/// The 2x2 block is
/// `[[cos(theta) e^{-i alpha}, sin(theta) e^{-i beta}],
///   [-sin(theta) e^{i beta},  cos(theta) e^{i alpha}]]`,
/// mirroring a beam-displacer/waveplate stage acting on two path modes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoLevelRotation {
    pub first: usize,
    pub theta: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl TwoLevelRotation {
    pub fn block(&self) -> [[C64; 2]; 2] {
        let (ct, st) = (self.theta.cos(), self.theta.sin());
        [
            [
                C64::from_polar(ct, -self.alpha),
                C64::from_polar(st, -self.beta),
            ],
            [
                -C64::from_polar(st, self.beta),
                C64::from_polar(ct, self.alpha),
            ],
        ]
    }

    /// Embeds the 2x2 block into an n-dimensional identity.
    pub fn matrix(&self, n: usize) -> CMat {
        let mut m = identity(n);
        let b = self.block();
        let i = self.first;
        m[[i, i]] = b[0][0];
        m[[i, i + 1]] = b[0][1];
        m[[i + 1, i]] = b[1][0];
        m[[i + 1, i + 1]] = b[1][1];
        m
    }
}

/// Builds a unitary with `U v = e_0` as a cascade of adjacent-pair
/// rotations, eliminating components bottom-up.
///
/// Returns the product matrix and the factors ordered so that
/// `factors[0] * factors[1] * ... = U`. At most `n - 1` factors.
pub fn synthesize_unitary(v: &CVec) -> Result<(CMat, Vec<TwoLevelRotation>)> {
    let n = v.len();
    let norm = vec_norm(v);
    if (norm - 1.0).abs() > TOL_REL {
        return Err(PhError::NotUnitVector { norm });
    }
    let mut work = v.clone();
    let mut applied: Vec<TwoLevelRotation> = Vec::new();
    for i in (1..n).rev() {
        let a = work[i - 1];
        let b = work[i];
        let already_aligned = b.norm() <= 1e-15 && a.im.abs() <= 1e-15 && a.re >= 0.0;
        if already_aligned {
            continue;
        }
        let r = (a.norm_sqr() + b.norm_sqr()).sqrt();
        let rot = TwoLevelRotation {
            first: i - 1,
            theta: b.norm().atan2(a.norm()),
            alpha: if a.norm() > 0.0 { a.arg() } else { 0.0 },
            beta: if b.norm() > 0.0 { b.arg() } else { 0.0 },
        };
        work[i - 1] = C64::new(r, 0.0);
        work[i] = C64::new(0.0, 0.0);
        applied.push(rot);
    }
    // Rotations were applied to the vector from the bottom pair up; the
    // matrix product therefore runs last-applied-first.
    let factors: Vec<TwoLevelRotation> = applied.into_iter().rev().collect();
    let mut u = identity(n);
    for rot in &factors {
        u = u.dot(&rot.matrix(n));
    }
    Ok((u, factors))
}

/// Dual directions `v_k = eta E_k / |eta E_k|`, phase-fixed like the
/// eigenvectors. Orthogonality `<v_k|E_l> = 0` for `l != k` follows from
/// eta-orthogonality of the spectrum and is re-checked here.
pub fn dual_vectors(spectrum: &PHSpectrum) -> Result<Vec<CVec>> {
    let eta = spectrum.metric().eta();
    let n = spectrum.dim();
    let mut duals = Vec::with_capacity(n);
    for k in 0..n {
        let mut v = eta.dot(spectrum.eigenvector(k));
        let norm = vec_norm(&v);
        if norm <= TOL_ABS {
            return Err(PhError::IllConditioned { norm });
        }
        v.mapv_inplace(|z| z / C64::new(norm, 0.0));
        phase_fix(&mut v);
        duals.push(v);
    }
    for (k, v) in duals.iter().enumerate() {
        for l in 0..n {
            if l != k {
                let overlap = inner(v, spectrum.eigenvector(l)).norm();
                if overlap > 1e-7 {
                    return Err(PhError::Numerical {
                        op: "dual_vectors",
                        what: "dual/eigenvector overlap",
                        value: overlap,
                    });
                }
            }
        }
    }
    Ok(duals)
}

fn phase_fix(v: &mut CVec) {
    let mut best = 0;
    let mut best_mod = 0.0;
    for (i, z) in v.iter().enumerate() {
        if z.norm() > best_mod {
            best_mod = z.norm();
            best = i;
        }
    }
    if best_mod > 0.0 {
        let rot = (v[best] / C64::new(best_mod, 0.0)).conj();
        v.mapv_inplace(|z| z * rot);
    }
}

/// The state-independent dilated measurement data for one observable.
#[derive(Debug, Clone)]
pub struct DilatedMeasurement {
    duals: Vec<CVec>,
    projectors: Vec<CMat>,
    weights: Vec<f64>,
    normalizer: f64,
    unitaries: Vec<CMat>,
    factorizations: Vec<Vec<TwoLevelRotation>>,
}

impl DilatedMeasurement {
    pub fn build(spectrum: &PHSpectrum) -> Result<Self> {
        let duals = dual_vectors(spectrum)?;
        let n = duals.len();
        let mut projectors = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        let mut unitaries = Vec::with_capacity(n);
        let mut factorizations = Vec::with_capacity(n);
        for (k, v) in duals.iter().enumerate() {
            projectors.push(outer(v, v));
            let overlap = inner(v, spectrum.eigenvector(k)).norm_sqr();
            if overlap <= TOL_ABS {
                return Err(PhError::IllConditioned { norm: overlap });
            }
            weights.push(1.0 / overlap);
            let (u, factors) = synthesize_unitary(v)?;
            unitaries.push(u);
            factorizations.push(factors);
        }
        let normalizer = weights.iter().sum::<f64>() / n as f64;
        Ok(Self {
            duals,
            projectors,
            weights,
            normalizer,
            unitaries,
            factorizations,
        })
    }

    pub fn dim(&self) -> usize {
        self.duals.len()
    }

    pub fn duals(&self) -> &[CVec] {
        &self.duals
    }

    pub fn projectors(&self) -> &[CMat] {
        &self.projectors
    }

    /// Allocation weights `w_k = 1 / |<v_k|E_k>|^2`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `N = sum_k w_k / n`.
    pub fn normalizer(&self) -> f64 {
        self.normalizer
    }

    pub fn unitaries(&self) -> &[CMat] {
        &self.unitaries
    }

    pub fn factorizations(&self) -> &[Vec<TwoLevelRotation>] {
        &self.factorizations
    }

    /// `Tr[P_k rho] * w_k` on the eta-normalized state.
    ///
    /// This is the protocol identity: the result equals the decomposition
    /// coefficient `p_kk` from the analytic route.
    pub fn subspace_probability(&self, k: usize, state: &QuantumState) -> Result<f64> {
        if k >= self.dim() {
            return Err(PhError::IndexOutOfRange {
                index: k,
                dim: self.dim(),
            });
        }
        if state.dim() != self.dim() {
            return Err(PhError::DimensionMismatch {
                expected: self.dim(),
                found: state.dim(),
            });
        }
        let rho = state.effective_rho();
        let v = &self.duals[k];
        let projected: C64 = v
            .iter()
            .zip(rho.dot(v).iter())
            .map(|(a, b)| a.conj() * b)
            .sum();
        Ok(projected.re * self.weights[k])
    }

    /// The explicit n^2-dimensional block-diagonal projector
    /// `P = P_1 (+) ... (+) P_n`, for idempotence checks.
    pub fn materialized_projector(&self) -> CMat {
        let n = self.dim();
        let mut big = CMat::zeros((n * n, n * n));
        for (k, p) in self.projectors.iter().enumerate() {
            for i in 0..n {
                for j in 0..n {
                    big[[k * n + i, k * n + j]] = p[[i, j]];
                }
            }
        }
        big
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::linalg::{dagger, fro_norm};
    use crate::measurement::DecompositionCoefficients;
    use crate::phcore::Normalization;
    use std::f64::consts::FRAC_PI_4;

    fn unit(entries: &[(f64, f64)]) -> CVec {
        let mut v = CVec::from_iter(entries.iter().map(|&(re, im)| C64::new(re, im)));
        let n = vec_norm(&v);
        v.mapv_inplace(|z| z / C64::new(n, 0.0));
        v
    }

    #[test]
    fn aligned_vector_needs_no_factors() {
        let v = unit(&[(1.0, 0.0), (0.0, 0.0), (0.0, 0.0)]);
        let (u, factors) = synthesize_unitary(&v).unwrap();
        assert!(factors.is_empty());
        assert!(fro_norm(&(&u - &identity(3))) < 1e-14);
    }

    #[test]
    fn basis_swap_is_a_single_rotation() {
        let v = unit(&[(0.0, 0.0), (1.0, 0.0), (0.0, 0.0)]);
        let (u, factors) = synthesize_unitary(&v).unwrap();
        assert_eq!(factors.len(), 1);
        let uv = u.dot(&v);
        assert!((uv[0].re - 1.0).abs() < 1e-14 && uv[1].norm() < 1e-14);
    }

    #[test]
    fn synthesis_on_fixture_dual() {
        let spec = PHSpectrum::decompose(&fixtures::observable("eq5.A").unwrap()).unwrap();
        let duals = dual_vectors(&spec).unwrap();
        for v in &duals {
            let (u, factors) = synthesize_unitary(v).unwrap();
            // Unitarity and alignment.
            assert!(fro_norm(&(u.dot(&dagger(&u)) - identity(3))) < 1e-12);
            let uv = u.dot(v);
            assert!((uv[0].re - 1.0).abs() < 1e-10);
            assert!(uv[1].norm() < 1e-10 && uv[2].norm() < 1e-10);
            // Factor product reconstructs U.
            let mut prod = identity(3);
            for f in &factors {
                prod = prod.dot(&f.matrix(3));
            }
            assert!(fro_norm(&(&prod - &u)) < 1e-10);
            assert!(factors.len() <= 2);
        }
    }

    #[test]
    fn rejects_non_unit_vector() {
        let v = CVec::from_vec(vec![C64::new(2.0, 0.0), C64::new(0.0, 0.0)]);
        assert!(matches!(
            synthesize_unitary(&v),
            Err(PhError::NotUnitVector { .. })
        ));
    }

    #[test]
    fn negative_component_gets_phase_factor() {
        let v = unit(&[(-1.0, 0.0), (0.0, 0.0)]);
        let (u, factors) = synthesize_unitary(&v).unwrap();
        assert_eq!(factors.len(), 1);
        let uv = u.dot(&v);
        assert!((uv[0].re - 1.0).abs() < 1e-14);
    }

    #[test]
    fn duals_for_hermitian_case_are_eigenvectors() {
        let metric = fixtures::eta_identity();
        let h = crate::linalg::diag_real(&[1.0, 2.0, 3.0]);
        let obs = crate::phcore::PHObservable::new(h, metric).unwrap();
        let spec = PHSpectrum::decompose(&obs).unwrap();
        let duals = dual_vectors(&spec).unwrap();
        for (k, v) in duals.iter().enumerate() {
            assert!(vec_norm(&(v - spec.eigenvector(k))) < 1e-12);
        }
        let dil = DilatedMeasurement::build(&spec).unwrap();
        for w in dil.weights() {
            assert!((w - 1.0).abs() < 1e-12);
        }
        assert!((dil.normalizer() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eq5_zero_mode_dual_direction() {
        // E for e = 0 is proportional to (0, -4, 1); the dual is eta E,
        // proportional to (0, -4, 0.6).
        let spec = PHSpectrum::decompose(&fixtures::observable("eq5.A").unwrap()).unwrap();
        let duals = dual_vectors(&spec).unwrap();
        let v = &duals[1];
        assert!(v[0].norm() < 1e-10);
        let ratio = v[2].re / v[1].re;
        assert!((ratio - 0.6 / -4.0).abs() < 1e-9, "ratio = {ratio}");
    }

    #[test]
    fn duals_orthogonal_to_other_eigenvectors() {
        let spec = PHSpectrum::decompose(&fixtures::observable("eq6.A").unwrap()).unwrap();
        let duals = dual_vectors(&spec).unwrap();
        for (k, v) in duals.iter().enumerate() {
            for l in 0..3 {
                if l != k {
                    assert!(inner(v, spec.eigenvector(l)).norm() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn eq5_weights_match_eta_e_norms() {
        let spec = PHSpectrum::decompose(&fixtures::observable("eq5.A").unwrap()).unwrap();
        let dil = DilatedMeasurement::build(&spec).unwrap();
        let eta = fixtures::eta_pos();
        for k in 0..3 {
            let expected = eta.eta().dot(spec.eigenvector(k));
            let norm_sq = expected.iter().map(|z| z.norm_sqr()).sum::<f64>();
            assert!((dil.weights()[k] - norm_sq).abs() < 1e-9);
        }
    }

    #[test]
    fn projectors_are_idempotent() {
        let spec = PHSpectrum::decompose(&fixtures::observable("eq6.B").unwrap()).unwrap();
        let dil = DilatedMeasurement::build(&spec).unwrap();
        for p in dil.projectors() {
            assert!(fro_norm(&(p.dot(p) - p)) <= 1e-12);
        }
        let big = dil.materialized_projector();
        assert!(fro_norm(&(big.dot(&big) - &big)) <= 1e-9);
    }

    #[test]
    fn eigenmode_state_concentrates_on_its_subspace() {
        let spec = PHSpectrum::decompose(&fixtures::observable("eq5.A").unwrap()).unwrap();
        let dil = DilatedMeasurement::build(&spec).unwrap();
        let state = QuantumState::from_pure(
            spec.eigenvector(1),
            &fixtures::eta_pos(),
            Normalization::EtaNormalized,
        )
        .unwrap();
        assert!((dil.subspace_probability(1, &state).unwrap() - 1.0).abs() < 1e-9);
        assert!(dil.subspace_probability(0, &state).unwrap().abs() < 1e-9);
        assert!(dil.subspace_probability(2, &state).unwrap().abs() < 1e-9);
    }

    #[test]
    fn protocol_identity_against_decomposition() {
        let spec = PHSpectrum::decompose(&fixtures::observable("eq5.A").unwrap()).unwrap();
        let dil = DilatedMeasurement::build(&spec).unwrap();
        let state = QuantumState::from_pure(
            &fixtures::psi_state(0.0, FRAC_PI_4),
            &fixtures::eta_pos(),
            Normalization::EtaNormalized,
        )
        .unwrap();
        let coeffs = DecompositionCoefficients::new(&spec, &state).unwrap();
        for k in 0..3 {
            let got = dil.subspace_probability(k, &state).unwrap();
            assert!((got - coeffs.diagonal()[k]).abs() < 1e-9);
        }
    }

    #[test]
    fn weighted_probabilities_sum_to_one() {
        let spec = PHSpectrum::decompose(&fixtures::observable("eq6.A").unwrap()).unwrap();
        let dil = DilatedMeasurement::build(&spec).unwrap();
        let state = QuantumState::from_pure(
            &fixtures::psi_state(0.9, 2.2),
            &fixtures::eta_indef(),
            Normalization::EtaNormalized,
        )
        .unwrap();
        let total: f64 = (0..3)
            .map(|k| spec.signs()[k] * dil.subspace_probability(k, &state).unwrap())
            .sum();
        assert!((total - 1.0).abs() < 1e-9);
    }

    #[test]
    fn index_out_of_range() {
        let spec = PHSpectrum::decompose(&fixtures::observable("eq5.A").unwrap()).unwrap();
        let dil = DilatedMeasurement::build(&spec).unwrap();
        let state = QuantumState::from_pure(
            &fixtures::psi_state(0.0, 1.0),
            &fixtures::eta_pos(),
            Normalization::EtaNormalized,
        )
        .unwrap();
        assert!(matches!(
            dil.subspace_probability(5, &state),
            Err(PhError::IndexOutOfRange { .. })
        ));
    }
}
