//! Eigendecomposition of pseudo-Hermitian observables.
//!
//! Produces eta-orthonormalized eigenvectors with their sign signature
//! `s_k = <E_k|eta|E_k> in {+1, -1}`, sorted by ascending eigenvalue with a
//! deterministic phase convention (largest-modulus component real positive).

use ndarray_linalg::Eig;

use crate::error::{PhError, Result};
use crate::linalg::{fro_norm, identity, outer, vec_norm, CMat, CVec, C64};
use crate::phcore::{PHMetric, PHObservable};
use crate::tol::{TOL_DEG_FACTOR, TOL_NORM, TOL_REL};

#[derive(Debug, Clone)]
pub struct PHSpectrum {
    eigenvalues: Vec<f64>,
    eigenvectors: Vec<CVec>,
    signs: Vec<f64>,
    metric: PHMetric,
}

impl PHSpectrum {
    /// Decomposes a validated PH observable.
    ///
    /// Rejects complex spectra (broken real-spectrum phase), degenerate
    /// eigenvalues and vanishing eta-norms; each of these breaks an
    /// assumption the projective protocol relies on.
    pub fn decompose(observable: &PHObservable) -> Result<Self> {
        let h = observable.matrix();
        let metric = observable.metric().clone();
        let n = h.nrows();
        let (raw_vals, raw_vecs) = h.eig()?;

        let max_abs = raw_vals.iter().fold(0.0f64, |a, z| a.max(z.norm()));
        let max_imag = raw_vals.iter().fold(0.0f64, |a, z| a.max(z.im.abs()));
        if max_imag > TOL_REL * max_abs.max(1e-300) {
            return Err(PhError::ComplexSpectrum { max_imag });
        }

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| raw_vals[i].re.partial_cmp(&raw_vals[j].re).unwrap());

        let tol_deg = TOL_DEG_FACTOR * max_abs;
        for w in order.windows(2) {
            let gap = raw_vals[w[1]].re - raw_vals[w[0]].re;
            if gap.abs() <= tol_deg {
                return Err(PhError::Degenerate { gap });
            }
        }

        let mut eigenvalues = Vec::with_capacity(n);
        let mut eigenvectors = Vec::with_capacity(n);
        let mut signs = Vec::with_capacity(n);
        for &idx in &order {
            let mut vec: CVec = raw_vecs.column(idx).to_owned();
            let unit = vec_norm(&vec);
            vec.mapv_inplace(|z| z / C64::new(unit, 0.0));
            let q = crate::phcore::eta_inner(&vec, &vec, &metric)?.re;
            if q.abs() < TOL_NORM {
                return Err(PhError::VanishingEtaNorm { value: q });
            }
            let sign = q.signum();
            vec.mapv_inplace(|z| z / C64::new(q.abs().sqrt(), 0.0));
            phase_fix(&mut vec);
            eigenvalues.push(raw_vals[idx].re);
            eigenvectors.push(vec);
            signs.push(sign);
        }

        let spectrum = Self {
            eigenvalues,
            eigenvectors,
            signs,
            metric,
        };
        spectrum.check_invariants(h)?;
        Ok(spectrum)
    }

    // Eigenpair residuals and cross eta-orthogonality follow from the
    // non-degenerate decomposition; a gross violation means the backend
    // produced an unusable basis.
    fn check_invariants(&self, h: &CMat) -> Result<()> {
        let scale = fro_norm(h).max(1.0);
        for (k, vec) in self.eigenvectors.iter().enumerate() {
            let resid = vec_norm(
                &(h.dot(vec) - &vec.mapv(|z| z * C64::new(self.eigenvalues[k], 0.0))),
            ) / (scale * vec_norm(vec));
            if resid > 1e-6 {
                return Err(PhError::Numerical {
                    op: "PHSpectrum::decompose",
                    what: "eigenpair residual",
                    value: resid,
                });
            }
        }
        let gram = self.eta_gram();
        let mut off = 0.0f64;
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                if i != j {
                    off = off.max(gram[[i, j]].norm());
                }
            }
        }
        if off > 1e-6 {
            return Err(PhError::Numerical {
                op: "PHSpectrum::decompose",
                what: "eta-orthogonality off-diagonal",
                value: off,
            });
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvector(&self, k: usize) -> &CVec {
        &self.eigenvectors[k]
    }

    pub fn eigenvectors(&self) -> &[CVec] {
        &self.eigenvectors
    }

    /// Sign signature `s_k = <E_k|eta|E_k>` after eta-normalization.
    pub fn signs(&self) -> &[f64] {
        &self.signs
    }

    pub fn metric(&self) -> &PHMetric {
        &self.metric
    }

    /// Diagnostic Gram matrix `G_kl = <E_k|eta|E_l>`.
    pub fn eta_gram(&self) -> CMat {
        let n = self.dim();
        CMat::from_shape_fn((n, n), |(k, l)| {
            crate::phcore::eta_inner(&self.eigenvectors[k], &self.eigenvectors[l], &self.metric)
                .expect("dimensions fixed at construction")
        })
    }

    /// `|sum_k s_k |E_k><E_k| eta - identity|_F`.
    pub fn completeness_residual(&self) -> f64 {
        let n = self.dim();
        let mut acc = CMat::zeros((n, n));
        for k in 0..n {
            let proj = outer(&self.eigenvectors[k], &self.eigenvectors[k]).dot(self.metric.eta());
            acc = acc + proj.mapv(|z| z * C64::new(self.signs[k], 0.0));
        }
        fro_norm(&(acc - identity(n)))
    }

    /// Reassembles `H = sum_k e_k s_k |E_k><E_k| eta`.
    pub fn spectral_resolution(&self) -> CMat {
        let n = self.dim();
        let mut acc = CMat::zeros((n, n));
        for k in 0..n {
            let proj = outer(&self.eigenvectors[k], &self.eigenvectors[k]).dot(self.metric.eta());
            acc = acc + proj.mapv(|z| z * C64::new(self.signs[k] * self.eigenvalues[k], 0.0));
        }
        acc
    }
}

/// Makes the largest-modulus component real positive (first index wins ties).
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
        let phase = v[best] / C64::new(best_mod, 0.0);
        let rot = phase.conj();
        v.mapv_inplace(|z| z * rot);
    }
}
