//! Dense complex matrix and vector helpers shared by all modules.
//!
//! Matrices are `ndarray::Array2<Complex64>` throughout; nothing here is
//! sparse or size-generic beyond what a desk-scale simulation needs.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::error::{PhError, Result};

pub type C64 = Complex64;
pub type CMat = Array2<C64>;
pub type CVec = Array1<C64>;

/// Conjugate transpose.
pub fn dagger(m: &CMat) -> CMat {
    m.t().mapv(|z| z.conj())
}

/// Frobenius norm.
pub fn fro_norm(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Euclidean (Dirac) norm of a vector.
pub fn vec_norm(v: &CVec) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Dirac inner product `<a|b>` (conjugate-linear in the first argument).
pub fn inner(a: &CVec, b: &CVec) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// Rank-1 operator `|a><b|`.
pub fn outer(a: &CVec, b: &CVec) -> CMat {
    let n = a.len();
    CMat::from_shape_fn((n, n), |(i, j)| a[i] * b[j].conj())
}

pub fn identity(n: usize) -> CMat {
    CMat::eye(n)
}

pub fn trace(m: &CMat) -> C64 {
    m.diag().sum()
}

pub fn all_finite(m: &CMat) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Rejects non-square or non-finite matrices; returns the dimension.
pub fn check_square(m: &CMat) -> Result<usize> {
    let (rows, cols) = m.dim();
    if rows != cols {
        return Err(PhError::NotSquare { rows, cols });
    }
    if !all_finite(m) {
        return Err(PhError::NonFinite);
    }
    Ok(rows)
}

/// Relative Hermiticity residual `|M - M^dag|_F / |M|_F`.
pub fn hermiticity_residual(m: &CMat) -> f64 {
    let scale = fro_norm(m).max(1.0);
    fro_norm(&(m - &dagger(m))) / scale
}

/// Builds a complex matrix from real entries.
pub fn from_real_rows<const N: usize>(rows: [[f64; N]; N]) -> CMat {
    CMat::from_shape_fn((N, N), |(i, j)| C64::new(rows[i][j], 0.0))
}

/// Real diagonal matrix.
pub fn diag_real(entries: &[f64]) -> CMat {
    let n = entries.len();
    CMat::from_shape_fn((n, n), |(i, j)| {
        if i == j {
            C64::new(entries[i], 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

// JSON interchange: a complex matrix is a nested array of [re, im] pairs.
// serde_json renders f64 with shortest round-trip decimals, so serialized
// values survive a round trip bit-exactly.

pub type JsonMatrix = Vec<Vec<[f64; 2]>>;
pub type JsonVector = Vec<[f64; 2]>;

pub fn matrix_to_json(m: &CMat) -> JsonMatrix {
    m.rows()
        .into_iter()
        .map(|row| row.iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

pub fn matrix_from_json(rows: &JsonMatrix) -> Result<CMat> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(PhError::Config(
            "matrix JSON must be a non-empty square nested array".into(),
        ));
    }
    let m = CMat::from_shape_fn((n, n), |(i, j)| C64::new(rows[i][j][0], rows[i][j][1]));
    if !all_finite(&m) {
        return Err(PhError::NonFinite);
    }
    Ok(m)
}

pub fn vector_to_json(v: &CVec) -> JsonVector {
    v.iter().map(|z| [z.re, z.im]).collect()
}

pub fn vector_from_json(entries: &JsonVector) -> Result<CVec> {
    if entries.is_empty() {
        return Err(PhError::Config("vector JSON must be non-empty".into()));
    }
    let v = CVec::from_iter(entries.iter().map(|p| C64::new(p[0], p[1])));
    if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(PhError::NonFinite);
    }
    Ok(v)
}
