//! Small dense helpers on top of nalgebra.

use crate::{CMatrix, CVector, Complex64};

/// Maximum absolute row sum.
pub fn norm_inf(m: &CMatrix) -> f64 {
    m.row_iter()
        .map(|row| row.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Largest entry modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Entrywise complex conjugate.
pub fn conj(m: &CMatrix) -> CMatrix {
    m.map(|z| z.conj())
}

/// Entrywise complex conjugate of a vector.
pub fn conj_vec(v: &CVector) -> CVector {
    v.map(|z| z.conj())
}

/// Euclidean norm of a complex vector.
pub fn vec_norm(v: &CVector) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `⟨u|v⟩ = Σ conj(u_i) v_i`.
pub fn dot(u: &CVector, v: &CVector) -> Complex64 {
    u.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum()
}

/// Bilinear pairing `Σ u_i v_i` with no conjugation.
pub fn bilinear(u: &CVector, v: &CVector) -> Complex64 {
    u.iter().zip(v.iter()).map(|(a, b)| a * b).sum()
}

/// Builds a matrix from row-major `(re, im)` pairs.
pub fn from_rows(rows: &[Vec<(f64, f64)>]) -> CMatrix {
    let n = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    CMatrix::from_fn(n, m, |i, j| {
        let (re, im) = rows[i][j];
        Complex64::new(re, im)
    })
}

/// Null vector of a (numerically) singular square matrix: the right singular
/// vector belonging to the smallest singular value. Returns the vector and
/// that singular value.
pub fn null_vector(m: &CMatrix) -> Option<(CVector, f64)> {
    let svd = m.clone().try_svd(false, true, 1e-15, 500)?;
    let v_t = svd.v_t?;
    let (idx, sigma) = svd
        .singular_values
        .iter()
        .copied()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(&b.1))?;
    let v = v_t.row(idx).adjoint();
    Some((v, sigma))
}

/// Eigenvalues of a general complex square matrix via a complex Schur form.
pub fn eigenvalues(m: &CMatrix) -> Option<Vec<Complex64>> {
    let schur = m.clone().try_schur(1e-15, 10_000)?;
    let (_, t) = schur.unpack();
    Some((0..t.nrows()).map(|i| t[(i, i)]).collect())
}
