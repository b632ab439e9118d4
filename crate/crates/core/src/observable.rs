//! Finite-dimensional observables and the Robertson relation.
//!
//! An observable is a validated Hermitian matrix, a state is a unit vector,
//! and [`robertson_report`] evaluates both sides of
//! `ΔA · ΔB ≥ ½ |⟨[A, B]⟩|` together with the degeneracy flags.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{self, norm_inf};
use crate::tol::{self, EPS_NORM, EPS_ZERO};
use crate::{CMatrix, CVector, Complex64};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ObservableError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("state is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },
    #[error("operator is not Hermitian (residual {residual:e})")]
    NotHermitian { residual: f64 },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension must be at least 1")]
    EmptyDimension,
    #[error("zero vector cannot be normalized")]
    ZeroVector,
}

pub type Result<T> = std::result::Result<T, ObservableError>;

/// A square complex matrix checked to equal its conjugate transpose.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HermitianOperator {
    entries: CMatrix,
}

impl HermitianOperator {
    /// Validates Hermiticity within `1e-10 · ‖A‖_∞`. Violating matrices are
    /// rejected, never symmetrized.
    pub fn new(entries: CMatrix) -> Result<Self> {
        let (rows, cols) = entries.shape();
        if rows != cols {
            return Err(ObservableError::NotSquare { rows, cols });
        }
        if rows == 0 {
            return Err(ObservableError::EmptyDimension);
        }
        let residual = linalg::max_abs(&(&entries - entries.adjoint()));
        if residual > tol::eps_herm(norm_inf(&entries)) {
            return Err(ObservableError::NotHermitian { residual });
        }
        Ok(Self { entries })
    }

    /// Real symmetric matrix from row-major entries.
    pub fn from_real(dim: usize, entries: &[f64]) -> Result<Self> {
        Self::new(CMatrix::from_fn(dim, dim, |i, j| {
            Complex64::new(entries[i * dim + j], 0.0)
        }))
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Self::new(CMatrix::identity(dim, dim))
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.entries
    }

    pub fn norm_inf(&self) -> f64 {
        norm_inf(&self.entries)
    }

    /// `c · A` for real `c`.
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            entries: self.entries.map(|z| z * c),
        }
    }

    /// `A + c · I` for real `c`.
    pub fn shifted(&self, c: f64) -> Self {
        let n = self.dim();
        Self {
            entries: &self.entries + CMatrix::identity(n, n) * Complex64::new(c, 0.0),
        }
    }

    fn check_dim(&self, dim: usize) -> Result<()> {
        if self.dim() != dim {
            return Err(ObservableError::DimensionMismatch {
                expected: self.dim(),
                found: dim,
            });
        }
        Ok(())
    }
}

/// A unit vector of complex amplitudes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateVector {
    amplitudes: CVector,
}

impl StateVector {
    /// Accepts amplitudes whose Euclidean norm is 1 within `1e-12`.
    pub fn new(amplitudes: CVector) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(ObservableError::EmptyDimension);
        }
        let norm = linalg::vec_norm(&amplitudes);
        if (norm - 1.0).abs() > EPS_NORM {
            return Err(ObservableError::NotNormalized { norm });
        }
        Ok(Self { amplitudes })
    }

    /// Divides by the Euclidean norm.
    pub fn normalized(amplitudes: CVector) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(ObservableError::EmptyDimension);
        }
        let norm = linalg::vec_norm(&amplitudes);
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(ObservableError::ZeroVector);
        }
        Ok(Self {
            amplitudes: amplitudes.unscale(norm),
        })
    }

    /// Normalizes the given amplitudes.
    pub fn from_slice(amplitudes: &[Complex64]) -> Result<Self> {
        Self::normalized(CVector::from_column_slice(amplitudes))
    }

    /// Normalizes real amplitudes.
    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::normalized(CVector::from_iterator(
            amplitudes.len(),
            amplitudes.iter().map(|&x| Complex64::new(x, 0.0)),
        ))
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    /// Multiplies by a global phase `e^{iγ}`.
    pub fn with_phase(&self, gamma: f64) -> Self {
        Self {
            amplitudes: self.amplitudes.map(|z| z * Complex64::from_polar(1.0, gamma)),
        }
    }
}

/// Both sides of the Robertson relation for one `(A, B, φ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UncertaintyReport {
    pub delta_a: f64,
    pub delta_b: f64,
    pub product: f64,
    /// `½ |⟨[A, B]⟩_φ|`.
    pub bound: f64,
    /// `product − bound`.
    pub gap: f64,
    pub bound_is_zero: bool,
    pub a_eigenstate: bool,
    pub b_eigenstate: bool,
    /// `ΔA² + ΔB²`; reported without any claimed lower bound.
    pub sum_of_squares: f64,
}

/// `⟨φ|A|φ⟩`. The imaginary residue of the raw inner product must stay within
/// the Hermiticity tolerance.
pub fn expectation(a: &HermitianOperator, phi: &StateVector) -> Result<f64> {
    a.check_dim(phi.dim())?;
    check_normalized(phi)?;
    let raw = linalg::dot(phi.amplitudes(), &(a.matrix() * phi.amplitudes()));
    if raw.im.abs() > tol::eps_herm(a.norm_inf()) {
        return Err(ObservableError::NotHermitian {
            residual: raw.im.abs(),
        });
    }
    Ok(raw.re)
}

/// `Δ_φA = ‖(A − ⟨A⟩I)φ‖`.
pub fn std_dev(a: &HermitianOperator, phi: &StateVector) -> Result<f64> {
    Ok(linalg::vec_norm(&deviation_vector(a, phi)?))
}

/// `(A − ⟨A⟩I)φ`.
pub fn deviation_vector(a: &HermitianOperator, phi: &StateVector) -> Result<CVector> {
    let mean = expectation(a, phi)?;
    let amps = phi.amplitudes();
    Ok(a.matrix() * amps - amps * Complex64::new(mean, 0.0))
}

/// The radicand `⟨A²⟩ − ⟨A⟩²`, kept only as a cross-check of [`std_dev`].
/// A radicand below `−ε_rob` can only come from a non-Hermitian input.
pub fn variance_radicand(a: &HermitianOperator, phi: &StateVector) -> Result<f64> {
    let mean = expectation(a, phi)?;
    let a_phi = a.matrix() * phi.amplitudes();
    let second = linalg::vec_norm(&a_phi).powi(2);
    let radicand = second - mean * mean;
    if radicand < -tol::eps_rob(second) {
        return Err(ObservableError::NotHermitian {
            residual: -radicand,
        });
    }
    Ok(radicand)
}

/// `AB − BA`.
pub fn commutator(a: &HermitianOperator, b: &HermitianOperator) -> Result<CMatrix> {
    a.check_dim(b.dim())?;
    Ok(a.matrix() * b.matrix() - b.matrix() * a.matrix())
}

pub fn robertson_report(
    a: &HermitianOperator,
    b: &HermitianOperator,
    phi: &StateVector,
) -> Result<UncertaintyReport> {
    let comm = commutator(a, b)?;
    let delta_a = std_dev(a, phi)?;
    let delta_b = std_dev(b, phi)?;
    let amps = phi.amplitudes();
    let bound = 0.5 * linalg::dot(amps, &(&comm * amps)).norm();
    let product = delta_a * delta_b;
    Ok(UncertaintyReport {
        delta_a,
        delta_b,
        product,
        bound,
        gap: product - bound,
        bound_is_zero: bound <= EPS_ZERO,
        a_eigenstate: delta_a <= EPS_ZERO,
        b_eigenstate: delta_b <= EPS_ZERO,
        sum_of_squares: delta_a * delta_a + delta_b * delta_b,
    })
}

fn check_normalized(phi: &StateVector) -> Result<()> {
    let norm = linalg::vec_norm(phi.amplitudes());
    if (norm - 1.0).abs() > EPS_NORM {
        return Err(ObservableError::NotNormalized { norm });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zero_bound::GeneratorCatalog;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        assert!(matches!(
            HermitianOperator::new(m),
            Err(ObservableError::NotHermitian { .. })
        ));
        let rect = CMatrix::zeros(2, 3);
        assert!(matches!(
            HermitianOperator::new(rect),
            Err(ObservableError::NotSquare { .. })
        ));
        assert!(matches!(
            HermitianOperator::new(CMatrix::zeros(0, 0)),
            Err(ObservableError::EmptyDimension)
        ));
    }

    #[test]
    fn state_validation() {
        let v = CVector::from_column_slice(&[c(1.0, 0.0), c(1.0, 0.0)]);
        assert!(matches!(
            StateVector::new(v.clone()),
            Err(ObservableError::NotNormalized { .. })
        ));
        assert!(StateVector::normalized(v).is_ok());
        assert!(matches!(
            StateVector::from_real(&[0.0, 0.0]),
            Err(ObservableError::ZeroVector)
        ));
    }

    #[test]
    fn expectation_examples() {
        let g = GeneratorCatalog::new();
        let up = StateVector::from_real(&[1.0, 0.0]).unwrap();
        let plus = StateVector::from_real(&[1.0, 1.0]).unwrap();
        let psi1 = StateVector::from_real(&[1.0, 1.0, 1.0]).unwrap();
        assert_abs_diff_eq!(expectation(&g.sigma_z, &up).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(expectation(&g.sigma_z, &plus).unwrap(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(expectation(&g.lambda_5, &psi1).unwrap(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn expectation_dimension_mismatch() {
        let g = GeneratorCatalog::new();
        let psi1 = StateVector::from_real(&[1.0, 1.0, 1.0]).unwrap();
        assert_eq!(
            expectation(&g.sigma_z, &psi1),
            Err(ObservableError::DimensionMismatch {
                expected: 2,
                found: 3
            })
        );
        assert!(commutator(&g.sigma_x, &g.lambda_3).is_err());
    }

    #[test]
    fn std_dev_examples() {
        let g = GeneratorCatalog::new();
        let plus = StateVector::from_real(&[1.0, 1.0]).unwrap();
        let up = StateVector::from_real(&[1.0, 0.0]).unwrap();
        assert_abs_diff_eq!(std_dev(&g.sigma_x, &plus).unwrap(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(std_dev(&g.sigma_y, &plus).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(std_dev(&g.sigma_z, &up).unwrap(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(variance_radicand(&g.sigma_y, &plus).unwrap(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn commutator_examples() {
        let g = GeneratorCatalog::new();
        let xy = commutator(&g.sigma_x, &g.sigma_y).unwrap();
        let expected = g.sigma_z.matrix() * c(0.0, 2.0);
        assert!(linalg::max_abs(&(xy - expected)) < 1e-15);

        let l34 = commutator(&g.lambda_3, &g.lambda_4).unwrap();
        let expected = g.lambda_5.matrix() * c(0.0, -1.0);
        assert!(linalg::max_abs(&(l34 - expected)) < 1e-15);

        let aa = commutator(&g.lambda_4, &g.lambda_4).unwrap();
        assert_eq!(linalg::max_abs(&aa), 0.0);
    }

    #[test]
    fn robertson_examples() {
        let g = GeneratorCatalog::new();
        let plus = StateVector::from_real(&[1.0, 1.0]).unwrap();
        let r = robertson_report(&g.sigma_x, &g.sigma_y, &plus).unwrap();
        assert_abs_diff_eq!(r.product, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r.bound, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r.gap, 0.0, epsilon = 1e-15);
        assert!(r.bound_is_zero && r.a_eigenstate && !r.b_eigenstate);
        assert_abs_diff_eq!(r.sum_of_squares, 1.0, epsilon = 1e-15);

        let psi1 = StateVector::from_real(&[1.0, 1.0, 1.0]).unwrap();
        let r = robertson_report(&g.lambda_3, &g.lambda_4, &psi1).unwrap();
        assert!(r.bound_is_zero);
        assert_abs_diff_eq!(r.bound, 0.0, epsilon = 1e-15);

        // ⟨σ_z⟩ = 1 and Δσ_x = Δσ_y = 1 on the basis state.
        let up = StateVector::from_real(&[1.0, 0.0]).unwrap();
        let r = robertson_report(&g.sigma_x, &g.sigma_y, &up).unwrap();
        assert_abs_diff_eq!(r.bound, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r.product, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r.gap, 0.0, epsilon = 1e-15);
        assert!(!r.bound_is_zero);
    }
}
