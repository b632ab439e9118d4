//! States on which the Robertson bound collapses to zero.
//!
//! [`GeneratorCatalog`] holds the Pauli matrices and the three Gell-Mann
//! matrices `λ_3, λ_4, λ_5`. The closed-form bounds below are exact
//! shortcuts for the two catalog pairs; [`classify_family`] and
//! [`minimize_objective`] work for any pair of observables.

mod catalog;
mod family;
mod search;

use thiserror::Error;

use crate::observable::ObservableError;
use crate::Complex64;

pub use catalog::GeneratorCatalog;
pub use family::{classify_family, default_samples, FamilyDescriptor, FamilyVerdict};
pub use search::{evaluate_objective, minimize_objective, Objective, SearchResult};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ZeroBoundError {
    #[error("all amplitudes are zero")]
    ZeroVector,
    #[error("family produced no samples")]
    EmptyFamily,
    #[error("invalid family: {0}")]
    InvalidFamily(String),
    #[error("at least one restart is required")]
    NoRestarts,
    #[error(transparent)]
    Observable(#[from] ObservableError),
}

pub type Result<T> = std::result::Result<T, ZeroBoundError>;

/// Robertson bound of `(σ_x, σ_y)` on `N(a, b)`: `½|⟨2iσ_z⟩| = N²·||a|² − |b|²|`.
pub fn pauli_bound_closed_form(a: Complex64, b: Complex64) -> Result<f64> {
    let norm_sqr = a.norm_sqr() + b.norm_sqr();
    if norm_sqr == 0.0 {
        return Err(ZeroBoundError::ZeroVector);
    }
    Ok((a.norm_sqr() - b.norm_sqr()).abs() / norm_sqr)
}

/// Robertson bound of `(λ_3, λ_4)` on `N(a, b, c)`: `½|⟨λ_5⟩| = N²·|Im[a*c]|`.
///
/// Vanishes exactly when `a*c` is real, which covers real amplitudes and
/// `c = βa` for real `β`.
pub fn gellmann_bound_closed_form(a: Complex64, b: Complex64, c: Complex64) -> Result<f64> {
    let norm_sqr = a.norm_sqr() + b.norm_sqr() + c.norm_sqr();
    if norm_sqr == 0.0 {
        return Err(ZeroBoundError::ZeroVector);
    }
    Ok((a.conj() * c).im.abs() / norm_sqr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::observable::{robertson_report, StateVector};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Brute-force `½|ψ†(λ_3λ_4 − λ_4λ_3)ψ|` with plain arrays; kept apart from
    /// the nalgebra path used by the library.
    fn gellmann_oracle(v: [Complex64; 3]) -> f64 {
        let z = c(0.0, 0.0);
        let one = c(1.0, 0.0);
        let l3 = [[one, z, z], [z, -one, z], [z, z, z]];
        let l4 = [[z, z, one], [z, z, z], [one, z, z]];
        let mut comm = [[z; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    comm[i][j] += l3[i][k] * l4[k][j] - l4[i][k] * l3[k][j];
                }
            }
        }
        let n2: f64 = v.iter().map(|x| x.norm_sqr()).sum();
        let mut acc = z;
        for i in 0..3 {
            for j in 0..3 {
                acc += v[i].conj() * comm[i][j] * v[j];
            }
        }
        0.5 * acc.norm() / n2
    }

    #[test]
    fn pauli_examples() {
        assert_eq!(pauli_bound_closed_form(c(1.0, 0.0), c(1.0, 0.0)).unwrap(), 0.0);
        assert_eq!(pauli_bound_closed_form(c(1.0, 0.0), c(0.0, 0.0)).unwrap(), 1.0);
        let v = pauli_bound_closed_form(c(2.0, 0.0), c(1.0, 0.0)).unwrap();
        assert!((v - 0.6).abs() < 1e-15);
        let g = GeneratorCatalog::new();
        let phi = StateVector::from_real(&[2.0, 1.0]).unwrap();
        let r = robertson_report(&g.sigma_x, &g.sigma_y, &phi).unwrap();
        assert!((r.bound - 0.6).abs() < 1e-15);
        assert_eq!(
            pauli_bound_closed_form(c(0.0, 0.0), c(0.0, 0.0)),
            Err(ZeroBoundError::ZeroVector)
        );
    }

    #[test]
    fn gellmann_examples() {
        let one = c(1.0, 0.0);
        assert_eq!(gellmann_bound_closed_form(one, one, one).unwrap(), 0.0);
        assert_eq!(
            gellmann_bound_closed_form(c(0.3, 0.0), c(-2.0, 0.0), c(0.7, 0.0)).unwrap(),
            0.0
        );
        // Oracle value for (1, 0, i), frozen from gellmann_oracle: 0.5.
        let oracle = gellmann_oracle([one, c(0.0, 0.0), c(0.0, 1.0)]);
        assert!((oracle - 0.5).abs() < 1e-15);
        let v = gellmann_bound_closed_form(one, c(0.0, 0.0), c(0.0, 1.0)).unwrap();
        assert!((v - 0.5).abs() < 1e-15);
        assert!(gellmann_bound_closed_form(c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)).is_err());
    }

    #[test]
    fn gellmann_closed_form_matches_oracle() {
        let samples = [
            [c(0.3, -1.2), c(0.5, 0.1), c(-0.7, 0.4)],
            [c(1.0, 1.0), c(0.0, 0.0), c(2.0, -1.0)],
            [c(0.0, 0.2), c(3.0, 0.0), c(0.1, 0.1)],
        ];
        for v in samples {
            let closed = gellmann_bound_closed_form(v[0], v[1], v[2]).unwrap();
            assert!((closed - gellmann_oracle(v)).abs() < 1e-14);
        }
    }
}
