//! Particle in a box.
//!
//! The momentum operator `−iħ d/dx` on `[a, b]` is self-adjoint only on one of
//! the domains `{φ : φ(b) = e^{iθ} φ(a)}`, `0 ≤ θ < 2π`. This module builds the
//! eigenpairs of each extension, audits whether states (and `x` times states)
//! satisfy a given boundary law, and evaluates uncertainty reports for both the
//! plain position operator and the windowed operator `X_M`.
//!
//! Wavefunctions are either exponential polynomials with exact wall values or
//! uniform grids. Exact wall values matter: every domain verdict is a
//! statement about them.

mod closed_form;
mod extension;
mod modified;
pub mod quadrature;
mod wavefunction;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use closed_form::{poly_exp_integral, ClosedForm, ExpTerm};
pub use extension::{
    apply_momentum, apply_position, canonical_uncertainty_report, commutator_expectation_canonical,
    domain_check, eigenfunction, eigenvalue, CanonicalCommutator, DomainVerdict, MomentumExtension,
    OffendingFactor,
};
pub use modified::{
    dirichlet_ground_state, xm_apply, xm_commutator_expectation, xm_commutator_pairing,
    xm_uncertainty_report,
};
pub use wavefunction::{BoxInterval, BoxVariant, BoxWavefunction, Representation, DEFAULT_GRID_POINTS};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoxError {
    #[error("box length must be positive and finite, got {0}")]
    InvalidLength(f64),
    #[error("theta must lie in [0, 2pi), got {0}")]
    InvalidTheta(f64),
    #[error("hbar must be positive and finite, got {0}")]
    InvalidHbar(f64),
    #[error("grid needs an odd number of at least 5 samples, got {0}")]
    InvalidGrid(usize),
    #[error("wavefunctions live on different intervals")]
    IntervalMismatch,
    #[error("wavefunctions use different grids ({0} vs {1} points)")]
    GridMismatch(usize, usize),
    #[error("function is outside the extension's domain (boundary residual {residual:e})")]
    OutOfDomain { residual: f64 },
    #[error("operation requires the symmetric interval")]
    UnsupportedInterval,
    #[error("wavefunction is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },
    #[error("zero function cannot be normalized")]
    ZeroFunction,
}

pub type Result<T> = std::result::Result<T, BoxError>;

/// Which lower bound a box report carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundFormula {
    /// `½|⟨[P, X]⟩|` with the commutator well defined on the state.
    CanonicalHalfHbar,
    /// `½|⟨[P, X_M]⟩|` from the wall-value formula.
    XmBoundaryFormula,
    /// The commutator expectation does not exist.
    Undefined,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxUncertaintyReport {
    pub delta_x: f64,
    pub delta_p: f64,
    pub product: f64,
    pub commutator_defined: bool,
    pub bound: Option<f64>,
    pub bound_formula: BoundFormula,
    pub notes: Vec<String>,
}

/// `‖g − ⟨f|g⟩ f‖` where `g` is an operator applied to normalized `f`.
fn spread(f: &BoxWavefunction, applied: &BoxWavefunction) -> Result<f64> {
    let mean = f.inner_product(applied)?;
    Ok(applied.add_scaled(-mean, f)?.norm())
}

fn require_normalized(f: &BoxWavefunction) -> Result<()> {
    let norm = f.norm();
    if (norm - 1.0).abs() > crate::tol::EPS_NORM {
        return Err(BoxError::NotNormalized { norm });
    }
    Ok(())
}
