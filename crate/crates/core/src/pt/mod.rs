//! Finite-dimensional PT-symmetric models.
//!
//! Time reversal acts as entrywise complex conjugation and parity as a signed
//! permutation `P`. A Hamiltonian is PT-symmetric when `P·conj(H)·P = H`. In the
//! unbroken phase the eigenvectors can be made PT-invariant, the PT product
//! `(ψ, φ)^PT = (P·conj ψ)ᵀ φ` is real on them with signs `±1`, and
//! `C = Σ φ_n φ_nᵀ` turns it into the positive CPT product.
//!
//! The construction of `C` needs the eigenvectors to be PT-orthogonal, which
//! holds when `H` is also complex symmetric (equivalently `P·H†·P = H`).
//! Models without that property are classified but get no `C`.

mod model;
mod parity;
mod random;

use thiserror::Error;

pub use model::{
    build_c, cpt_inner_product, cross_model_verdicts, hermitian_limit_path, is_cpt_observable,
    is_pt_symmetric, non_universality_demo, pt_inner_product, solve_spectrum, two_level_hamiltonian,
    verify_c, CChecks, NonUniversalityDemo, ObservableVerdict, Phase, PtBasis, PtModel,
    PtSymmetryCheck, Spectrum, TwoLevelParams,
};
pub use parity::ParityMatrix;
pub use random::{
    find_non_universality_pairs, random_pt_symmetric, random_unbroken_model, NON_UNIVERSALITY_MARGIN,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PtError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not square")]
    NotSquare,
    #[error("model dimension must be even and positive, got {0}")]
    OddDimension(usize),
    #[error("invalid parity: {0}")]
    InvalidParity(String),
    #[error("Hamiltonian is not PT-symmetric (residual {residual:e})")]
    NotPtSymmetric { residual: f64 },
    #[error("Hamiltonian is not complex symmetric, so its eigenvectors are not PT-orthogonal (residual {residual:e})")]
    NotPtSelfAdjoint { residual: f64 },
    #[error("eigen-solver failed to converge")]
    NumericalFailure,
    #[error("model is in the broken phase")]
    BrokenPhase,
    #[error("degenerate spectrum: {0}")]
    DegenerateSpectrum(String),
    #[error("model has no C operator")]
    MissingC,
    #[error("models share an eigenvector (residual {residual:e})")]
    CommonEigenvectors { residual: f64 },
    #[error("parameter search exhausted after {0} attempts")]
    SearchExhausted(usize),
}

pub type Result<T> = std::result::Result<T, PtError>;
