//! Computable uncertainty relations.
//!
//! The crate is split along the objects it reasons about:
//!
//! * [`observable`]: finite-dimensional observables, standard deviations and
//!   the Robertson bound as a report.
//! * [`zero_bound`]: the Pauli and Gell-Mann counterexamples, parametric state
//!   families on which the bound collapses, and a sphere search for such states.
//! * [`boxlab`]: the particle in a box, its self-adjoint momentum extensions,
//!   domain auditing and the windowed position operator.
//! * [`pt`]: finite-dimensional PT-symmetric models, the C operator and the
//!   CPT observable condition.

pub mod boxlab;
pub mod linalg;
pub mod observable;
pub mod pt;
pub mod tol;
pub mod zero_bound;

pub use num_complex::Complex64;

/// Dense complex matrix used throughout the crate.
pub type CMatrix = nalgebra::DMatrix<Complex64>;
/// Dense complex column vector.
pub type CVector = nalgebra::DVector<Complex64>;
