//! Numerical tolerances shared by every module.

/// Normalization tolerance on the Euclidean (or L²) norm of a state.
pub const EPS_NORM: f64 = 1e-12;

/// Threshold below which a bound, deviation or residual counts as zero.
pub const EPS_ZERO: f64 = 1e-9;

/// Relative scale of the Hermiticity tolerance; multiplied by `‖A‖_∞`.
pub const EPS_HERM_REL: f64 = 1e-10;

/// Relative scale of the Robertson-inequality tolerance.
pub const EPS_ROB_REL: f64 = 1e-9;

/// Boundary-law residual tolerance for closed-form wavefunctions.
pub const EPS_BC_CLOSED: f64 = 1e-8;

/// Boundary-law residual tolerance for sampled wavefunctions.
pub const EPS_BC_GRID: f64 = 1e-5;

/// Quadrature accuracy target for smooth integrands at the default grid size.
pub const EPS_QUAD: f64 = 1e-8;

/// Truncation target for grid differentiation.
pub const EPS_DIFF: f64 = 1e-6;

/// Relative tolerance for PT-model identities.
pub const EPS_PT: f64 = 1e-9;

/// Hermiticity tolerance for a matrix with the given infinity norm.
pub fn eps_herm(norm_inf: f64) -> f64 {
    EPS_HERM_REL * norm_inf
}

/// Robertson tolerance relative to `max(1, product)`.
pub fn eps_rob(product: f64) -> f64 {
    EPS_ROB_REL * product.max(1.0)
}
