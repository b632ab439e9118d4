use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Result, ZeroBoundError};
use crate::observable::{robertson_report, HermitianOperator, ObservableError, StateVector};
use crate::{CVector, Complex64};

/// Quantity minimized over the unit sphere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    /// `ΔA · ΔB`
    Product,
    /// `½|⟨[A, B]⟩|`
    Bound,
    /// `ΔA · ΔB − ½|⟨[A, B]⟩|`
    Gap,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub best_state: StateVector,
    pub best_value: f64,
    pub objective: Objective,
    /// Nelder-Mead iterations summed over every restart and polish pass.
    pub iterations: usize,
    pub seed: u64,
}

/// Objective value on a normalized state.
pub fn evaluate_objective(
    a: &HermitianOperator,
    b: &HermitianOperator,
    objective: Objective,
    state: &StateVector,
) -> Result<f64> {
    let r = robertson_report(a, b, state)?;
    Ok(match objective {
        Objective::Product => r.product,
        Objective::Bound => r.bound,
        Objective::Gap => r.gap,
    })
}

fn state_from_params(x: &[f64]) -> Option<StateVector> {
    let n = x.len() / 2;
    let v = CVector::from_fn(n, |i, _| Complex64::new(x[i], x[n + i]));
    StateVector::normalized(v).ok()
}

/// Multi-start search on the unit sphere.
///
/// Each start optimizes an unconstrained complex vector (real and imaginary
/// parts as `2n` reals) with Nelder-Mead, normalizing inside the objective.
/// The winner of each start is polished by restarting with shrinking simplices.
/// Restarts run in index order and ties keep the lowest index, so the result
/// depends only on `(a, b, objective, seed, restarts)`.
pub fn minimize_objective(
    a: &HermitianOperator,
    b: &HermitianOperator,
    objective: Objective,
    seed: u64,
    restarts: usize,
) -> Result<SearchResult> {
    if a.dim() != b.dim() {
        return Err(ObservableError::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        }
        .into());
    }
    if restarts == 0 {
        return Err(ZeroBoundError::NoRestarts);
    }
    let n = a.dim();
    let f = |x: &[f64]| -> f64 {
        match state_from_params(x) {
            Some(s) => evaluate_objective(a, b, objective, &s).unwrap_or(f64::MAX),
            None => f64::MAX,
        }
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(Vec<f64>, f64)> = None;
    let mut iterations = 0usize;
    for _ in 0..restarts {
        let mut x: Vec<f64> = (0..2 * n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let mut fx = f(&x);
        for step in [0.5, 0.1, 0.02, 4e-3, 1e-3, 1e-4] {
            let (xn, fxn, it) = nelder_mead(&f, &x, step, 400 * 2 * n);
            iterations += it;
            if fxn <= fx {
                x = xn;
                fx = fxn;
            }
        }
        if best.as_ref().is_none_or(|(_, fb)| fx < *fb) {
            best = Some((x, fx));
        }
    }
    let (x, _) = best.expect("restarts >= 1");
    let best_state = state_from_params(&x).ok_or(ObservableError::ZeroVector)?;
    let best_value = evaluate_objective(a, b, objective, &best_state)?;
    Ok(SearchResult {
        best_state,
        best_value,
        objective,
        iterations,
        seed,
    })
}

/// Plain Nelder-Mead with standard coefficients. Returns the best vertex,
/// its value and the number of iterations used.
fn nelder_mead<F: Fn(&[f64]) -> f64>(
    f: &F,
    x0: &[f64],
    step: f64,
    max_iter: usize,
) -> (Vec<f64>, f64, usize) {
    const ALPHA: f64 = 1.0;
    const GAMMA: f64 = 2.0;
    const RHO: f64 = 0.5;
    const SIGMA: f64 = 0.5;

    let dim = x0.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
    simplex.push((x0.to_vec(), f(x0)));
    for i in 0..dim {
        let mut x = x0.to_vec();
        x[i] += step;
        let fx = f(&x);
        simplex.push((x, fx));
    }

    let mut iter = 0;
    while iter < max_iter {
        iter += 1;
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let f_best = simplex[0].1;
        let f_worst = simplex[dim].1;
        if (f_worst - f_best).abs() <= 1e-18 * (1.0 + f_best.abs()) {
            let size = simplex[1..]
                .iter()
                .flat_map(|(x, _)| x.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()))
                .fold(0.0, f64::max);
            if size < 1e-13 {
                break;
            }
        }

        let mut centroid = vec![0.0; dim];
        for (x, _) in &simplex[..dim] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / dim as f64;
            }
        }
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[dim].0)
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };

        let xr = along(ALPHA);
        let fr = f(&xr);
        if fr < simplex[0].1 {
            let xe = along(GAMMA);
            let fe = f(&xe);
            simplex[dim] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < simplex[dim - 1].1 {
            simplex[dim] = (xr, fr);
            continue;
        }
        let (xc, fc) = if fr < simplex[dim].1 {
            let xc = along(RHO * ALPHA);
            let fc = f(&xc);
            (xc, fc)
        } else {
            let xc = along(-RHO);
            let fc = f(&xc);
            (xc, fc)
        };
        if fc < fr.min(simplex[dim].1) {
            simplex[dim] = (xc, fc);
            continue;
        }
        let x_best = simplex[0].0.clone();
        for (x, fx) in simplex.iter_mut().skip(1) {
            for (xi, bi) in x.iter_mut().zip(&x_best) {
                *xi = bi + SIGMA * (*xi - bi);
            }
            *fx = f(x);
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, fx) = simplex.swap_remove(0);
    (x, fx, iter)
}
