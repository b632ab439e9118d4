//! Seeded generators of PT-symmetric models.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::model::{cross_model_verdicts, NonUniversalityDemo, Phase, PtModel};
use super::{ParityMatrix, PtError, Result};
use crate::linalg::{conj, norm_inf};
use crate::{CMatrix, Complex64};

/// Smallest violation under the second model accepted as a demonstration.
pub const NON_UNIVERSALITY_MARGIN: f64 = 1e-3;

const MAX_ATTEMPTS: usize = 10_000;

/// Unit eigenvectors must keep at least this PT norm, keeping generated models
/// away from exceptional points where C is ill-conditioned.
const MIN_PT_NORM: f64 = 0.1;

/// Relative eigenvalue gap required of generated models.
const MIN_REL_GAP: f64 = 1e-2;

fn random_real_symmetric(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let x = rng.random_range(-1.0..1.0);
            m[(i, j)] = x;
            m[(j, i)] = x;
        }
    }
    m
}

fn complexify(m: &DMatrix<f64>) -> CMatrix {
    m.map(|x| Complex64::new(x, 0.0))
}

/// A complex symmetric PT-symmetric matrix under the exchange parity,
/// `(G + P·conj(G)·P)/2` for random complex symmetric `G`. Its phase is
/// whatever the draw gives.
pub fn random_pt_symmetric(dim: usize, seed: u64) -> CMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let re = complexify(&random_real_symmetric(dim, &mut rng));
    let im = complexify(&random_real_symmetric(dim, &mut rng));
    let g = re + im * Complex64::new(0.0, 1.0);
    let p = ParityMatrix::exchange(dim);
    (&g + p.conjugate(&conj(&g))) * Complex64::new(0.5, 0.0)
}

/// An unbroken, well-conditioned model `H = A + i t B` under the exchange
/// parity, with `A` real symmetric commuting with `P` and `B` real symmetric
/// anticommuting with it. Draws are rejected until the model is unbroken, has
/// a C operator and stays away from exceptional points.
pub fn random_unbroken_model(dim: usize, seed: u64) -> Result<PtModel> {
    if dim == 0 || dim % 2 == 1 {
        return Err(PtError::OddDimension(dim));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = ParityMatrix::exchange(dim);
    for _ in 0..MAX_ATTEMPTS {
        let r = complexify(&random_real_symmetric(dim, &mut rng));
        let s = complexify(&random_real_symmetric(dim, &mut rng));
        let half = Complex64::new(0.5, 0.0);
        let a = (&r + p.conjugate(&r)) * half;
        let b = (&s - p.conjugate(&s)) * half;
        let t: f64 = rng.random_range(0.05..1.0);
        let h = a + b * Complex64::new(0.0, t);
        let model = PtModel::new(format!("random_unbroken(dim={dim}, seed={seed})"), h, p.clone())?;
        if model.phase() != Phase::Unbroken || model.c().is_none() {
            continue;
        }
        let Some(basis) = model.basis() else { continue };
        let scale = norm_inf(model.hamiltonian());
        let min_pt_norm = basis.pt_norms.iter().copied().fold(f64::INFINITY, f64::min);
        let c_distance = norm_inf(&(model.c().expect("checked") - p.matrix()));
        if min_pt_norm >= MIN_PT_NORM && basis.min_gap >= MIN_REL_GAP * scale && c_distance > 1e-3 {
            return Ok(model);
        }
    }
    Err(PtError::SearchExhausted(MAX_ATTEMPTS))
}

/// Seeded search for model pairs where `H1` satisfies the CPT observable
/// condition under its own model and violates it by at least
/// [`NON_UNIVERSALITY_MARGIN`] under the other.
pub fn find_non_universality_pairs(
    dim: usize,
    count: usize,
    seed: u64,
) -> Result<Vec<(PtModel, PtModel, NonUniversalityDemo)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut found = Vec::with_capacity(count);
    let mut attempts = 0;
    while found.len() < count {
        attempts += 1;
        if attempts > MAX_ATTEMPTS {
            return Err(PtError::SearchExhausted(MAX_ATTEMPTS));
        }
        let m1 = random_unbroken_model(dim, rng.random())?;
        let m2 = random_unbroken_model(dim, rng.random())?;
        let demo = match cross_model_verdicts(m1.hamiltonian(), "H1", &m1, &m2) {
            Ok(d) => d,
            Err(PtError::CommonEigenvectors { .. }) => continue,
            Err(e) => return Err(e),
        };
        if demo.under_model_1.satisfies_condition
            && demo.under_model_2.residual >= NON_UNIVERSALITY_MARGIN
        {
            found.push((m1, m2, demo));
        }
    }
    Ok(found)
}
