//! Closed forms against the generic bound, family witnesses, and the sphere
//! search against a brute-force grid.

use std::f64::consts::{FRAC_PI_2, TAU};

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use robertson_core::observable::{robertson_report, HermitianOperator, StateVector};
use robertson_core::zero_bound::{
    classify_family, gellmann_bound_closed_form, minimize_objective, pauli_bound_closed_form,
    FamilyDescriptor, GeneratorCatalog, Objective,
};
use robertson_core::{CMatrix, CVector, Complex64};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn amplitudes(n: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), n)
        .prop_filter("nonzero", |v| v.iter().any(|(x, y)| x.abs() + y.abs() > 1e-3))
        .prop_map(|v| v.into_iter().map(|(x, y)| c(x, y)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn pauli_closed_form_matches_generic(v in amplitudes(2)) {
        let g = GeneratorCatalog::new();
        let phi = StateVector::normalized(CVector::from_vec(v.clone())).unwrap();
        let generic = robertson_report(&g.sigma_x, &g.sigma_y, &phi).unwrap().bound;
        let closed = pauli_bound_closed_form(v[0], v[1]).unwrap();
        prop_assert!((generic - closed).abs() <= 1e-9);
    }

    #[test]
    fn gellmann_closed_form_matches_generic(v in amplitudes(3)) {
        let g = GeneratorCatalog::new();
        let psi = StateVector::normalized(CVector::from_vec(v.clone())).unwrap();
        let generic = robertson_report(&g.lambda_3, &g.lambda_4, &psi).unwrap().bound;
        let closed = gellmann_bound_closed_form(v[0], v[1], v[2]).unwrap();
        prop_assert!((generic - closed).abs() <= 1e-9);
    }
}

proptest! {
    #[test]
    fn phase_does_not_change_verdicts(v in amplitudes(3), gamma in 0.0f64..TAU) {
        let g = GeneratorCatalog::new();
        let psi = StateVector::normalized(CVector::from_vec(v)).unwrap();
        let r1 = robertson_report(&g.lambda_3, &g.lambda_4, &psi).unwrap();
        let r2 = robertson_report(&g.lambda_3, &g.lambda_4, &psi.with_phase(gamma)).unwrap();
        prop_assert!((r1.bound - r2.bound).abs() <= 1e-9);
        prop_assert!((r1.product - r2.product).abs() <= 1e-9);
        prop_assert_eq!(r1.bound_is_zero, r2.bound_is_zero);
    }
}

#[test]
fn family_witnesses_reevaluate_to_zero() {
    let g = GeneratorCatalog::new();
    let families = [
        FamilyDescriptor::RealAmplitudes { dim: 3, range: 2.0 },
        FamilyDescriptor::LastProportionalToFirst {
            dim: 3,
            range: 1.0,
            beta_min: -3.0,
            beta_max: 3.0,
        },
        FamilyDescriptor::Unconstrained { dim: 3, range: 1.0 },
    ];
    for fam in &families {
        let v = classify_family(fam, &g.lambda_3, &g.lambda_4, 500, 3).unwrap();
        for w in &v.witness_states {
            let r = robertson_report(&g.lambda_3, &g.lambda_4, w).unwrap();
            assert!(r.bound <= 1e-9);
        }
        for s in &v.counter_states {
            let r = robertson_report(&g.lambda_3, &g.lambda_4, s).unwrap();
            assert!(r.bound > 1e-9);
        }
    }
}

/// Independent Robertson evaluation on plain arrays.
struct ArrayPair {
    n: usize,
    a: Vec<Complex64>,
    b: Vec<Complex64>,
}

impl ArrayPair {
    fn from_ops(a: &HermitianOperator, b: &HermitianOperator) -> Self {
        let n = a.dim();
        let flat = |m: &CMatrix| (0..n * n).map(|k| m[(k / n, k % n)]).collect();
        Self {
            n,
            a: flat(a.matrix()),
            b: flat(b.matrix()),
        }
    }

    fn apply(&self, m: &[Complex64], v: &[Complex64]) -> Vec<Complex64> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| m[i * self.n + j] * v[j]).sum())
            .collect()
    }

    fn objectives(&self, v: &[Complex64]) -> [f64; 3] {
        let av = self.apply(&self.a, v);
        let bv = self.apply(&self.b, v);
        let ip = |x: &[Complex64], y: &[Complex64]| -> Complex64 {
            x.iter().zip(y).map(|(p, q)| p.conj() * q).sum()
        };
        let ma = ip(v, &av).re;
        let mb = ip(v, &bv).re;
        let dev = |w: &[Complex64], m: f64| -> f64 {
            w.iter()
                .zip(v)
                .map(|(x, y)| (x - y * m).norm_sqr())
                .sum::<f64>()
                .sqrt()
        };
        let product = dev(&av, ma) * dev(&bv, mb);
        let bound = 0.5 * (ip(&av, &bv) - ip(&bv, &av)).norm();
        [product, bound, product - bound]
    }

    /// Minimum of each objective over a grid on the sphere modulo global phase.
    fn grid_minimum(&self, steps: usize) -> [f64; 3] {
        let mut best = [f64::INFINITY; 3];
        let mut visit = |v: &[Complex64]| {
            let o = self.objectives(v);
            for k in 0..3 {
                best[k] = best[k].min(o[k]);
            }
        };
        let angle = |i: usize| FRAC_PI_2 * i as f64 / (steps - 1) as f64;
        let phase = |i: usize| TAU * i as f64 / steps as f64;
        match self.n {
            2 => {
                for i in 0..steps {
                    for j in 0..steps {
                        let t = angle(i);
                        visit(&[c(t.cos(), 0.0), Complex64::from_polar(t.sin(), phase(j))]);
                    }
                }
            }
            3 => {
                for i in 0..steps {
                    for j in 0..steps {
                        for k in 0..steps {
                            for l in 0..steps {
                                let (s, t) = (angle(i), angle(j));
                                visit(&[
                                    c(s.cos(), 0.0),
                                    Complex64::from_polar(s.sin() * t.cos(), phase(k)),
                                    Complex64::from_polar(s.sin() * t.sin(), phase(l)),
                                ]);
                            }
                        }
                    }
                }
            }
            _ => unreachable!(),
        }
        best
    }
}

fn random_hermitian(n: usize, rng: &mut ChaCha8Rng) -> HermitianOperator {
    let raw = CMatrix::from_fn(n, n, |_, _| {
        c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    });
    HermitianOperator::new((&raw + raw.adjoint()) * c(0.5, 0.0)).unwrap()
}

#[test]
fn search_is_no_worse_than_a_dense_grid() {
    let g = GeneratorCatalog::new();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut pairs = vec![
        (g.sigma_x.clone(), g.sigma_y.clone()),
        (g.lambda_3.clone(), g.lambda_4.clone()),
    ];
    for n in [2, 3] {
        pairs.push((random_hermitian(n, &mut rng), random_hermitian(n, &mut rng)));
    }
    let objectives = [Objective::Product, Objective::Bound, Objective::Gap];
    for (a, b) in &pairs {
        let oracle = ArrayPair::from_ops(a, b);
        let steps = if a.dim() == 2 { 401 } else { 25 };
        let grid = oracle.grid_minimum(steps);
        for (k, obj) in objectives.iter().enumerate() {
            let r = minimize_objective(a, b, *obj, 5, 8).unwrap();
            let check = oracle.objectives(r.best_state.amplitudes().as_slice())[k];
            assert!((check - r.best_value).abs() <= 1e-9);
            assert!(
                r.best_value <= grid[k] + 1e-6,
                "dim {} {:?}: search {} grid {}",
                a.dim(),
                obj,
                r.best_value,
                grid[k]
            );
            if *obj == Objective::Gap {
                assert!(r.best_value >= -1e-9);
            }
        }
    }
}

#[test]
fn search_is_deterministic() {
    let g = GeneratorCatalog::new();
    let r1 = minimize_objective(&g.lambda_3, &g.lambda_4, Objective::Gap, 99, 3).unwrap();
    let r2 = minimize_objective(&g.lambda_3, &g.lambda_4, Objective::Gap, 99, 3).unwrap();
    assert_eq!(r1, r2);
}
