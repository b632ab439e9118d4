use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Result, ZeroBoundError};
use crate::observable::{robertson_report, HermitianOperator, StateVector};
use crate::tol::EPS_ZERO;
use crate::{CVector, Complex64};

/// Samples per pair of free real parameters.
const SAMPLES_PER_PARAM_PAIR: usize = 512;
const MAX_SAMPLES: usize = 100_000;

/// A parametric family of (unnormalized) amplitude vectors, expressed as a
/// constraint kind plus ranges so that scenario files can carry it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "constraint", rename_all = "snake_case", deny_unknown_fields)]
pub enum FamilyDescriptor {
    /// Every amplitude real, uniform in `[-range, range]`.
    RealAmplitudes { dim: usize, range: f64 },
    /// `(a, b, …, βa)`: complex `a, b, …` and a real `β` tying the last
    /// amplitude to the first.
    LastProportionalToFirst {
        dim: usize,
        range: f64,
        beta_min: f64,
        beta_max: f64,
    },
    /// Unit-modulus amplitudes with independent phases.
    EqualModulus { dim: usize },
    /// Real and imaginary parts uniform in `[-range, range]`.
    Unconstrained { dim: usize, range: f64 },
    /// `center` plus complex perturbations with parts in `[-radius, radius]`.
    /// Sample 0 is the center itself.
    Neighborhood { center: Vec<[f64; 2]>, radius: f64 },
}

impl FamilyDescriptor {
    pub fn dim(&self) -> usize {
        match self {
            Self::RealAmplitudes { dim, .. }
            | Self::LastProportionalToFirst { dim, .. }
            | Self::EqualModulus { dim }
            | Self::Unconstrained { dim, .. } => *dim,
            Self::Neighborhood { center, .. } => center.len(),
        }
    }

    /// Number of free real parameters.
    pub fn free_parameters(&self) -> usize {
        let n = self.dim();
        match self {
            Self::RealAmplitudes { .. } | Self::EqualModulus { .. } => n,
            Self::LastProportionalToFirst { .. } => 2 * (n - 1) + 1,
            Self::Unconstrained { .. } | Self::Neighborhood { .. } => 2 * n,
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(ZeroBoundError::InvalidFamily(msg.to_string()));
        let n = self.dim();
        if n == 0 {
            return bad("dimension must be positive");
        }
        match self {
            Self::RealAmplitudes { range, .. } | Self::Unconstrained { range, .. } => {
                if !(*range > 0.0) {
                    return bad("range must be positive");
                }
            }
            Self::LastProportionalToFirst {
                range,
                beta_min,
                beta_max,
                ..
            } => {
                if n < 2 {
                    return bad("proportional family needs dim >= 2");
                }
                if !(*range > 0.0) || !(beta_min <= beta_max) {
                    return bad("need range > 0 and beta_min <= beta_max");
                }
            }
            Self::EqualModulus { .. } => {}
            Self::Neighborhood { radius, .. } => {
                if !(*radius >= 0.0) {
                    return bad("radius must be non-negative");
                }
            }
        }
        Ok(())
    }

    fn sample(&self, index: usize, rng: &mut ChaCha8Rng) -> CVector {
        let n = self.dim();
        let c = Complex64::new;
        match self {
            Self::RealAmplitudes { range, .. } => {
                CVector::from_fn(n, |_, _| c(rng.random_range(-range..=*range), 0.0))
            }
            Self::LastProportionalToFirst {
                range,
                beta_min,
                beta_max,
                ..
            } => {
                let mut v = CVector::from_fn(n, |_, _| {
                    c(
                        rng.random_range(-range..=*range),
                        rng.random_range(-range..=*range),
                    )
                });
                let beta = if beta_min == beta_max {
                    *beta_min
                } else {
                    rng.random_range(*beta_min..=*beta_max)
                };
                v[n - 1] = v[0] * beta;
                v
            }
            Self::EqualModulus { .. } => CVector::from_fn(n, |_, _| {
                Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU))
            }),
            Self::Unconstrained { range, .. } => CVector::from_fn(n, |_, _| {
                c(
                    rng.random_range(-range..=*range),
                    rng.random_range(-range..=*range),
                )
            }),
            Self::Neighborhood { center, radius } => CVector::from_fn(n, |i, _| {
                let base = c(center[i][0], center[i][1]);
                if index == 0 || *radius == 0.0 {
                    base
                } else {
                    base + c(
                        rng.random_range(-radius..=*radius),
                        rng.random_range(-radius..=*radius),
                    )
                }
            }),
        }
    }

    /// Draws `count` normalized states deterministically from `seed`.
    /// All-zero draws are redrawn.
    pub fn states(&self, count: usize, seed: u64) -> Result<Vec<StateVector>> {
        self.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::with_capacity(count);
        let mut attempts = 0usize;
        while out.len() < count {
            attempts += 1;
            if attempts > 16 * count + 64 {
                return Err(ZeroBoundError::EmptyFamily);
            }
            let v = self.sample(out.len(), &mut rng);
            match StateVector::normalized(v) {
                Ok(s) => out.push(s),
                Err(_) => continue,
            }
        }
        Ok(out)
    }
}

impl fmt::Display for FamilyDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::RealAmplitudes { dim, range } => {
                write!(f, "real amplitudes, dim {dim}, range ±{range}")
            }
            Self::LastProportionalToFirst {
                dim,
                range,
                beta_min,
                beta_max,
            } => write!(
                f,
                "last = beta * first, dim {dim}, range ±{range}, beta in [{beta_min}, {beta_max}]"
            ),
            Self::EqualModulus { dim } => write!(f, "equal-modulus amplitudes, dim {dim}"),
            Self::Unconstrained { dim, range } => {
                write!(f, "unconstrained complex amplitudes, dim {dim}, range ±{range}")
            }
            Self::Neighborhood { center, radius } => {
                write!(f, "neighborhood of {center:?}, radius {radius}")
            }
        }
    }
}

/// 512 samples per pair of free real parameters, capped at 10⁵.
pub fn default_samples(family: &FamilyDescriptor) -> usize {
    (SAMPLES_PER_PARAM_PAIR * family.free_parameters().div_ceil(2)).min(MAX_SAMPLES)
}

/// Outcome of scanning a family: which samples collapse the bound.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FamilyVerdict {
    pub family_descriptor: String,
    pub bound_zero_on_family: bool,
    pub witness_states: Vec<StateVector>,
    pub counter_states: Vec<StateVector>,
    pub samples: usize,
    pub max_bound: f64,
    pub notes: Vec<String>,
}

/// Evaluates the Robertson bound of `(a, b)` on `samples` seeded draws from
/// `family`. The family is zero-bound iff every draw is a witness
/// (bound ≤ `EPS_ZERO`).
pub fn classify_family(
    family: &FamilyDescriptor,
    a: &HermitianOperator,
    b: &HermitianOperator,
    samples: usize,
    seed: u64,
) -> Result<FamilyVerdict> {
    if samples == 0 {
        return Err(ZeroBoundError::EmptyFamily);
    }
    if family.dim() != a.dim() || family.dim() != b.dim() {
        return Err(crate::observable::ObservableError::DimensionMismatch {
            expected: a.dim(),
            found: family.dim(),
        }
        .into());
    }
    let states = family.states(samples, seed)?;
    let mut witness_states = Vec::new();
    let mut counter_states = Vec::new();
    let mut max_bound = 0.0f64;
    for state in states {
        let report = robertson_report(a, b, &state)?;
        max_bound = max_bound.max(report.bound);
        if report.bound <= EPS_ZERO {
            witness_states.push(state);
        } else {
            counter_states.push(state);
        }
    }
    let mut notes = Vec::new();
    if let FamilyDescriptor::LastProportionalToFirst {
        beta_min, beta_max, ..
    } = family
    {
        if *beta_min <= 0.0 && 0.0 <= *beta_max {
            notes.push(
                "beta = 0 (last amplitude zero) is included; it also gives Im[a*c] = 0"
                    .to_string(),
            );
        }
    }
    Ok(FamilyVerdict {
        family_descriptor: family.to_string(),
        bound_zero_on_family: counter_states.is_empty(),
        witness_states,
        counter_states,
        samples,
        max_bound,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zero_bound::{gellmann_bound_closed_form, GeneratorCatalog};

    fn gm() -> (HermitianOperator, HermitianOperator) {
        let g = GeneratorCatalog::new();
        (g.lambda_3, g.lambda_4)
    }

    #[test]
    fn real_family_is_zero_bound() {
        let (a, b) = gm();
        let fam = FamilyDescriptor::RealAmplitudes { dim: 3, range: 1.0 };
        let v = classify_family(&fam, &a, &b, default_samples(&fam), 7).unwrap();
        assert!(v.bound_zero_on_family);
        assert_eq!(v.witness_states.len(), v.samples);
        assert!(v.max_bound <= EPS_ZERO);
    }

    #[test]
    fn proportional_family_is_zero_bound() {
        let (a, b) = gm();
        let fam = FamilyDescriptor::LastProportionalToFirst {
            dim: 3,
            range: 1.0,
            beta_min: -2.0,
            beta_max: 2.0,
        };
        let v = classify_family(&fam, &a, &b, default_samples(&fam), 11).unwrap();
        assert!(v.bound_zero_on_family);
        assert_eq!(v.notes.len(), 1);
    }

    #[test]
    fn unconstrained_family_has_counter_states() {
        let (a, b) = gm();
        let fam = FamilyDescriptor::Unconstrained { dim: 3, range: 1.0 };
        let v = classify_family(&fam, &a, &b, 256, 3).unwrap();
        assert!(!v.bound_zero_on_family);
        assert!(!v.counter_states.is_empty());
        for s in &v.counter_states {
            let amps = s.amplitudes();
            assert!(gellmann_bound_closed_form(amps[0], amps[1], amps[2]).unwrap() > EPS_ZERO);
        }
    }

    #[test]
    fn neighborhood_starts_at_center() {
        let fam = FamilyDescriptor::Neighborhood {
            center: vec![[1.0, 0.0], [0.0, 0.0], [0.0, 1.0]],
            radius: 0.1,
        };
        let states = fam.states(4, 0).unwrap();
        let first = states[0].amplitudes();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((first[0] - Complex64::new(s, 0.0)).norm() < 1e-15);
        assert!((first[2] - Complex64::new(0.0, s)).norm() < 1e-15);
        assert!(states[1] != states[0]);
    }

    #[test]
    fn sampling_is_deterministic() {
        let fam = FamilyDescriptor::Unconstrained { dim: 3, range: 2.0 };
        assert_eq!(fam.states(10, 5).unwrap(), fam.states(10, 5).unwrap());
        assert_ne!(fam.states(10, 5).unwrap(), fam.states(10, 6).unwrap());
    }

    #[test]
    fn errors() {
        let (a, b) = gm();
        let fam = FamilyDescriptor::RealAmplitudes { dim: 2, range: 1.0 };
        assert!(matches!(
            classify_family(&fam, &a, &b, 10, 0),
            Err(ZeroBoundError::Observable(_))
        ));
        let fam = FamilyDescriptor::RealAmplitudes { dim: 3, range: 1.0 };
        assert_eq!(
            classify_family(&fam, &a, &b, 0, 0).unwrap_err(),
            ZeroBoundError::EmptyFamily
        );
        let zero = FamilyDescriptor::Neighborhood {
            center: vec![[0.0, 0.0]; 3],
            radius: 0.0,
        };
        assert_eq!(
            classify_family(&zero, &a, &b, 3, 0).unwrap_err(),
            ZeroBoundError::EmptyFamily
        );
    }

    #[test]
    fn default_sample_counts() {
        assert_eq!(
            default_samples(&FamilyDescriptor::RealAmplitudes { dim: 3, range: 1.0 }),
            1024
        );
        assert_eq!(
            default_samples(&FamilyDescriptor::Unconstrained { dim: 3, range: 1.0 }),
            1536
        );
        assert_eq!(
            default_samples(&FamilyDescriptor::Unconstrained { dim: 500, range: 1.0 }),
            100_000
        );
    }
}
