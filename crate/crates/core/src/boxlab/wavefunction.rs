use serde::{Deserialize, Serialize};

use super::closed_form::ClosedForm;
use super::quadrature;
use super::{BoxError, Result};
use crate::tol::EPS_NORM;
use crate::Complex64;

/// Default grid size, endpoints included.
pub const DEFAULT_GRID_POINTS: usize = 2049;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoxVariant {
    /// `[0, l]`
    Standard,
    /// `[−l/2, l/2]`
    Symmetric,
}

/// The interval `[a, b]` the particle is confined to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "IntervalSpec", into = "IntervalSpec")]
pub struct BoxInterval {
    a: f64,
    b: f64,
    variant: BoxVariant,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct IntervalSpec {
    variant: BoxVariant,
    length: f64,
}

impl TryFrom<IntervalSpec> for BoxInterval {
    type Error = BoxError;
    fn try_from(s: IntervalSpec) -> Result<Self> {
        Self::new(s.variant, s.length)
    }
}

impl From<BoxInterval> for IntervalSpec {
    fn from(i: BoxInterval) -> Self {
        IntervalSpec {
            variant: i.variant,
            length: i.length(),
        }
    }
}

impl BoxInterval {
    pub fn new(variant: BoxVariant, length: f64) -> Result<Self> {
        if !(length > 0.0) || !length.is_finite() {
            return Err(BoxError::InvalidLength(length));
        }
        Ok(match variant {
            BoxVariant::Standard => Self {
                a: 0.0,
                b: length,
                variant,
            },
            BoxVariant::Symmetric => Self {
                a: -0.5 * length,
                b: 0.5 * length,
                variant,
            },
        })
    }

    pub fn standard(length: f64) -> Result<Self> {
        Self::new(BoxVariant::Standard, length)
    }

    pub fn symmetric(length: f64) -> Result<Self> {
        Self::new(BoxVariant::Symmetric, length)
    }

    pub fn left(&self) -> f64 {
        self.a
    }

    pub fn right(&self) -> f64 {
        self.b
    }

    pub fn variant(&self) -> BoxVariant {
        self.variant
    }

    pub fn length(&self) -> f64 {
        self.b - self.a
    }

    /// Uniform nodes including both endpoints.
    pub fn nodes(&self, points: usize) -> Vec<f64> {
        let h = self.spacing(points);
        (0..points)
            .map(|i| if i + 1 == points { self.b } else { self.a + i as f64 * h })
            .collect()
    }

    pub fn spacing(&self, points: usize) -> f64 {
        self.length() / (points - 1) as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Representation {
    ClosedForm(ClosedForm),
    /// Samples on the uniform grid of the interval, endpoints included.
    Grid { samples: Vec<Complex64> },
}

/// A wavefunction on a box interval with its wall values.
///
/// Closed-form functions carry exact boundary values; sampled functions use
/// their endpoint samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxWavefunction {
    interval: BoxInterval,
    representation: Representation,
    boundary_left: Complex64,
    boundary_right: Complex64,
}

impl BoxWavefunction {
    pub fn from_closed_form(interval: BoxInterval, cf: ClosedForm) -> Self {
        let boundary_left = cf.eval(interval.left());
        let boundary_right = cf.eval(interval.right());
        Self {
            interval,
            representation: Representation::ClosedForm(cf),
            boundary_left,
            boundary_right,
        }
    }

    /// Samples must be odd in number (Simpson) and at least five (stencils).
    pub fn from_grid(interval: BoxInterval, samples: Vec<Complex64>) -> Result<Self> {
        if samples.len() < 5 || samples.len() % 2 == 0 {
            return Err(BoxError::InvalidGrid(samples.len()));
        }
        Ok(Self {
            interval,
            boundary_left: samples[0],
            boundary_right: samples[samples.len() - 1],
            representation: Representation::Grid { samples },
        })
    }

    /// Samples `f` on the default grid.
    pub fn sampled(interval: BoxInterval, f: impl Fn(f64) -> Complex64) -> Self {
        Self::sampled_with(interval, DEFAULT_GRID_POINTS, f)
    }

    pub fn sampled_with(interval: BoxInterval, points: usize, f: impl Fn(f64) -> Complex64) -> Self {
        let samples = interval.nodes(points).into_iter().map(f).collect();
        Self::from_grid(interval, samples).expect("valid grid size")
    }

    pub fn interval(&self) -> BoxInterval {
        self.interval
    }

    pub fn representation(&self) -> &Representation {
        &self.representation
    }

    pub fn boundary_left(&self) -> Complex64 {
        self.boundary_left
    }

    pub fn boundary_right(&self) -> Complex64 {
        self.boundary_right
    }

    pub fn is_grid(&self) -> bool {
        matches!(self.representation, Representation::Grid { .. })
    }

    pub fn grid_points(&self) -> Option<usize> {
        match &self.representation {
            Representation::Grid { samples } => Some(samples.len()),
            Representation::ClosedForm(_) => None,
        }
    }

    /// Value at `x`. Sampled functions are evaluated at the nearest node.
    pub fn eval(&self, x: f64) -> Complex64 {
        match &self.representation {
            Representation::ClosedForm(cf) => cf.eval(x),
            Representation::Grid { samples } => {
                let h = self.interval.spacing(samples.len());
                let i = ((x - self.interval.left()) / h).round().clamp(0.0, (samples.len() - 1) as f64);
                samples[i as usize]
            }
        }
    }

    /// Values on a grid of `points` nodes.
    pub fn samples(&self, points: usize) -> Vec<Complex64> {
        match &self.representation {
            Representation::Grid { samples } => {
                assert_eq!(samples.len(), points, "grid resampling is not supported");
                samples.clone()
            }
            Representation::ClosedForm(cf) => {
                self.interval.nodes(points).into_iter().map(|x| cf.eval(x)).collect()
            }
        }
    }

    fn check_interval(&self, other: &Self) -> Result<()> {
        if self.interval != other.interval {
            return Err(BoxError::IntervalMismatch);
        }
        Ok(())
    }

    /// Grid size shared by two functions, if either is sampled.
    fn common_points(&self, other: &Self) -> Result<Option<usize>> {
        match (self.grid_points(), other.grid_points()) {
            (Some(m), Some(n)) if m != n => Err(BoxError::GridMismatch(m, n)),
            (Some(m), _) | (_, Some(m)) => Ok(Some(m)),
            (None, None) => Ok(None),
        }
    }

    /// `∫ conj(self) · other`. Analytic when both are closed-form, composite
    /// Simpson otherwise.
    pub fn inner_product(&self, other: &Self) -> Result<Complex64> {
        self.check_interval(other)?;
        match self.common_points(other)? {
            None => {
                let (Representation::ClosedForm(f), Representation::ClosedForm(g)) =
                    (&self.representation, &other.representation)
                else {
                    unreachable!()
                };
                Ok(f.overlap(g, self.interval.left(), self.interval.right()))
            }
            Some(m) => {
                let f = self.samples(m);
                let g = other.samples(m);
                let prod: Vec<Complex64> = f.iter().zip(&g).map(|(a, b)| a.conj() * b).collect();
                Ok(quadrature::simpson(&prod, self.interval.spacing(m)))
            }
        }
    }

    pub fn norm(&self) -> f64 {
        self.inner_product(self).expect("same interval").re.max(0.0).sqrt()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm() - 1.0).abs() <= EPS_NORM
    }

    pub fn normalize(&self) -> Result<Self> {
        let n = self.norm();
        if !(n > 0.0) || !n.is_finite() {
            return Err(BoxError::ZeroFunction);
        }
        Ok(self.scale(Complex64::new(1.0 / n, 0.0)))
    }

    /// Largest modulus: over the nodes for sampled functions, over a dense
    /// default grid plus the walls for closed forms.
    pub fn sup_norm(&self) -> f64 {
        let vals = match &self.representation {
            Representation::Grid { samples } => samples.clone(),
            Representation::ClosedForm(_) => self.samples(DEFAULT_GRID_POINTS),
        };
        vals.iter()
            .map(|z| z.norm())
            .chain([self.boundary_left.norm(), self.boundary_right.norm()])
            .fold(0.0, f64::max)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        match &self.representation {
            Representation::ClosedForm(cf) => Self::from_closed_form(self.interval, cf.scale(c)),
            Representation::Grid { samples } => Self {
                interval: self.interval,
                representation: Representation::Grid {
                    samples: samples.iter().map(|z| z * c).collect(),
                },
                boundary_left: self.boundary_left * c,
                boundary_right: self.boundary_right * c,
            },
        }
    }

    /// `self + c · other`.
    pub fn add_scaled(&self, c: Complex64, other: &Self) -> Result<Self> {
        self.check_interval(other)?;
        match self.common_points(other)? {
            None => {
                let (Representation::ClosedForm(f), Representation::ClosedForm(g)) =
                    (&self.representation, &other.representation)
                else {
                    unreachable!()
                };
                Ok(Self::from_closed_form(self.interval, f.add_scaled(c, g)))
            }
            Some(m) => {
                let f = self.samples(m);
                let g = other.samples(m);
                Self::from_grid(self.interval, f.iter().zip(&g).map(|(a, b)| a + c * b).collect())
            }
        }
    }

    /// `x · f(x)`.
    pub fn times_x(&self) -> Self {
        match &self.representation {
            Representation::ClosedForm(cf) => Self::from_closed_form(self.interval, cf.times_x()),
            Representation::Grid { samples } => {
                let nodes = self.interval.nodes(samples.len());
                let scaled = samples.iter().zip(&nodes).map(|(z, x)| z * *x).collect();
                Self::from_grid(self.interval, scaled).expect("same grid size")
            }
        }
    }

    /// `f′`: analytic for closed forms, fourth-order differences on grids.
    pub fn derivative(&self) -> Self {
        match &self.representation {
            Representation::ClosedForm(cf) => Self::from_closed_form(self.interval, cf.derivative()),
            Representation::Grid { samples } => {
                let d = quadrature::derivative(samples, self.interval.spacing(samples.len()));
                Self::from_grid(self.interval, d).expect("same grid size")
            }
        }
    }
}
