use std::f64::consts::TAU;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::closed_form::ClosedForm;
use super::wavefunction::{BoxInterval, BoxWavefunction};
use super::{require_normalized, spread, BoundFormula, BoxError, BoxUncertaintyReport, Result};
use crate::tol::{EPS_BC_CLOSED, EPS_BC_GRID};
use crate::Complex64;

/// Grid of candidate phases scanned when the left wall value vanishes and no
/// closed-form ratio exists.
const THETA_SCAN_POINTS: usize = 4096;

/// The self-adjoint momentum extension `P^θ` with domain
/// `{φ : φ(b) = e^{iθ} φ(a)}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentumExtension {
    theta: f64,
    interval: BoxInterval,
    hbar: f64,
}

impl MomentumExtension {
    pub fn new(theta: f64, interval: BoxInterval, hbar: f64) -> Result<Self> {
        if !(0.0..TAU).contains(&theta) {
            return Err(BoxError::InvalidTheta(theta));
        }
        if !(hbar > 0.0) || !hbar.is_finite() {
            return Err(BoxError::InvalidHbar(hbar));
        }
        Ok(Self {
            theta,
            interval,
            hbar,
        })
    }

    /// Like [`new`](Self::new) but reduces `theta` modulo `2π` first.
    pub fn wrapped(theta: f64, interval: BoxInterval, hbar: f64) -> Result<Self> {
        Self::new(wrap_phase(theta), interval, hbar)
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn interval(&self) -> BoxInterval {
        self.interval
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }
}

/// Reduces an angle to `[0, 2π)`.
pub(crate) fn wrap_phase(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    if t >= TAU {
        0.0
    } else {
        t
    }
}

/// `p_n = ħ (2πn + θ) / l`.
pub fn eigenvalue(ext: &MomentumExtension, n: i64) -> f64 {
    ext.hbar * (TAU * n as f64 + ext.theta) / ext.interval.length()
}

/// `u_n(x) = e^{i p_n x / ħ} / √l`.
pub fn eigenfunction(ext: &MomentumExtension, n: i64) -> BoxWavefunction {
    let l = ext.interval.length();
    let k = (TAU * n as f64 + ext.theta) / l;
    let cf = ClosedForm::plane_wave(
        format!("plane_wave(n={n}, theta={})", ext.theta),
        Complex64::new(1.0 / l.sqrt(), 0.0),
        k,
    );
    BoxWavefunction::from_closed_form(ext.interval, cf)
}

/// `x · f(x)`; wall values become `a·f(a)` and `b·f(b)`.
pub fn apply_position(f: &BoxWavefunction) -> BoxWavefunction {
    f.times_x()
}

/// `−iħ f′`, refused for functions outside the extension's domain.
pub fn apply_momentum(f: &BoxWavefunction, ext: &MomentumExtension) -> Result<BoxWavefunction> {
    let verdict = domain_check(f, ext)?;
    if !verdict.in_domain {
        return Err(BoxError::OutOfDomain {
            residual: verdict.residual,
        });
    }
    Ok(f.derivative().scale(Complex64::new(0.0, -ext.hbar)))
}

/// Whether a function obeys the extension's boundary law.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainVerdict {
    pub in_domain: bool,
    /// `|f(b) − e^{iθ} f(a)| / max(‖f‖_∞, 1)`
    pub residual: f64,
    /// The phase whose boundary law the function does satisfy, if any.
    pub shifted_theta: Option<f64>,
    pub tolerance: f64,
    pub note: String,
}

fn boundary_residual(f: &BoxWavefunction, theta: f64, scale: f64) -> f64 {
    (f.boundary_right() - Complex64::from_polar(1.0, theta) * f.boundary_left()).norm() / scale
}

pub fn domain_check(f: &BoxWavefunction, ext: &MomentumExtension) -> Result<DomainVerdict> {
    if f.interval() != ext.interval {
        return Err(BoxError::IntervalMismatch);
    }
    let tolerance = if f.is_grid() { EPS_BC_GRID } else { EPS_BC_CLOSED };
    let scale = f.sup_norm().max(1.0);
    let residual = boundary_residual(f, ext.theta, scale);
    let in_domain = residual <= tolerance;
    if in_domain {
        return Ok(DomainVerdict {
            in_domain,
            residual,
            shifted_theta: None,
            tolerance,
            note: format!("boundary law holds for theta = {}", ext.theta),
        });
    }

    let left = f.boundary_left();
    let candidate = if left.norm() > 0.0 {
        wrap_phase((f.boundary_right() / left).arg())
    } else {
        (0..THETA_SCAN_POINTS)
            .map(|i| TAU * i as f64 / THETA_SCAN_POINTS as f64)
            .min_by(|a, b| {
                boundary_residual(f, *a, scale).total_cmp(&boundary_residual(f, *b, scale))
            })
            .unwrap_or(0.0)
    };
    let shifted_theta = (boundary_residual(f, candidate, scale) <= tolerance).then_some(candidate);
    let note = match shifted_theta {
        Some(t) => format!(
            "boundary law fails for theta = {}; it holds for theta' = {t} (shift {})",
            ext.theta,
            wrap_phase(t - ext.theta)
        ),
        None => format!(
            "boundary law fails for theta = {} and for every other phase \
             (|f(a)| = {:e}, |f(b)| = {:e})",
            ext.theta,
            left.norm(),
            f.boundary_right().norm()
        ),
    };
    Ok(DomainVerdict {
        in_domain,
        residual,
        shifted_theta,
        tolerance,
        note,
    })
}

/// The operator product whose matrix element is missing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OffendingFactor {
    /// `X f` leaves the domain, so `⟨f|P X|f⟩` is not defined.
    #[serde(rename = "P X")]
    PX,
    /// `f` itself is outside the domain, so `⟨f|X P|f⟩` is not defined.
    #[serde(rename = "X P")]
    XP,
}

impl fmt::Display for OffendingFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::PX => "P X",
            Self::XP => "X P",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CanonicalCommutator {
    Defined { value: Complex64 },
    Undefined {
        offending_factor: OffendingFactor,
        residual: f64,
    },
}

impl CanonicalCommutator {
    pub fn value(&self) -> Option<Complex64> {
        match self {
            Self::Defined { value } => Some(*value),
            Self::Undefined { .. } => None,
        }
    }
}

/// `⟨f|P X|f⟩ − ⟨f|X P|f⟩` for the extension's `P`, or the factor that makes it
/// undefined.
pub fn commutator_expectation_canonical(
    f: &BoxWavefunction,
    ext: &MomentumExtension,
) -> Result<CanonicalCommutator> {
    let own = domain_check(f, ext)?;
    if !own.in_domain {
        return Ok(CanonicalCommutator::Undefined {
            offending_factor: OffendingFactor::XP,
            residual: own.residual,
        });
    }
    let xf = apply_position(f);
    let moved = domain_check(&xf, ext)?;
    if !moved.in_domain {
        return Ok(CanonicalCommutator::Undefined {
            offending_factor: OffendingFactor::PX,
            residual: moved.residual,
        });
    }
    let pxf = apply_momentum(&xf, ext)?;
    let xpf = apply_position(&apply_momentum(f, ext)?);
    let value = f.inner_product(&pxf)? - f.inner_product(&xpf)?;
    Ok(CanonicalCommutator::Defined { value })
}

/// Uncertainty report for the plain position operator and `P^θ`.
pub fn canonical_uncertainty_report(
    f: &BoxWavefunction,
    ext: &MomentumExtension,
) -> Result<BoxUncertaintyReport> {
    require_normalized(f)?;
    let delta_x = spread(f, &apply_position(f))?;
    let delta_p = spread(f, &apply_momentum(f, ext)?)?;
    let product = delta_x * delta_p;
    let mut notes = Vec::new();
    let (commutator_defined, bound, bound_formula) = match commutator_expectation_canonical(f, ext)? {
        CanonicalCommutator::Defined { value } => {
            (true, Some(0.5 * value.norm()), BoundFormula::CanonicalHalfHbar)
        }
        CanonicalCommutator::Undefined {
            offending_factor,
            residual,
        } => {
            notes.push(format!(
                "<f|{offending_factor}|f> is not defined: x*f violates the boundary law \
                 (residual {residual:e}); the Robertson bound does not exist"
            ));
            (false, None, BoundFormula::Undefined)
        }
    };
    Ok(BoxUncertaintyReport {
        delta_x,
        delta_p,
        product,
        commutator_defined,
        bound,
        bound_formula,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;
    use crate::boxlab::modified::dirichlet_ground_state;

    fn ext(theta: f64, interval: BoxInterval) -> MomentumExtension {
        MomentumExtension::new(theta, interval, 1.0).unwrap()
    }

    #[test]
    fn extension_validation() {
        let i = BoxInterval::standard(1.0).unwrap();
        assert!(MomentumExtension::new(TAU, i, 1.0).is_err());
        assert!(MomentumExtension::new(-0.1, i, 1.0).is_err());
        assert!(MomentumExtension::new(0.1, i, 0.0).is_err());
        let w = MomentumExtension::wrapped(TAU + 0.5, i, 1.0).unwrap();
        assert!((w.theta() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn eigenvalue_examples() {
        let i1 = BoxInterval::standard(1.0).unwrap();
        assert!((eigenvalue(&ext(0.0, i1), 1) - TAU).abs() < 1e-15);
        assert_eq!(eigenvalue(&ext(0.0, i1), 0), 0.0);
        let i2 = BoxInterval::standard(2.0).unwrap();
        let e = ext(PI, i2);
        assert!((eigenvalue(&e, -1) + PI / 2.0).abs() < 1e-15);
        // Cross-check through the momentum rule on the eigenfunction.
        let u = eigenfunction(&e, -1);
        let pu = apply_momentum(&u, &e).unwrap();
        let x = 0.37;
        assert!((pu.eval(x) - u.eval(x) * (-PI / 2.0)).norm() < 1e-14);
    }

    #[test]
    fn eigenfunction_examples() {
        let i = BoxInterval::standard(2.0).unwrap();
        let u0 = eigenfunction(&ext(0.0, i), 0);
        for x in [0.0, 0.5, 2.0] {
            assert!((u0.eval(x) - Complex64::new(1.0 / 2f64.sqrt(), 0.0)).norm() < 1e-15);
        }
        for (theta, n) in [(0.3, 4), (5.0, -7), (PI, 0)] {
            let e = ext(theta, i);
            let u = eigenfunction(&e, n);
            for x in [0.0, 0.3, 1.1, 2.0] {
                assert!((u.eval(x).norm() - 1.0 / 2f64.sqrt()).abs() < 1e-15);
            }
            assert!((u.norm() - 1.0).abs() < 1e-14);
            let v = domain_check(&u, &e).unwrap();
            assert!(v.in_domain);
            assert!(v.residual < 1e-13);
        }
    }

    #[test]
    fn eigenfunctions_are_orthonormal() {
        for interval in [BoxInterval::standard(1.5).unwrap(), BoxInterval::symmetric(1.5).unwrap()] {
            let e = ext(1.1, interval);
            for n in -4..=4 {
                for m in -4..=4 {
                    let ip = eigenfunction(&e, n).inner_product(&eigenfunction(&e, m)).unwrap();
                    let want = if n == m { 1.0 } else { 0.0 };
                    assert!((ip - Complex64::new(want, 0.0)).norm() < 1e-12, "{n} {m}: {ip}");
                }
            }
        }
    }

    #[test]
    fn position_expectation_of_zero_mode() {
        let i = BoxInterval::standard(3.0).unwrap();
        let u = eigenfunction(&ext(0.0, i), 0);
        let ip = u.inner_product(&apply_position(&u)).unwrap();
        assert!((ip - Complex64::new(1.5, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn position_boundary_values() {
        let std_i = BoxInterval::standard(1.0).unwrap();
        let e = ext(0.7, std_i);
        let u = eigenfunction(&e, 2);
        let xu = apply_position(&u);
        assert_eq!(xu.boundary_left(), Complex64::new(0.0, 0.0));
        assert!((xu.boundary_right() - u.boundary_right()).norm() < 1e-15);
        assert!(xu.boundary_right().norm() > 0.5);

        let sym = BoxInterval::symmetric(2.0).unwrap();
        let u = eigenfunction(&ext(0.7, sym), 2);
        let xu = apply_position(&u);
        assert!((xu.boundary_left() + u.boundary_left()).norm() < 1e-15);
        assert!((xu.boundary_right() - u.boundary_right()).norm() < 1e-15);

        let zero = BoxWavefunction::from_closed_form(sym, ClosedForm::zero());
        assert_eq!(apply_position(&zero).norm(), 0.0);
    }

    #[test]
    fn momentum_on_ground_state_matches_analytic_derivative() {
        let l = 1.3;
        let i = BoxInterval::symmetric(l).unwrap();
        let f = dirichlet_ground_state(i);
        let e = ext(2.0, i);
        let pf = apply_momentum(&f, &e).unwrap();
        for x in [-0.6, -0.1, 0.0, 0.4] {
            let want = Complex64::new(0.0, -1.0) * (-(PI / l) * (2.0 / l).sqrt() * (PI * x / l).sin());
            assert!((pf.eval(x) - want).norm() < 1e-13);
        }
    }

    #[test]
    fn constant_is_out_of_domain_for_nonzero_theta() {
        let i = BoxInterval::standard(1.0).unwrap();
        let u0 = eigenfunction(&ext(0.0, i), 0);
        assert!(matches!(
            apply_momentum(&u0, &ext(0.4, i)),
            Err(BoxError::OutOfDomain { .. })
        ));
    }

    #[test]
    fn position_removes_eigenfunctions_from_standard_domains() {
        let i = BoxInterval::standard(1.0).unwrap();
        for theta in [0.0, 1.0, 3.0, 6.0] {
            let e = ext(theta, i);
            let xu = apply_position(&eigenfunction(&e, 3));
            let v = domain_check(&xu, &e).unwrap();
            assert!(!v.in_domain);
            assert!(v.shifted_theta.is_none());
        }
    }

    #[test]
    fn symmetric_domain_shift() {
        let i = BoxInterval::symmetric(1.0).unwrap();
        for alpha in [0.3, 1.0, 2.5] {
            let e = ext(alpha, i);
            let v = domain_check(&apply_position(&eigenfunction(&e, -2)), &e).unwrap();
            assert!(!v.in_domain);
            assert!((v.shifted_theta.unwrap() - (alpha + PI)).abs() < 1e-12);
        }
        // For θ ≥ π the shift wraps to θ − π.
        let e = ext(4.0, i);
        let v = domain_check(&apply_position(&eigenfunction(&e, 1)), &e).unwrap();
        assert!(!v.in_domain);
        assert!((v.shifted_theta.unwrap() - (4.0 - PI)).abs() < 1e-12);
    }

    #[test]
    fn grid_functions_use_looser_boundary_tolerance() {
        let i = BoxInterval::symmetric(1.0).unwrap();
        let e = ext(0.0, i);
        let f = BoxWavefunction::sampled(i, |x| Complex64::new((PI * x).cos() + 1e-7, 0.0));
        let v = domain_check(&f, &e).unwrap();
        assert!(v.in_domain);
        assert_eq!(v.tolerance, EPS_BC_GRID);
    }

    #[test]
    fn zero_left_wall_uses_phase_scan() {
        let i = BoxInterval::standard(1.0).unwrap();
        let e = ext(1.0, i);
        let f = BoxWavefunction::from_closed_form(i, ClosedForm::trig(1.0, PI / 2.0, -PI / 2.0));
        let v = domain_check(&f, &e).unwrap();
        assert!(!v.in_domain);
        assert!(v.shifted_theta.is_none());
    }

    #[test]
    fn canonical_commutator_undefined_for_eigenfunctions() {
        let std_i = BoxInterval::standard(1.0).unwrap();
        let e = ext(0.9, std_i);
        let c = commutator_expectation_canonical(&eigenfunction(&e, 1), &e).unwrap();
        assert!(matches!(
            c,
            CanonicalCommutator::Undefined {
                offending_factor: OffendingFactor::PX,
                ..
            }
        ));
        let sym = BoxInterval::symmetric(1.0).unwrap();
        for theta in [0.0, 0.5, 3.0, 5.5] {
            let e = ext(theta, sym);
            let c = commutator_expectation_canonical(&eigenfunction(&e, 0), &e).unwrap();
            assert!(c.value().is_none());
        }
        // f outside the domain names the X P factor.
        let u = eigenfunction(&ext(0.0, std_i), 0);
        let c = commutator_expectation_canonical(&u, &ext(1.0, std_i)).unwrap();
        assert!(matches!(
            c,
            CanonicalCommutator::Undefined {
                offending_factor: OffendingFactor::XP,
                ..
            }
        ));
    }

    #[test]
    fn canonical_commutator_defined_for_wall_vanishing_states() {
        let hbar = 0.7;
        for interval in [BoxInterval::standard(1.0).unwrap(), BoxInterval::symmetric(2.0).unwrap()] {
            let f = dirichlet_ground_state(interval);
            let e = MomentumExtension::new(1.3, interval, hbar).unwrap();
            let v = commutator_expectation_canonical(&f, &e).unwrap().value().unwrap();
            assert!((v - Complex64::new(0.0, -hbar)).norm() < 1e-12, "{v}");
        }
    }

    #[test]
    fn canonical_report_for_standard_eigenfunction() {
        let l = 2.0;
        let i = BoxInterval::standard(l).unwrap();
        let e = ext(0.4, i);
        let r = canonical_uncertainty_report(&eigenfunction(&e, 3), &e).unwrap();
        assert!(!r.commutator_defined);
        assert!(r.bound.is_none());
        assert_eq!(r.bound_formula, BoundFormula::Undefined);
        assert!(r.delta_p < 1e-12);
        assert!((r.delta_x - l / (2.0 * 3f64.sqrt())).abs() < 1e-12);
        assert!(r.delta_x < l);
    }
}
