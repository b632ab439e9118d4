//! The windowed position operator `X_M`, equal to `x` inside the symmetric box.
//!
//! Its commutator with `P` is taken through the symmetric pairing
//! `⟨Pf|X_M f⟩ − ⟨X_M f|Pf⟩`, which exists for any smooth `f` and reduces to
//! `iħ (l/2)(|f(−l/2)|² + |f(l/2)|²) − iħ` after integrating by parts.

use std::f64::consts::PI;

use super::closed_form::ClosedForm;
use super::extension::{apply_momentum, domain_check, MomentumExtension};
use super::wavefunction::{BoxInterval, BoxVariant, BoxWavefunction};
use super::{require_normalized, spread, BoundFormula, BoxError, BoxUncertaintyReport, Result};
use crate::Complex64;

fn require_symmetric(interval: BoxInterval) -> Result<()> {
    if interval.variant() != BoxVariant::Symmetric {
        return Err(BoxError::UnsupportedInterval);
    }
    Ok(())
}

/// `X_M f`, defined on the symmetric interval only.
pub fn xm_apply(f: &BoxWavefunction) -> Result<BoxWavefunction> {
    require_symmetric(f.interval())?;
    Ok(f.times_x())
}

/// `⟨f|[P, X_M]|f⟩` from the wall values of `f`.
pub fn xm_commutator_expectation(f: &BoxWavefunction, hbar: f64) -> Result<Complex64> {
    let interval = f.interval();
    require_symmetric(interval)?;
    let walls = f.boundary_left().norm_sqr() + f.boundary_right().norm_sqr();
    Ok(Complex64::new(0.0, hbar * (0.5 * interval.length() * walls - 1.0)))
}

/// `⟨Pf|X_M f⟩ − ⟨X_M f|Pf⟩` evaluated directly: analytic for closed forms,
/// finite differences and Simpson on grids. Independent of the wall-value
/// formula and of any boundary law.
pub fn xm_commutator_pairing(f: &BoxWavefunction, hbar: f64) -> Result<Complex64> {
    let xf = xm_apply(f)?;
    let pf = f.derivative().scale(Complex64::new(0.0, -hbar));
    Ok(pf.inner_product(&xf)? - xf.inner_product(&pf)?)
}

/// Uncertainty report for `X_M` and `P^θ` on the symmetric box.
///
/// The bound is `½|⟨[P, X_M]⟩|`. The momentum spread needs `f` in the
/// extension's domain, so states outside it are refused.
pub fn xm_uncertainty_report(
    f: &BoxWavefunction,
    ext: &MomentumExtension,
) -> Result<BoxUncertaintyReport> {
    require_symmetric(ext.interval())?;
    if f.interval() != ext.interval() {
        return Err(BoxError::IntervalMismatch);
    }
    require_normalized(f)?;
    let xf = xm_apply(f)?;
    let delta_x = spread(f, &xf)?;
    let delta_p = spread(f, &apply_momentum(f, ext)?)?;
    let comm = xm_commutator_expectation(f, ext.hbar())?;
    let mut notes = vec![format!(
        "unhalved form hbar*|(l/2)(|f(-l/2)|^2 + |f(l/2)|^2) - 1| = {:.17e}",
        comm.norm()
    )];
    if !domain_check(&xf, ext)?.in_domain {
        notes.push(
            "x*f is outside the extension's domain; the commutator uses the symmetric pairing"
                .to_string(),
        );
    }
    Ok(BoxUncertaintyReport {
        delta_x,
        delta_p,
        product: delta_x * delta_p,
        commutator_defined: true,
        bound: Some(0.5 * comm.norm()),
        bound_formula: BoundFormula::XmBoundaryFormula,
        notes,
    })
}

/// The normalized lowest state vanishing at both walls:
/// `√(2/l) sin(πx/l)` on `[0, l]`, `√(2/l) cos(πx/l)` on `[−l/2, l/2]`.
pub fn dirichlet_ground_state(interval: BoxInterval) -> BoxWavefunction {
    let l = interval.length();
    let phase = match interval.variant() {
        BoxVariant::Standard => -0.5 * PI,
        BoxVariant::Symmetric => 0.0,
    };
    let mut cf = ClosedForm::trig((2.0 / l).sqrt(), PI / l, phase);
    cf.tag = format!("dirichlet_ground_state(l={l})");
    BoxWavefunction::from_closed_form(interval, cf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boxlab::{eigenfunction, BoxInterval};
    use crate::tol::EPS_QUAD;

    #[test]
    fn ground_states_vanish_at_walls_and_are_normalized() {
        for interval in [BoxInterval::standard(1.7).unwrap(), BoxInterval::symmetric(1.7).unwrap()] {
            let f = dirichlet_ground_state(interval);
            assert!(f.boundary_left().norm() < 1e-15);
            assert!(f.boundary_right().norm() < 1e-15);
            assert!((f.norm() - 1.0).abs() < 1e-14);
            let mid = 0.5 * (interval.left() + interval.right());
            assert!((f.eval(mid).re - (2.0 / 1.7f64).sqrt()).abs() < 1e-14);
        }
    }

    #[test]
    fn xm_requires_symmetric_interval() {
        let i = BoxInterval::standard(1.0).unwrap();
        let f = dirichlet_ground_state(i);
        assert_eq!(xm_apply(&f).unwrap_err(), BoxError::UnsupportedInterval);
        assert_eq!(xm_commutator_expectation(&f, 1.0).unwrap_err(), BoxError::UnsupportedInterval);
        let e = MomentumExtension::new(0.0, i, 1.0).unwrap();
        assert_eq!(xm_uncertainty_report(&f, &e).unwrap_err(), BoxError::UnsupportedInterval);
    }

    #[test]
    fn xm_commutator_vanishes_on_eigenfunctions() {
        let i = BoxInterval::symmetric(2.5).unwrap();
        for theta in [0.0, 1.0, 4.0] {
            let e = MomentumExtension::new(theta, i, 1.3).unwrap();
            for n in [-2, 0, 5] {
                let u = eigenfunction(&e, n);
                assert!(xm_commutator_expectation(&u, 1.3).unwrap().norm() < 1e-14);
                assert!(xm_commutator_pairing(&u, 1.3).unwrap().norm() < 1e-10);
            }
        }
    }

    #[test]
    fn pairing_matches_wall_formula_for_closed_forms() {
        let i = BoxInterval::symmetric(1.4).unwrap();
        let cf = ClosedForm::trig(0.8, 2.1, 0.4).add_scaled(
            Complex64::new(0.2, -0.5),
            &ClosedForm::plane_wave("w", Complex64::new(1.0, 0.0), -3.3),
        );
        let f = BoxWavefunction::from_closed_form(i, cf).normalize().unwrap();
        let want = xm_commutator_expectation(&f, 0.9).unwrap();
        let got = xm_commutator_pairing(&f, 0.9).unwrap();
        assert!((got - want).norm() < 1e-12, "{got} {want}");
    }

    #[test]
    fn pairing_matches_wall_formula_on_grids() {
        let i = BoxInterval::symmetric(1.0).unwrap();
        let f = BoxWavefunction::sampled(i, |x| {
            Complex64::new((3.0 * x).cos() + 0.3 * x, (5.0 * x + 0.2).sin())
        })
        .normalize()
        .unwrap();
        let want = xm_commutator_expectation(&f, 1.0).unwrap();
        let got = xm_commutator_pairing(&f, 1.0).unwrap();
        assert!((got - want).norm() < EPS_QUAD, "{got} {want}");
    }

    #[test]
    fn xm_report_for_eigenfunction() {
        let l = 2.0;
        let i = BoxInterval::symmetric(l).unwrap();
        let e = MomentumExtension::new(0.7, i, 1.0).unwrap();
        let r = xm_uncertainty_report(&eigenfunction(&e, 1), &e).unwrap();
        assert!(r.delta_p < 1e-12);
        assert!((r.delta_x - l / (2.0 * 3f64.sqrt())).abs() < 1e-12);
        assert!(r.bound.unwrap() < 1e-14);
        assert!(r.product >= r.bound.unwrap() - 1e-9);
        assert_eq!(r.bound_formula, BoundFormula::XmBoundaryFormula);
        assert_eq!(r.notes.len(), 2);
    }

    #[test]
    fn xm_report_for_cos_ground_state() {
        let (l, hbar) = (1.6, 0.8);
        let i = BoxInterval::symmetric(l).unwrap();
        let e = MomentumExtension::new(2.0, i, hbar).unwrap();
        let r = xm_uncertainty_report(&dirichlet_ground_state(i), &e).unwrap();
        let dx = l * (1.0 / 12.0 - 1.0 / (2.0 * PI * PI)).sqrt();
        let dp = hbar * PI / l;
        assert!((r.delta_x - dx).abs() < 1e-12);
        assert!((r.delta_p - dp).abs() < 1e-12);
        assert!((r.bound.unwrap() - 0.5 * hbar).abs() < 1e-12);
        assert!(r.product >= r.bound.unwrap());
        assert!((r.product / hbar - 0.5679).abs() < 1e-4);
    }

    #[test]
    fn xm_report_refuses_states_outside_domain() {
        let i = BoxInterval::symmetric(1.0).unwrap();
        let e0 = MomentumExtension::new(0.0, i, 1.0).unwrap();
        let e1 = MomentumExtension::new(1.0, i, 1.0).unwrap();
        let u = eigenfunction(&e0, 0);
        assert!(matches!(
            xm_uncertainty_report(&u, &e1),
            Err(BoxError::OutOfDomain { .. })
        ));
        let unnormalized = u.scale(Complex64::new(2.0, 0.0));
        assert!(matches!(
            xm_uncertainty_report(&unnormalized, &e0),
            Err(BoxError::NotNormalized { .. })
        ));
    }
}
