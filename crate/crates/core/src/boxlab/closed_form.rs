//! Exponential polynomials `Σ c_j x^{m_j} e^{i k_j x}`.
//!
//! Plane waves, trigonometric states and their products with `x` all live in
//! this class, which is closed under differentiation and multiplication by
//! `x` and has analytic overlap integrals.

use serde::{Deserialize, Serialize};

use crate::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpTerm {
    pub coeff: Complex64,
    pub power: u32,
    pub wavenumber: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosedForm {
    /// Human-readable origin, e.g. `plane_wave(n=1, theta=0.5)`.
    pub tag: String,
    pub terms: Vec<ExpTerm>,
}

impl ClosedForm {
    pub fn new(tag: impl Into<String>, terms: Vec<ExpTerm>) -> Self {
        let mut cf = Self {
            tag: tag.into(),
            terms,
        };
        cf.merge_terms();
        cf
    }

    pub fn zero() -> Self {
        Self::new("zero", Vec::new())
    }

    /// `amplitude · e^{ikx}`.
    pub fn plane_wave(tag: impl Into<String>, amplitude: Complex64, wavenumber: f64) -> Self {
        Self::new(
            tag,
            vec![ExpTerm {
                coeff: amplitude,
                power: 0,
                wavenumber,
            }],
        )
    }

    /// `amplitude · cos(kx + phase)`.
    pub fn trig(amplitude: f64, wavenumber: f64, phase: f64) -> Self {
        let half = 0.5 * amplitude;
        Self::new(
            format!("trig(k={wavenumber}, phase={phase})"),
            vec![
                ExpTerm {
                    coeff: Complex64::from_polar(half, phase),
                    power: 0,
                    wavenumber,
                },
                ExpTerm {
                    coeff: Complex64::from_polar(half, -phase),
                    power: 0,
                    wavenumber: -wavenumber,
                },
            ],
        )
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        self.terms
            .iter()
            .map(|t| t.coeff * x.powi(t.power as i32) * Complex64::from_polar(1.0, t.wavenumber * x))
            .sum()
    }

    pub fn derivative(&self) -> Self {
        let mut terms = Vec::with_capacity(2 * self.terms.len());
        for t in &self.terms {
            if t.wavenumber != 0.0 {
                terms.push(ExpTerm {
                    coeff: t.coeff * Complex64::new(0.0, t.wavenumber),
                    ..*t
                });
            }
            if t.power > 0 {
                terms.push(ExpTerm {
                    coeff: t.coeff * t.power as f64,
                    power: t.power - 1,
                    wavenumber: t.wavenumber,
                });
            }
        }
        Self::new(format!("d/dx[{}]", self.tag), terms)
    }

    pub fn times_x(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| ExpTerm {
                power: t.power + 1,
                ..*t
            })
            .collect();
        Self::new(format!("x*[{}]", self.tag), terms)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| ExpTerm {
                coeff: t.coeff * c,
                ..*t
            })
            .collect();
        Self::new(self.tag.clone(), terms)
    }

    /// `self + c · other`.
    pub fn add_scaled(&self, c: Complex64, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().map(|t| ExpTerm {
            coeff: t.coeff * c,
            ..*t
        }));
        Self::new(format!("{} + c*[{}]", self.tag, other.tag), terms)
    }

    /// `∫_a^b conj(self) · other dx`, analytically.
    pub fn overlap(&self, other: &Self, a: f64, b: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for s in &self.terms {
            for o in &other.terms {
                acc += s.coeff.conj()
                    * o.coeff
                    * poly_exp_integral(s.power + o.power, o.wavenumber - s.wavenumber, a, b);
            }
        }
        acc
    }

    fn merge_terms(&mut self) {
        let mut merged: Vec<ExpTerm> = Vec::with_capacity(self.terms.len());
        for t in self.terms.drain(..) {
            match merged
                .iter_mut()
                .find(|m| m.power == t.power && m.wavenumber == t.wavenumber)
            {
                Some(m) => m.coeff += t.coeff,
                None => merged.push(t),
            }
        }
        self.terms = merged;
    }
}

/// `∫_a^b x^m e^{iκx} dx`.
///
/// Small `|κ|·max(|a|,|b|)` uses the power series of the exponential; larger
/// values use the integration-by-parts recurrence.
pub fn poly_exp_integral(m: u32, kappa: f64, a: f64, b: f64) -> Complex64 {
    let reach = a.abs().max(b.abs());
    if kappa == 0.0 {
        let p = m as i32 + 1;
        return Complex64::new((b.powi(p) - a.powi(p)) / p as f64, 0.0);
    }
    if (kappa * reach).abs() <= 1.0 {
        // Σ_j (iκ)^j / j! · (b^{m+j+1} − a^{m+j+1}) / (m+j+1)
        let mut acc = Complex64::new(0.0, 0.0);
        let mut factor = Complex64::new(1.0, 0.0);
        for j in 0..80 {
            let p = (m + j + 1) as i32;
            acc += factor * ((b.powi(p) - a.powi(p)) / p as f64);
            // Bound on the term magnitude; the term itself can vanish by symmetry.
            let bound = factor.norm() * 2.0 * reach.powi(p);
            if bound <= 1e-18 * acc.norm() {
                break;
            }
            factor *= Complex64::new(0.0, kappa) / (j + 1) as f64;
        }
        return acc;
    }
    let ik = Complex64::new(0.0, kappa);
    let ea = Complex64::from_polar(1.0, kappa * a);
    let eb = Complex64::from_polar(1.0, kappa * b);
    let mut acc = (eb - ea) / ik;
    for p in 1..=m as i32 {
        let boundary = eb * b.powi(p) - ea * a.powi(p);
        acc = (boundary - acc * p as f64) / ik;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Composite Gauss-Legendre-free oracle: fine Simpson on the raw integrand.
    fn simpson_oracle(m: u32, kappa: f64, a: f64, b: f64) -> Complex64 {
        let n = 20_000;
        let h = (b - a) / n as f64;
        let f = |x: f64| x.powi(m as i32) * Complex64::from_polar(1.0, kappa * x);
        let mut acc = f(a) + f(b);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            acc += f(a + i as f64 * h) * w;
        }
        acc * h / 3.0
    }

    #[test]
    fn integral_matches_oracle_across_regimes() {
        for &(a, b) in &[(0.0, 1.0), (-0.5, 0.5), (0.0, 2.0)] {
            for m in 0..5 {
                for &kappa in &[0.0, 1e-9, 0.3, 0.99, 1.5, 3.0, 2.0 * std::f64::consts::PI, 40.0, -17.0] {
                    let got = poly_exp_integral(m, kappa, a, b);
                    let want = simpson_oracle(m, kappa, a, b);
                    assert!(
                        (got - want).norm() < 1e-10,
                        "m={m} kappa={kappa} [{a},{b}]: {got} vs {want}"
                    );
                }
            }
        }
    }

    #[test]
    fn derivative_of_x_times_plane_wave() {
        let f = ClosedForm::plane_wave("u", Complex64::new(1.0, 0.0), 3.0).times_x();
        let d = f.derivative();
        for &x in &[0.0, 0.3, -0.7] {
            let want = Complex64::from_polar(1.0, 3.0 * x) * (Complex64::new(1.0, 0.0) + Complex64::new(0.0, 3.0 * x));
            assert!((d.eval(x) - want).norm() < 1e-14);
        }
    }

    #[test]
    fn like_terms_merge() {
        let f = ClosedForm::plane_wave("u", Complex64::new(2.0, 0.0), 1.0);
        let g = f.add_scaled(Complex64::new(-1.0, 0.0), &f);
        assert_eq!(g.terms.len(), 1);
        assert_eq!(g.terms[0].coeff, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn trig_is_cosine() {
        let f = ClosedForm::trig(2.0, 1.3, 0.4);
        for &x in &[0.0, 0.5, -1.0] {
            assert!((f.eval(x) - Complex64::new(2.0 * (1.3 * x + 0.4).cos(), 0.0)).norm() < 1e-14);
        }
    }
}
