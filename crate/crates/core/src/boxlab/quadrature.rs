//! Composite Simpson quadrature and fourth-order grid differentiation on
//! uniform grids that include both endpoints.

use crate::Complex64;

/// Composite Simpson rule. `values.len()` must be odd and at least 3.
pub fn simpson(values: &[Complex64], h: f64) -> Complex64 {
    let n = values.len();
    debug_assert!(n >= 3 && n % 2 == 1, "simpson needs an odd number of nodes");
    let mut odd = Complex64::new(0.0, 0.0);
    let mut even = Complex64::new(0.0, 0.0);
    for (i, v) in values.iter().enumerate().take(n - 1).skip(1) {
        if i % 2 == 1 {
            odd += v;
        } else {
            even += v;
        }
    }
    (values[0] + values[n - 1] + odd * 4.0 + even * 2.0) * (h / 3.0)
}

/// Derivative on a uniform grid: five-point central differences inside,
/// five-point one-sided stencils for the two nodes at each end. Fourth order
/// everywhere. Needs at least five nodes.
pub fn derivative(values: &[Complex64], h: f64) -> Vec<Complex64> {
    let n = values.len();
    assert!(n >= 5, "fourth-order stencils need at least five nodes");
    let f = values;
    let s = 1.0 / (12.0 * h);
    let mut d = vec![Complex64::new(0.0, 0.0); n];
    d[0] = (f[0] * -25.0 + f[1] * 48.0 - f[2] * 36.0 + f[3] * 16.0 - f[4] * 3.0) * s;
    d[1] = (f[0] * -3.0 - f[1] * 10.0 + f[2] * 18.0 - f[3] * 6.0 + f[4]) * s;
    for i in 2..n - 2 {
        d[i] = (f[i - 2] - f[i - 1] * 8.0 + f[i + 1] * 8.0 - f[i + 2]) * s;
    }
    let m = n - 1;
    d[m] = (f[m] * 25.0 - f[m - 1] * 48.0 + f[m - 2] * 36.0 - f[m - 3] * 16.0 + f[m - 4] * 3.0) * s;
    d[m - 1] = (f[m] * 3.0 + f[m - 1] * 10.0 - f[m - 2] * 18.0 + f[m - 3] * 6.0 - f[m - 4]) * s;
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize, a: f64, b: f64) -> (Vec<f64>, f64) {
        let h = (b - a) / (n - 1) as f64;
        ((0..n).map(|i| a + i as f64 * h).collect(), h)
    }

    #[test]
    fn simpson_is_exact_on_cubics() {
        let (x, h) = grid(11, -1.0, 2.0);
        let v: Vec<Complex64> = x
            .iter()
            .map(|&t| Complex64::new(t * t * t - 2.0 * t, t * t))
            .collect();
        // ∫_{-1}^{2} (t³ − 2t) dt = 15/4 − 3 = 0.75; ∫ t² dt = 3
        let got = simpson(&v, h);
        assert!((got - Complex64::new(0.75, 3.0)).norm() < 1e-13);
    }

    #[test]
    fn derivative_is_exact_on_quartics() {
        let (x, h) = grid(9, 0.0, 1.0);
        let v: Vec<Complex64> = x.iter().map(|&t| Complex64::new(t.powi(4), -t.powi(3))).collect();
        let d = derivative(&v, h);
        for (t, dv) in x.iter().zip(&d) {
            let want = Complex64::new(4.0 * t.powi(3), -3.0 * t * t);
            assert!((dv - want).norm() < 1e-11, "{t}: {dv} vs {want}");
        }
    }

    #[test]
    fn derivative_converges_at_fourth_order() {
        let err = |n: usize| {
            let (x, h) = grid(n, 0.0, 1.0);
            let v: Vec<Complex64> = x.iter().map(|&t| Complex64::from_polar(1.0, 5.0 * t)).collect();
            derivative(&v, h)
                .iter()
                .zip(&x)
                .map(|(d, &t)| (d - Complex64::new(0.0, 5.0) * Complex64::from_polar(1.0, 5.0 * t)).norm())
                .fold(0.0, f64::max)
        };
        let ratio = err(65) / err(129);
        assert!(ratio > 12.0, "ratio {ratio}");
    }
}
