//! Thin wrappers over double-exponential quadrature for boxes in one and two dimensions.

use ::quadrature::double_exponential;

/// Panels per axis; the integrands here are smooth but sharply peaked.
const PANELS: usize = 8;

/// `int_a^b f`, split into equal panels.
pub fn integrate_1d(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    integrate_panels(&f, a, b, tol, PANELS)
}

fn integrate_panels(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|i| {
            let lo = a + h * i as f64;
            double_exponential::integrate(f, lo, lo + h, tol / panels as f64).integral
        })
        .sum()
}

/// Iterated integral over the box `[lo_0, hi_0] x [lo_1, hi_1]`.
pub fn integrate_2d(f: impl Fn(f64, f64) -> f64, lo: [f64; 2], hi: [f64; 2], tol: f64) -> f64 {
    let width = hi[0] - lo[0];
    integrate_1d(
        |x| integrate_1d(|y| f(x, y), lo[1], hi[1], tol / width.max(1.0)),
        lo[0],
        hi[0],
        tol,
    )
}

/// Integral of `f` over a box in one or two dimensions, with fewer panels for small cells.
pub fn integrate_box(f: &dyn Fn(&[f64]) -> f64, lo: &[f64], hi: &[f64], tol: f64) -> f64 {
    match lo.len() {
        1 => double_exponential::integrate(|x| f(&[x]), lo[0], hi[0], tol).integral,
        2 => double_exponential::integrate(
            |x| double_exponential::integrate(|y| f(&[x, y]), lo[1], hi[1], tol).integral,
            lo[0],
            hi[0],
            tol,
        )
        .integral,
        r => panic!("box quadrature supports rank 1 and 2, got {r}"),
    }
}

/// Integral over a rank-1 or rank-2 box using paneled quadrature.
pub fn integrate_region(f: &dyn Fn(&[f64]) -> f64, lo: &[f64], hi: &[f64], tol: f64) -> f64 {
    match lo.len() {
        1 => integrate_1d(|x| f(&[x]), lo[0], hi[0], tol),
        2 => integrate_2d(|x, y| f(&[x, y]), [lo[0], lo[1]], [hi[0], hi[1]], tol),
        r => panic!("region quadrature supports rank 1 and 2, got {r}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_mass() {
        let pi = std::f64::consts::PI;
        let m = integrate_1d(|x| (-x * x / 2.0).exp() / (2.0 * pi).sqrt(), -12.0, 12.0, 1e-12);
        assert!((m - 1.0).abs() < 1e-11);
        let m2 = integrate_2d(|x, y| (-(x * x + y * y) / 2.0).exp() / (2.0 * pi), [-12.0; 2], [12.0; 2], 1e-12);
        assert!((m2 - 1.0).abs() < 1e-10);
    }

    #[test]
    fn polynomial_on_box() {
        let v = integrate_box(&|p: &[f64]| p[0] * p[1] * p[1], &[0.0, 0.0], &[1.0, 2.0], 1e-12);
        assert!((v - 0.5 * 8.0 / 3.0).abs() < 1e-12);
    }
}
