//! Checks that the rate function solves `exp(d_tau S) = sum_mu d_mu exp(-sum_a mu_a dS/dxi_a)`
//! for a single factor, and that its analytic partials match central differences.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::legendre::TensorProblem;
use crate::logspace::log_sum_exp;

/// Both sides of the PDE at one point, with finite-difference partials alongside.
#[derive(Clone, Debug, Serialize)]
pub struct PdeResidual {
    pub xi: Vec<f64>,
    pub lhs: f64,
    pub rhs: f64,
    /// `|lhs - rhs| / lhs`.
    pub residual: f64,
    pub dtau_analytic: f64,
    pub grad_analytic: Vec<f64>,
    pub dtau_fd: Option<f64>,
    pub grad_fd: Option<Vec<f64>>,
}

/// Analytic against central-difference partials of `S`.
#[derive(Clone, Debug, Serialize)]
pub struct DerivativeReport {
    pub xi: Vec<f64>,
    pub h: f64,
    pub grad_analytic: Vec<f64>,
    pub grad_fd: Vec<f64>,
    pub dtau_analytic: f64,
    pub dtau_fd: f64,
    pub max_deviation: f64,
}

/// Default difference step.
pub const DEFAULT_STEP: f64 = 1e-5;

fn single_factor(p: &TensorProblem<f64>) -> Result<()> {
    if p.factors().len() != 1 {
        return Err(Error::Constraint("the PDE is stated for a single tensor factor".into()));
    }
    Ok(())
}

/// `d_tau S = ln chi_nu(e^x)` and `dS/dxi = -B x` at the Legendre dual of `xi`.
fn analytic_partials(p: &TensorProblem<f64>, xi: &[f64]) -> Result<(f64, Vec<f64>, Vec<f64>)> {
    let rp = p.rate_point(xi)?;
    let factor = &p.factors()[0];
    let rs = p.root_system();
    let exps: Vec<f64> = factor
        .weights()
        .iter()
        .map(|(mu, d)| {
            let c: Vec<f64> = rs.pairing_coeffs(mu);
            c.iter().zip(&rp.x).map(|(a, b)| a * b).sum::<f64>() + (d as f64).ln()
        })
        .collect();
    Ok((log_sum_exp(&exps), rp.grad_s, rp.x))
}

pub fn pde_residual(p: &TensorProblem<f64>, xi: &[f64]) -> Result<PdeResidual> {
    single_factor(p)?;
    let (dtau, grad, _) = analytic_partials(p, xi)?;
    let rs = p.root_system();
    // rhs: sum_mu d_mu exp(-sum_a mu_a dS/dxi_a), mu in simple-root coordinates.
    let exps: Vec<f64> = p.factors()[0]
        .weights()
        .iter()
        .map(|(mu, d)| {
            let w: Vec<f64> = mu.coords().iter().map(|&c| c as f64).collect();
            let mu_root = rs.weight_to_root_real(&w);
            -mu_root.iter().zip(&grad).map(|(m, g)| m * g).sum::<f64>() + (d as f64).ln()
        })
        .collect();
    let ln_rhs = log_sum_exp(&exps);
    let lhs = dtau.exp();
    let rhs = ln_rhs.exp();
    let fd = derivative_check(p, xi, DEFAULT_STEP).ok();
    Ok(PdeResidual {
        xi: xi.to_vec(),
        lhs,
        rhs,
        residual: (lhs - rhs).abs() / lhs,
        dtau_analytic: dtau,
        grad_analytic: grad,
        dtau_fd: fd.as_ref().map(|r| r.dtau_fd),
        grad_fd: fd.map(|r| r.grad_fd),
    })
}

/// Central differences of `S` in each `xi_a` and in `tau`, against the analytic values.
pub fn derivative_check(p: &TensorProblem<f64>, xi: &[f64], h: f64) -> Result<DerivativeReport> {
    single_factor(p)?;
    let (dtau, grad, _) = analytic_partials(p, xi)?;
    let s_at = |q: &TensorProblem<f64>, point: &[f64]| -> Result<f64> {
        if !q.in_domain(point) {
            return Err(Error::StepLeavesDomain(point.to_vec()));
        }
        Ok(q.rate_point(point)?.s)
    };
    let mut grad_fd = Vec::with_capacity(xi.len());
    for a in 0..xi.len() {
        let mut plus = xi.to_vec();
        let mut minus = xi.to_vec();
        plus[a] += h;
        minus[a] -= h;
        grad_fd.push((s_at(p, &plus)? - s_at(p, &minus)?) / (2.0 * h));
    }
    let tau = p.factors()[0].tau;
    if tau - h <= 0.0 {
        return Err(Error::StepLeavesDomain(xi.to_vec()));
    }
    let dtau_fd = (s_at(&p.with_taus(&[tau + h]), xi)? - s_at(&p.with_taus(&[tau - h]), xi)?) / (2.0 * h);
    let max_deviation = grad
        .iter()
        .zip(&grad_fd)
        .map(|(a, b)| (a - b).abs())
        .fold((dtau - dtau_fd).abs(), f64::max);
    Ok(DerivativeReport { xi: xi.to_vec(), h, grad_analytic: grad, grad_fd, dtau_analytic: dtau, dtau_fd, max_deviation })
}

/// Interior sample points: `radii` fractions of the way to the domain boundary
/// along `angles` directions (root coordinates). Angles are offset so no point lies
/// on a wall; rank 1 uses `radii * angles` points split between the two sides.
pub fn interior_grid(p: &TensorProblem<f64>, radii: usize, angles: usize, reach: f64) -> Vec<Vec<f64>> {
    let r = p.rank();
    let dirs: Vec<Vec<f64>> = match r {
        1 => vec![vec![1.0], vec![-1.0]],
        _ => (0..angles)
            .map(|j| {
                let th = (j as f64 + 0.37) * std::f64::consts::TAU / angles as f64;
                let mut d = vec![0.0; r];
                d[0] = th.cos();
                d[1] = th.sin();
                d
            })
            .collect(),
    };
    let per_dir = if r == 1 { radii * angles / 2 } else { radii };
    let mut out = Vec::with_capacity(radii * angles);
    for d in &dirs {
        let edge = boundary_distance(p, d);
        for i in 0..per_dir {
            let s = reach * edge * (i as f64 + 1.0) / per_dir as f64;
            out.push(d.iter().map(|v| v * s).collect());
        }
    }
    out
}

/// Distance from the origin to the domain boundary along `d`, by bisection.
fn boundary_distance(p: &TensorProblem<f64>, d: &[f64]) -> f64 {
    let mut hi = 1.0;
    while p.in_domain(&d.iter().map(|v| v * hi).collect::<Vec<_>>()) {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if p.in_domain(&d.iter().map(|v| v * mid).collect::<Vec<_>>()) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::RootSystem;
    use crate::weight::Weight;

    fn problem(name: &str, nu: &[i64]) -> TensorProblem<f64> {
        let rs = RootSystem::from_name(name).unwrap();
        TensorProblem::new(&rs, &[(Weight::new(nu.to_vec()), 1.0)], 0.01).unwrap()
    }

    #[test]
    fn origin_gives_dimension() {
        let p = problem("B2", &[1, 0]);
        let r = pde_residual(&p, &[0.0, 0.0]).unwrap();
        assert!((r.lhs - 5.0).abs() < 1e-12 && r.residual < 1e-12);
        let d = derivative_check(&p, &[0.0, 0.0], 1e-5).unwrap();
        assert!(d.grad_analytic.iter().all(|g| g.abs() < 1e-15));
        assert!((d.dtau_fd - 5f64.ln()).abs() < 1e-6);
    }

    #[test]
    fn a1_quarter_point() {
        let p = problem("A1", &[1]);
        let r = pde_residual(&p, &[0.25]).unwrap();
        let expected = 1.0 / (0.75f64 * 0.25).sqrt();
        assert!((r.lhs - expected).abs() < 1e-10 && (r.rhs - expected).abs() < 1e-10);
        assert!((r.lhs - 2.3094).abs() < 1e-4);
        assert!(r.residual < 1e-10);
        let d = derivative_check(&p, &[0.25], 1e-5).unwrap();
        assert!(d.max_deviation < 1e-6, "{d:?}");
    }

    #[test]
    fn a2_point() {
        let p = problem("A2", &[1, 0]);
        assert!(pde_residual(&p, &[0.1, 0.05]).unwrap().residual < 1e-9);
    }

    #[test]
    fn step_outside_domain_is_reported() {
        let p = problem("A1", &[1]);
        assert!(matches!(derivative_check(&p, &[0.499], 0.01), Err(Error::StepLeavesDomain(_))));
    }

    #[test]
    fn grid_points_are_interior_and_regular() {
        for (name, nu) in [("A1", vec![1]), ("B2", vec![0, 1])] {
            let p = problem(name, &nu);
            let g = interior_grid(&p, 10, 10, 0.9);
            assert_eq!(g.len(), 100);
            assert!(g.iter().all(|x| p.in_domain(x) && p.root_system().is_regular_real(x)));
        }
    }
}
