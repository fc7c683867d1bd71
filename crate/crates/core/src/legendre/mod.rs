//! The convex-analysis core: `f(tau, y) = sum_k tau_k ln chi_{nu_k}(e^y)`, its
//! Legendre transform `S(tau, xi)`, and the leading multiplicity asymptotic.
//!
//! All vectors are in simple-root coordinates; pairings go through `B`.

pub mod density;

use serde::Serialize;

use crate::charalg::character::weyl_denominator;
use crate::charalg::freudenthal::{weight_multiplicities, WeightSystem};
use crate::error::{Error, Result};
use crate::linalg::{dot, norm, Cholesky, Matrix};
use crate::logspace::log_sum_exp;
use crate::rootsys::RootSystem;
use crate::scalar::Real;
use crate::weight::Weight;

/// Iteration cap for the Newton solver.
pub const MAX_NEWTON_ITERATIONS: usize = 200;

/// One tensor factor `V_nu` with its weight `tau` and cached weight system.
#[derive(Clone, Debug)]
pub struct Factor<T> {
    pub nu: Weight,
    pub tau: T,
    weights: WeightSystem,
    /// `(c_mu, ln d_mu)` with `(mu, y) = c_mu . y`.
    terms: Vec<(Vec<T>, T)>,
}

impl<T: Real> Factor<T> {
    pub fn weights(&self) -> &WeightSystem {
        &self.weights
    }
}

/// A tensor-product problem `{(nu_k, tau_k)}` at scale `epsilon`.
#[derive(Clone, Debug)]
pub struct TensorProblem<T> {
    rs: RootSystem,
    factors: Vec<Factor<T>>,
    epsilon: T,
}

/// `f`, its gradient and Hessian at one point.
#[derive(Clone, Debug)]
pub struct FEval<T> {
    pub value: T,
    pub gradient: Vec<T>,
    pub hessian: Matrix<T>,
}

impl<T: Real> TensorProblem<T> {
    pub fn new(rs: &RootSystem, factors: &[(Weight, T)], epsilon: T) -> Result<Self> {
        if !(epsilon > T::zero()) {
            return Err(Error::Constraint("epsilon must be positive".into()));
        }
        let mut out = Vec::with_capacity(factors.len());
        for (nu, tau) in factors {
            if !(*tau > T::zero()) {
                return Err(Error::Constraint(format!("tau for {nu} must be positive")));
            }
            let weights = weight_multiplicities(rs, nu)?;
            let terms = weights
                .iter()
                .map(|(mu, d)| (rs.pairing_coeffs::<T>(mu), T::lit(d as f64).ln()))
                .collect();
            out.push(Factor { nu: nu.clone(), tau: *tau, weights, terms });
        }
        Ok(Self { rs: rs.clone(), factors: out, epsilon })
    }

    /// Integer powers `N_k`; `epsilon` defaults to `1 / sum_k N_k` and `tau_k = epsilon N_k`.
    pub fn from_powers(rs: &RootSystem, powers: &[(Weight, u64)], epsilon: Option<T>) -> Result<Self> {
        let total: u64 = powers.iter().map(|(_, n)| n).sum();
        let epsilon = match epsilon {
            Some(e) => e,
            None if total > 0 => T::one() / T::lit(total as f64),
            None => return Err(Error::Constraint("empty tensor product".into())),
        };
        let factors: Vec<(Weight, T)> = powers
            .iter()
            .filter(|(_, n)| *n > 0)
            .map(|(nu, n)| (nu.clone(), epsilon * T::lit(*n as f64)))
            .collect();
        Self::new(rs, &factors, epsilon)
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn factors(&self) -> &[Factor<T>] {
        &self.factors
    }

    pub fn epsilon(&self) -> T {
        self.epsilon
    }

    pub fn rank(&self) -> usize {
        self.rs.rank()
    }

    /// `N_k = tau_k / epsilon` when all of them are integral.
    pub fn powers(&self) -> Option<Vec<(Weight, u64)>> {
        self.factors
            .iter()
            .map(|f| {
                let n = (f.tau / self.epsilon).to_f64()?;
                let k = n.round();
                ((n - k).abs() < 1e-9 * n.max(1.0)).then(|| (f.nu.clone(), k as u64))
            })
            .collect()
    }

    /// The same problem with every `tau_k` replaced.
    pub fn with_taus(&self, taus: &[T]) -> Self {
        let mut p = self.clone();
        for (f, &t) in p.factors.iter_mut().zip(taus) {
            f.tau = t;
        }
        p
    }

    /// `f(tau, y)` with gradient and Hessian, from the exact weight systems.
    pub fn f_eval(&self, y: &[T]) -> FEval<T> {
        let r = self.rank();
        let mut value = T::zero();
        let mut gradient = vec![T::zero(); r];
        let mut hessian = Matrix::from_fn(r, r, |_, _| T::zero());
        for f in &self.factors {
            let exps: Vec<T> = f.terms.iter().map(|(c, ld)| dot(c, y) + *ld).collect();
            let lse = log_sum_exp(&exps);
            let probs: Vec<T> = exps.iter().map(|&e| (e - lse).exp()).collect();
            let mut mean = vec![T::zero(); r];
            for ((c, _), &p) in f.terms.iter().zip(&probs) {
                for i in 0..r {
                    mean[i] = mean[i] + p * c[i];
                }
            }
            for ((c, _), &p) in f.terms.iter().zip(&probs) {
                for i in 0..r {
                    let di = c[i] - mean[i];
                    for j in 0..=i {
                        hessian[(i, j)] = hessian[(i, j)] + f.tau * p * di * (c[j] - mean[j]);
                    }
                }
            }
            value = value + f.tau * lse;
            for i in 0..r {
                gradient[i] = gradient[i] + f.tau * mean[i];
            }
        }
        for i in 0..r {
            for j in 0..i {
                hessian[(j, i)] = hessian[(i, j)];
            }
        }
        FEval { value, gradient, hessian }
    }

    pub fn f_value(&self, y: &[T]) -> T {
        self.f_eval(y).value
    }

    /// `S(tau, 0) = f(tau, 0) = sum_k tau_k ln dim V_{nu_k}`.
    pub fn f_at_origin(&self) -> T {
        self.f_value(&vec![T::zero(); self.rank()])
    }

    /// `eta = B^{-1} grad f(tau, t)`.
    pub fn forward_dual(&self, t: &[T]) -> Vec<T> {
        let g = self.f_eval(t).gradient;
        self.rs.weight_to_root_real(&self.symmetrizer_solve(&g))
    }

    /// Solves `diag(d) v = g`, so that `C^{-1} v = B^{-1} g`.
    fn symmetrizer_solve(&self, g: &[T]) -> Vec<T> {
        g.iter().zip(self.rs.symmetrizer_real::<T>()).map(|(&a, d)| a / d).collect()
    }

    fn b_times(&self, v: &[T]) -> Vec<T> {
        self.rs.form_real::<T>().mul_vec(v)
    }

    /// `sum_k tau_k nu_k` in root coordinates; `xi` must lie strictly inside its W-hull.
    pub fn top_root(&self) -> Vec<T> {
        let r = self.rank();
        let mut out = vec![T::zero(); r];
        for f in &self.factors {
            let nu = self.rs.weight_to_root_real(
                &f.nu.coords().iter().map(|&c| T::lit(c as f64)).collect::<Vec<_>>(),
            );
            for i in 0..r {
                out[i] = out[i] + f.tau * nu[i];
            }
        }
        out
    }

    /// Strict interior test for the Legendre domain, `sum tau_k conv(W nu_k)`.
    ///
    /// The Minkowski sum of W-hulls of dominant weights is the W-hull of their sum,
    /// and a dominant point lies in the open hull iff the difference has strictly
    /// positive simple-root coordinates.
    pub fn in_domain(&self, xi: &[T]) -> bool {
        if xi.iter().any(|v| !v.is_finite()) {
            return false;
        }
        let (dom, _) = self.rs.dominant_reflect_real(xi);
        let top = self.top_root();
        let scale = norm(&top).max(T::one());
        let margin = T::lit(64.0) * T::epsilon() * scale;
        top.iter().zip(&dom).all(|(&t, &d)| t - d > margin)
    }

    /// Solves `grad f(tau, x) = B xi` by damped Newton from `x = 0`.
    pub fn legendre_dual(&self, xi: &[T]) -> Result<Vec<T>> {
        let to_f64 = |v: &[T]| v.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect::<Vec<_>>();
        if xi.len() != self.rank() {
            return Err(Error::RankMismatch { rank: self.rank(), got: xi.len() });
        }
        if !self.in_domain(xi) {
            return Err(Error::OutsideLegendreDomain(to_f64(xi)));
        }
        let target = self.b_times(xi);
        let tol = T::solver_tolerance() * norm(&target).max(T::one());
        let objective = |y: &[T], e: &FEval<T>| e.value - dot(y, &target);
        let mut y = vec![T::zero(); self.rank()];
        let mut eval = self.f_eval(&y);
        let mut growth = 0usize;
        let mut last_step = T::infinity();
        let mut residual = T::infinity();
        for _ in 0..MAX_NEWTON_ITERATIONS {
            let grad: Vec<T> = eval.gradient.iter().zip(&target).map(|(&g, &t)| g - t).collect();
            residual = norm(&grad);
            if residual <= tol {
                return Ok(y);
            }
            let chol = Cholesky::new(&eval.hessian).ok_or_else(|| Error::OutsideLegendreDomain(to_f64(xi)))?;
            let step: Vec<T> = chol.solve(&grad).into_iter().map(|v| -v).collect();
            let decrement = -dot(&grad, &step);
            let step_norm = norm(&step);
            growth = if step_norm > last_step { growth + 1 } else { 0 };
            if growth >= 8 || !step_norm.is_finite() {
                return Err(Error::OutsideLegendreDomain(to_f64(xi)));
            }
            last_step = step_norm;

            let current = objective(&y, &eval);
            let mut alpha = T::one();
            let mut accepted = None;
            for _ in 0..60 {
                let trial: Vec<T> = y.iter().zip(&step).map(|(&a, &s)| a + alpha * s).collect();
                let te = self.f_eval(&trial);
                let value = objective(&trial, &te);
                // Near the optimum the decrease drops below rounding; accept full steps there.
                let tiny = decrement < T::lit(1e3) * T::epsilon() * current.abs().max(T::one());
                if value <= current - T::lit(1e-4) * alpha * decrement || (tiny && alpha == T::one()) {
                    accepted = Some((trial, te));
                    break;
                }
                alpha = alpha * T::lit(0.5);
            }
            let Some((trial, te)) = accepted else {
                break;
            };
            y = trial;
            eval = te;
        }
        let grad: Vec<T> = eval.gradient.iter().zip(&target).map(|(&g, &t)| g - t).collect();
        let final_residual = norm(&grad);
        if final_residual <= tol {
            return Ok(y);
        }
        Err(Error::NoConvergence {
            iterations: MAX_NEWTON_ITERATIONS,
            residual: final_residual.min(residual).to_f64().unwrap_or(f64::NAN),
        })
    }

    /// The Legendre pair at `xi` with `S`, its gradient, `D`, `K` and the log-prefactor.
    pub fn rate_point(&self, xi: &[T]) -> Result<RatePoint<T>> {
        let x = self.legendre_dual(xi)?;
        Ok(self.rate_point_at(xi, x, None))
    }

    /// Rate point at `eta = forward_dual(t)`, which needs no Newton solve.
    pub fn rate_point_from_temperature(&self, t: &[T]) -> Result<RatePoint<T>> {
        let eta = self.forward_dual(t);
        Ok(self.rate_point_at(&eta, t.to_vec(), Some(t.to_vec())))
    }

    fn rate_point_at(&self, xi: &[T], x: Vec<T>, eta_of: Option<Vec<T>>) -> RatePoint<T> {
        let r = self.rank();
        let eval = self.f_eval(&x);
        let bx = self.b_times(&x);
        let s = eval.value - dot(&x, &self.b_times(xi));
        let b = self.rs.form_real::<T>();
        let d = eval.hessian;
        let k = match Cholesky::new(&d) {
            Some(ch) => b.mul(&ch.inverse()).mul(&b),
            None => Matrix::from_fn(r, r, |_, _| T::nan()),
        };
        let log_det_k = Cholesky::new(&k).map(|c| c.log_det()).unwrap_or(T::nan());
        let rho_x: T = self.rs.symmetrizer_real::<T>().iter().zip(&x).map(|(&d, &v)| d * v).sum();
        let ln_delta = weyl_denominator(&self.rs, &x).ln_abs;
        let half_r = T::lit(r as f64 / 2.0);
        let log_prefactor = T::lit(0.5) * log_det_k - half_r * (T::PI() + T::PI()).ln() + ln_delta - rho_x;
        RatePoint {
            xi: xi.to_vec(),
            x,
            s,
            grad_s: bx.into_iter().map(|v| -v).collect(),
            d,
            k,
            log_prefactor,
            eta_of,
        }
    }

    /// Natural log of the asymptotic estimate for `m_lambda` at `xi = epsilon lambda`.
    pub fn asymptotic_log_multiplicity(&self, lambda: &Weight) -> Result<T> {
        lambda.check_rank(self.rank())?;
        let xi = self.scaled_root(lambda);
        self.check_regular(&xi)?;
        let rp = self.rate_point(&xi)?;
        let half_r = T::lit(self.rank() as f64 / 2.0);
        Ok(rp.s / self.epsilon + rp.log_prefactor + half_r * self.epsilon.ln())
    }

    /// `epsilon * lambda` in root coordinates.
    pub fn scaled_root(&self, lambda: &Weight) -> Vec<T> {
        let w: Vec<T> = lambda.coords().iter().map(|&c| T::lit(c as f64) * self.epsilon).collect();
        self.rs.weight_to_root_real(&w)
    }

    pub fn check_regular(&self, xi: &[T]) -> Result<()> {
        if self.rs.is_regular_real(xi) {
            Ok(())
        } else {
            Err(Error::NonRegular(xi.iter().map(|v| v.to_f64().unwrap_or(f64::NAN)).collect()))
        }
    }

    /// `x_scalar = sum_k tau_k c_2(nu_k) / dim g` and `max |D(0) - x_scalar B|`.
    pub fn hessian_at_origin(&self) -> (T, T) {
        let r = self.rank();
        let dim_g = T::lit(self.rs.dim_g() as f64);
        let x_scalar: T = self
            .factors
            .iter()
            .map(|f| f.tau * T::from_rational(&self.rs.casimir(&f.nu)) / dim_g)
            .sum();
        let d0 = self.f_eval(&vec![T::zero(); r]).hessian;
        let b = self.rs.form_real::<T>();
        let residual = d0.sub(&b.scale(&x_scalar)).max_abs();
        (x_scalar, residual)
    }

    pub fn x_scalar(&self) -> T {
        self.hessian_at_origin().0
    }
}

/// The Legendre pair `(xi, x)` and the asymptotic data at that point.
#[derive(Clone, Debug, Serialize)]
#[serde(bound = "T: Serialize + Clone")]
pub struct RatePoint<T> {
    pub xi: Vec<T>,
    pub x: Vec<T>,
    #[serde(rename = "S")]
    pub s: T,
    #[serde(rename = "grad_S")]
    pub grad_s: Vec<T>,
    #[serde(rename = "D")]
    pub d: Matrix<T>,
    #[serde(rename = "K")]
    pub k: Matrix<T>,
    /// `ln mu(tau, xi)` without the `epsilon^{r/2}` factor; `-inf` at `x = 0`.
    pub log_prefactor: T,
    /// The temperature `t` when `xi` was produced as `forward_dual(t)`.
    pub eta_of: Option<Vec<T>>,
}

impl<T: Real> RatePoint<T> {
    pub fn det_k(&self) -> T {
        self.k.determinant()
    }
}
