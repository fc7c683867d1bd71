//! Limit densities of the rescaled character measures.
//!
//! Points are simple-root coordinate vectors. The Gaussian law lives on all of
//! `R^r`; the Plancherel and intermediate laws live on the closed dominant chamber.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Cholesky, Matrix};
use crate::logspace::{signed_log_sum_exp, LogValue};
use crate::rootsys::{RootSystem, DEFAULT_WEYL_CAP};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LimitKind {
    Gaussian,
    Plancherel,
    Intermediate,
}

impl std::str::FromStr for LimitKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gaussian" => Ok(Self::Gaussian),
            "plancherel" => Ok(Self::Plancherel),
            "intermediate" => Ok(Self::Intermediate),
            _ => Err(Error::Parse(format!("unknown limit law {s:?}"))),
        }
    }
}

/// A normalized limit density together with the data needed to evaluate it.
#[derive(Clone, Debug)]
pub enum LimitDensity<T> {
    /// `sqrt(det K) / (2 pi)^{r/2} exp(-a^T K a / 2)`.
    Gaussian { k: Matrix<T>, log_norm: T },
    /// `sqrt(det B) / (2 pi)^{r/2} prod (a, alpha)^2 / (rho, alpha) exp(-a^T B a / 2)` on the chamber.
    Plancherel { rs: RootSystem, geo: Geometry<T>, log_norm: T },
    /// The `p(b, u)` family interpolating between the two.
    Intermediate { rs: RootSystem, geo: Geometry<T>, u: Vec<T>, images: Vec<(Vec<T>, i8)>, log_norm: T },
}

/// Real copies of `B`, `C` and the vectors `B alpha`, cached for fast evaluation.
#[derive(Clone, Debug)]
pub struct Geometry<T> {
    form: Matrix<T>,
    cartan: Matrix<T>,
    root_vectors: Vec<Vec<T>>,
}

impl<T: Real> Geometry<T> {
    fn new(rs: &RootSystem) -> Self {
        let form = rs.form_real::<T>();
        let root_vectors = rs
            .positive_roots()
            .iter()
            .map(|a| form.mul_vec(&a.iter().map(|&c| T::lit(c as f64)).collect::<Vec<_>>()))
            .collect();
        Self { form, cartan: rs.cartan().map(|&c| T::lit(c as f64)), root_vectors }
    }

    fn in_chamber(&self, a: &[T]) -> bool {
        self.cartan.mul_vec(a).iter().all(|&w| w >= T::zero())
    }

    fn pairings<'a>(&'a self, a: &'a [T]) -> impl Iterator<Item = T> + 'a {
        self.root_vectors.iter().map(move |v| v.iter().zip(a).map(|(&x, &y)| x * y).sum())
    }
}

impl<T: Real> LimitDensity<T> {
    pub fn gaussian(k: Matrix<T>) -> Result<Self> {
        let r = k.rows();
        let ch = Cholesky::new(&k)
            .ok_or_else(|| Error::Constraint("K must be symmetric positive definite".into()))?;
        let log_norm = T::lit(0.5) * ch.log_det() - half::<T>(r) * two_pi::<T>().ln();
        Ok(Self::Gaussian { k, log_norm })
    }

    pub fn plancherel(rs: &RootSystem) -> Self {
        let r = rs.rank();
        let log_det_b = Cholesky::new(&rs.form_real::<T>()).expect("B is positive definite").log_det();
        let log_rho: T = rs.rho_pairings().iter().map(|q| T::from_rational(q).ln()).sum();
        let log_norm = T::lit(0.5) * log_det_b - half::<T>(r) * two_pi::<T>().ln() - log_rho;
        Self::Plancherel { rs: rs.clone(), geo: Geometry::new(rs), log_norm }
    }

    /// Requires regular `u`; walls are the Plancherel limit.
    pub fn intermediate(rs: &RootSystem, u: &[T]) -> Result<Self> {
        if !rs.is_regular_real(u) {
            return Err(Error::UsePlancherel(u.iter().map(|v| v.to_f64().unwrap_or(f64::NAN)).collect()));
        }
        let r = rs.rank();
        let b = rs.form_real::<T>();
        let images = rs
            .enumerate_weyl_group(DEFAULT_WEYL_CAP)?
            .iter()
            .map(|w| (b.mul_vec(&w.apply_root(u)), w.parity))
            .collect();
        let log_det_b = Cholesky::new(&b).expect("B is positive definite").log_det();
        let log_u = rs.root_pairings_real(u).iter().fold(LogValue::from_ln(T::zero()), |acc, &p| {
            acc.mul(LogValue::from_value(p))
        });
        let uu = b.bilinear(u, u);
        // The sign of prod (u, alpha) is absorbed by the alternating sum below.
        let log_norm = T::lit(0.5) * log_det_b - half::<T>(r) * two_pi::<T>().ln() - log_u.ln_abs - T::lit(0.5) * uu;
        let sign_u = log_u.sign;
        let images = if sign_u < 0 {
            let v: Vec<(Vec<T>, i8)> = images;
            v.into_iter().map(|(c, s)| (c, -s)).collect()
        } else {
            images
        };
        Ok(Self::Intermediate { rs: rs.clone(), geo: Geometry::new(rs), u: u.to_vec(), images, log_norm })
    }

    pub fn kind(&self) -> LimitKind {
        match self {
            Self::Gaussian { .. } => LimitKind::Gaussian,
            Self::Plancherel { .. } => LimitKind::Plancherel,
            Self::Intermediate { .. } => LimitKind::Intermediate,
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            Self::Gaussian { k, .. } => k.rows(),
            Self::Plancherel { rs, .. } | Self::Intermediate { rs, .. } => rs.rank(),
        }
    }

    /// True for the laws supported on the dominant chamber.
    pub fn chambered(&self) -> bool {
        !matches!(self, Self::Gaussian { .. })
    }

    /// Natural log of the density at `a`; `-inf` off the support.
    pub fn ln_density(&self, a: &[T]) -> T {
        match self {
            Self::Gaussian { k, log_norm } => *log_norm - T::lit(0.5) * k.bilinear(a, a),
            Self::Plancherel { geo, log_norm, .. } => {
                if !geo.in_chamber(a) {
                    return T::neg_infinity();
                }
                let vand: T = geo.pairings(a).map(|p| (p * p).ln()).sum();
                *log_norm + vand - T::lit(0.5) * geo.form.bilinear(a, a)
            }
            Self::Intermediate { geo, images, log_norm, .. } => {
                if !geo.in_chamber(a) {
                    return T::neg_infinity();
                }
                let vand: T = geo.pairings(a).map(|p| p.ln()).sum();
                let exps: Vec<T> = images.iter().map(|(bu, _)| bu.iter().zip(a).map(|(&x, &y)| x * y).sum()).collect();
                let reach = exps.iter().fold(T::zero(), |m, e| m.max(e.abs()));
                let alt = if reach < T::lit(SERIES_REACH) {
                    LogValue::from_value(alternating_series(&exps, images, geo.root_vectors.len()))
                } else {
                    signed_log_sum_exp(exps.iter().zip(images).map(|(&e, (_, s))| (e, *s)))
                };
                if alt.sign <= 0 {
                    return T::neg_infinity();
                }
                *log_norm + vand + alt.ln_abs - T::lit(0.5) * geo.form.bilinear(a, a)
            }
        }
    }

    pub fn density(&self, a: &[T]) -> T {
        self.ln_density(a).exp()
    }
}

/// Below this `max_w |(w u, a)|` the alternating sum is summed as a power series.
const SERIES_REACH: f64 = 0.5;

/// `sum_w sgn(w) exp(c_w)` by Taylor expansion. Every degree below the number of
/// positive roots vanishes identically, so those terms are skipped instead of being
/// left to cancel in floating point.
fn alternating_series<T: Real>(exps: &[T], images: &[(Vec<T>, i8)], first: usize) -> T {
    let mut fact = T::one();
    for k in 1..=first {
        fact = fact * T::lit(k as f64);
    }
    let mut powers: Vec<T> = exps.iter().map(|&c| c.powi(first as i32) / fact).collect();
    let mut total = T::zero();
    for k in first.. {
        let term: T = powers.iter().zip(images).map(|(&p, (_, s))| if *s > 0 { p } else { -p }).sum();
        total = total + term;
        let bound: T = powers.iter().map(|p| p.abs()).sum();
        if bound <= T::epsilon() * total.abs() * T::lit(1e-2) || bound == T::zero() {
            break;
        }
        let next = T::lit((k + 1) as f64);
        for (p, &c) in powers.iter_mut().zip(exps) {
            *p = *p * c / next;
        }
    }
    total
}

impl LimitDensity<f64> {
    /// A root-coordinate box holding all but a negligible tail of the law.
    ///
    /// `sigmas` is the half-width in units of the per-coordinate standard deviation
    /// (Gaussian) or of the unit scale (chambered laws, which start at the origin).
    pub fn support_box(&self, sigmas: f64) -> (Vec<f64>, Vec<f64>) {
        let r = self.rank();
        match self {
            Self::Gaussian { k, .. } => {
                let cov = Cholesky::new(k).expect("K is positive definite").inverse();
                let half: Vec<f64> = (0..r).map(|i| sigmas * cov[(i, i)].sqrt()).collect();
                (half.iter().map(|h| -h).collect(), half)
            }
            Self::Plancherel { .. } => (vec![0.0; r], vec![sigmas; r]),
            Self::Intermediate { rs, u, .. } => {
                let (dom, _) = rs.dominant_reflect_real(u);
                (vec![0.0; r], dom.iter().map(|c| sigmas + c.abs()).collect())
            }
        }
    }

    /// Total mass by quadrature with twelve scale units of support.
    ///
    /// Chambered laws are integrated in fundamental-weight coordinates, where the
    /// chamber is the positive orthant and the integrand stays smooth.
    pub fn total_mass(&self, tol: f64) -> f64 {
        let (lo, hi) = self.support_box(12.0);
        match self {
            Self::Gaussian { .. } => crate::quadrature::integrate_region(&|a| self.density(a), &lo, &hi, tol),
            Self::Plancherel { rs, .. } | Self::Intermediate { rs, .. } => {
                let jac = rs.cartan_inverse().determinant();
                let jac = (*jac.numer() as f64 / *jac.denom() as f64).abs();
                let hi_w: Vec<f64> = rs.root_to_weight_real(&hi).iter().map(|v| v.abs()).collect();
                let top = hi_w.iter().cloned().fold(0.0, f64::max);
                let f = |w: &[f64]| self.density(&rs.weight_to_root_real(w)) * jac;
                crate::quadrature::integrate_region(&f, &vec![0.0; lo.len()], &vec![top; lo.len()], tol)
            }
        }
    }
}

/// Convenience wrapper over [`LimitDensity`].
pub fn limit_density<T: Real>(law: &LimitDensity<T>, point: &[T]) -> T {
    law.density(point)
}

/// `(a, alpha_i) >= 0` for every simple root.
pub fn in_closed_chamber<T: Real>(rs: &RootSystem, a: &[T]) -> bool {
    rs.root_to_weight_real(a).iter().all(|&w| w >= T::zero())
}

fn half<T: Real>(r: usize) -> T {
    T::lit(r as f64 / 2.0)
}

fn two_pi<T: Real>() -> T {
    T::PI() + T::PI()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a1_plancherel_closed_form() {
        let rs = RootSystem::from_name("A1").unwrap();
        let p = LimitDensity::<f64>::plancherel(&rs);
        for a in [0.1, 0.7, 1.3, 2.9] {
            let expected = 4.0 / std::f64::consts::PI.sqrt() * a * a * (-a * a).exp();
            assert!((p.density(&[a]) - expected).abs() < 1e-14);
        }
        assert_eq!(p.density(&[-0.5]), 0.0);
        assert_eq!(p.density(&[0.0]), 0.0);
    }

    #[test]
    fn a1_intermediate_approaches_plancherel() {
        let rs = RootSystem::from_name("A1").unwrap();
        let pl = LimitDensity::<f64>::plancherel(&rs);
        let q = LimitDensity::intermediate(&rs, &[1e-4]).unwrap();
        for b in [0.2, 0.9, 1.7] {
            assert!((q.density(&[b]) - pl.density(&[b])).abs() < 1e-6);
        }
        let u = 0.8;
        let q = LimitDensity::intermediate(&rs, &[u]).unwrap();
        let b: f64 = 1.1;
        let expected = (b / u) * 2.0 * (2.0 * b * u).sinh() * (-b * b - u * u).exp() / std::f64::consts::PI.sqrt();
        assert!((q.density(&[b]) - expected).abs() < 1e-14);
        assert!(matches!(LimitDensity::<f64>::intermediate(&rs, &[0.0]), Err(Error::UsePlancherel(_))));
    }

    #[test]
    fn small_u_does_not_cancel() {
        for name in ["A2", "B2", "G2"] {
            let rs = RootSystem::from_name(name).unwrap();
            let pl = LimitDensity::<f64>::plancherel(&rs);
            let u = rs.weight_to_root_real(&[1e-5, 1.3e-5]);
            let q = LimitDensity::intermediate(&rs, &u).unwrap();
            for w in [[0.3, 0.4], [1.0, 0.2], [0.7, 1.5]] {
                let b = rs.weight_to_root_real(&w);
                assert!((q.density(&b) - pl.density(&b)).abs() < 1e-8, "{name} {w:?}");
            }
            // both evaluation routes agree where they meet
            let u = rs.weight_to_root_real(&[0.2, 0.1]);
            let q = LimitDensity::intermediate(&rs, &u).unwrap();
            let b0 = rs.weight_to_root_real(&[0.5, 0.4]);
            let reach = |b: &[f64]| {
                let LimitDensity::Intermediate { images, .. } = &q else { unreachable!() };
                images.iter().map(|(bu, _)| bu.iter().zip(b).map(|(x, y)| x * y).sum::<f64>().abs()).fold(0.0, f64::max)
            };
            let c = SERIES_REACH / reach(&b0);
            let lo: Vec<f64> = b0.iter().map(|v| v * c * (1.0 - 1e-9)).collect();
            let hi: Vec<f64> = b0.iter().map(|v| v * c * (1.0 + 1e-9)).collect();
            let (dl, dh) = (q.density(&lo), q.density(&hi));
            assert!((dl - dh).abs() < 1e-7 * dl, "{name}: {dl} {dh}");
        }
    }

    #[test]
    fn normalizations() {
        let a1 = RootSystem::from_name("A1").unwrap();
        let a2 = RootSystem::from_name("A2").unwrap();
        let g = LimitDensity::gaussian(Matrix::from_rows(&[vec![3.0, 1.0], vec![1.0, 2.0]])).unwrap();
        assert!((g.total_mass(1e-10) - 1.0).abs() < 1e-8);
        assert!((LimitDensity::<f64>::plancherel(&a1).total_mass(1e-10) - 1.0).abs() < 1e-8);
        assert!((LimitDensity::<f64>::plancherel(&a2).total_mass(1e-10) - 1.0).abs() < 1e-8);
        let q = LimitDensity::intermediate(&a2, &[0.7, 0.4]).unwrap();
        assert!((q.total_mass(1e-10) - 1.0).abs() < 1e-8);
    }

    #[test]
    fn intermediate_is_insensitive_to_u_chamber() {
        let rs = RootSystem::from_name("A2").unwrap();
        let u = [0.3, 0.5];
        let q = LimitDensity::<f64>::intermediate(&rs, &u).unwrap();
        for w in rs.enumerate_weyl_group(10).unwrap() {
            let qw = LimitDensity::intermediate(&rs, &w.apply_root(&u)).unwrap();
            assert!((qw.density(&[0.4, 0.6]) - q.density(&[0.4, 0.6])).abs() < 1e-13);
        }
    }
}
