//! Type-A closed forms used as independent oracles: the hook length formula, the
//! explicit rate function and Legendre dual for `sl(n+1)` with `V = C^{n+1}`, and
//! Kerov's limit density.
//!
//! Throughout, `sigma_i = tau/(n+1) + xi_i - xi_{i-1}` with `xi_0 = xi_{n+1} = 0`.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::weight::Weight;

/// A partition `l_1 >= ... >= l_k >= 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    parts: Vec<u64>,
}

impl Partition {
    pub fn new(parts: impl Into<Vec<u64>>) -> Result<Self> {
        let parts = parts.into();
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(parts));
        }
        Ok(Self { parts })
    }

    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    pub fn size(&self) -> u64 {
        self.parts.iter().sum()
    }

    /// Parts padded with zeros to length `n + 1`.
    fn padded(&self, n: usize) -> Result<Vec<u64>> {
        let nonzero = self.parts.iter().filter(|&&p| p > 0).count();
        if nonzero > n + 1 {
            return Err(Error::InvalidPartition(self.parts.clone()));
        }
        let mut l: Vec<u64> = self.parts.iter().copied().filter(|&p| p > 0).collect();
        l.resize(n + 1, 0);
        Ok(l)
    }

    /// Dominant `A_n` weight `lambda_a = l_a - l_{a+1}`.
    pub fn to_weight(&self, n: usize) -> Result<Weight> {
        let l = self.padded(n)?;
        Ok(Weight::new((0..n).map(|a| (l[a] - l[a + 1]) as i64).collect::<Vec<_>>()))
    }

    /// The partition of `total` boxes whose `A_n` weight is `lambda`, if one exists.
    pub fn from_weight(lambda: &Weight, total: u64) -> Option<Self> {
        lambda.check_dominant().ok()?;
        let n = lambda.rank();
        let weighted: u64 = lambda.coords().iter().enumerate().map(|(a, &c)| (a as u64 + 1) * c as u64).sum();
        let rest = total.checked_sub(weighted)?;
        if rest % (n as u64 + 1) != 0 {
            return None;
        }
        let base = rest / (n as u64 + 1);
        let parts = (0..=n)
            .map(|i| base + lambda.coords()[i..].iter().map(|&c| c as u64).sum::<u64>())
            .collect::<Vec<_>>();
        Some(Self { parts })
    }
}

/// `m = N! prod_{i<j}(l_i - l_j - i + j) / prod_i (l_i + n + 1 - i)!`.
pub fn hook_multiplicity(n: usize, partition: &Partition) -> Result<BigUint> {
    let l = partition.padded(n)?;
    let size = partition.size();
    let mut num = factorial(size);
    for i in 0..=n {
        for j in i + 1..=n {
            num *= BigInt::from(l[i] as i64 - l[j] as i64 + (j - i) as i64);
        }
    }
    let mut den = BigInt::one();
    for (i, &li) in l.iter().enumerate() {
        den *= factorial(li + (n - i) as u64);
    }
    let (q, r) = (&num / &den, &num % &den);
    if !r.is_zero() || q.is_negative() {
        return Err(Error::Internal(format!("hook formula not integral for {:?}", partition.parts)));
    }
    Ok(q.to_biguint().expect("checked sign"))
}

fn factorial(k: u64) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// `S(tau, sigma) = tau ln tau - sum sigma_i ln sigma_i`, with `0 ln 0 = 0`.
pub fn sln_rate(tau: f64, sigma: &[f64]) -> Result<f64> {
    if !(tau > 0.0) || sigma.iter().any(|&s| !(s >= 0.0)) {
        return Err(Error::Constraint("sigma must be nonnegative and tau positive".into()));
    }
    let total: f64 = sigma.iter().sum();
    if (total - tau).abs() > 1e-12 * tau.max(1.0) {
        return Err(Error::Constraint(format!("sum of sigma is {total}, expected {tau}")));
    }
    let ent: f64 = sigma.iter().filter(|&&s| s > 0.0).map(|s| s * s.ln()).sum();
    Ok(tau * tau.ln() - ent)
}

pub fn sigma_from_xi(tau: f64, xi: &[f64]) -> Vec<f64> {
    let n = xi.len();
    let base = tau / (n as f64 + 1.0);
    (0..=n)
        .map(|i| {
            let cur = if i < n { xi[i] } else { 0.0 };
            let prev = if i > 0 { xi[i - 1] } else { 0.0 };
            base + cur - prev
        })
        .collect()
}

/// Inverse of [`sigma_from_xi`]: `xi_k = sum_{i<=k} (sigma_i - tau/(n+1))`.
pub fn xi_from_sigma(sigma: &[f64]) -> Vec<f64> {
    let tau: f64 = sigma.iter().sum();
    let base = tau / sigma.len() as f64;
    let mut acc = 0.0;
    sigma[..sigma.len() - 1]
        .iter()
        .map(|s| {
            acc += s - base;
            acc
        })
        .collect()
}

fn checked_sigma(tau: f64, xi: &[f64]) -> Result<Vec<f64>> {
    let sigma = sigma_from_xi(tau, xi);
    if sigma.iter().any(|&s| !(s > 0.0)) {
        return Err(Error::OutsideLegendreDomain(xi.to_vec()));
    }
    Ok(sigma)
}

/// Closed-form dual point: `x_k = k ln(chi/tau) + sum_{i<=k} ln sigma_i`
/// with `chi = tau / (prod sigma)^{1/(n+1)}`.
pub fn sln_legendre_closed_form(n: usize, tau: f64, xi: &[f64]) -> Result<Vec<f64>> {
    if xi.len() != n {
        return Err(Error::RankMismatch { rank: n, got: xi.len() });
    }
    let sigma = checked_sigma(tau, xi)?;
    let mean_ln = sigma.iter().map(|s| s.ln()).sum::<f64>() / (n as f64 + 1.0);
    let ln_chi_over_tau = -mean_ln;
    let mut acc = 0.0;
    Ok((0..n)
        .map(|k| {
            acc += sigma[k].ln();
            (k as f64 + 1.0) * ln_chi_over_tau + acc
        })
        .collect())
}

/// `det K = tau / prod sigma_i`.
pub fn sln_det_k(tau: f64, xi: &[f64]) -> Result<f64> {
    Ok(tau / checked_sigma(tau, xi)?.iter().product::<f64>())
}

/// Log of the prefactor `(2 pi)^{-n/2} tau^{1/2} prod_{i<j} |sigma_i - sigma_j|
/// prod_i sigma_i^{-n+i-3/2}` of the type-A multiplicity asymptotic.
pub fn type_a_log_prefactor(n: usize, tau: f64, xi: &[f64]) -> Result<f64> {
    let sigma = checked_sigma(tau, xi)?;
    let mut out = -(n as f64) / 2.0 * (2.0 * std::f64::consts::PI).ln() + 0.5 * tau.ln();
    for i in 0..=n {
        for j in i + 1..=n {
            out += (sigma[i] - sigma[j]).abs().ln();
        }
        out += (-(n as f64) + (i as f64 + 1.0) - 1.5) * sigma[i].ln();
    }
    Ok(out)
}

/// `ln (1! 2! ... n!)`.
fn ln_superfactorial(n: usize) -> f64 {
    (1..=n).map(|k| factorial(k as u64).to_f64().unwrap_or(f64::INFINITY).ln()).sum()
}

/// Kerov's density on `{a_1 >= ... >= a_{n+1}, sum a = 0}`, normalized against
/// `da_1 ... da_n`; zero off the ordered region.
pub fn kerov_density(n: usize, tau: f64, a: &[f64]) -> Result<f64> {
    if a.len() != n + 1 {
        return Err(Error::RankMismatch { rank: n + 1, got: a.len() });
    }
    let sum: f64 = a.iter().sum();
    let scale = a.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    if sum.abs() > 1e-9 * scale {
        return Err(Error::Constraint(format!("coordinates sum to {sum}, expected 0")));
    }
    if a.windows(2).any(|w| w[0] < w[1]) {
        return Ok(0.0);
    }
    let m = n as f64 + 1.0;
    let mut ln = -(n as f64) / 2.0 * (2.0 * std::f64::consts::PI).ln() - ln_superfactorial(n)
        + (1.0 - m * m) / 2.0 * tau.ln()
        + m * m / 2.0 * m.ln();
    for i in 0..=n {
        for j in i + 1..=n {
            let d = a[i] - a[j];
            if d == 0.0 {
                return Ok(0.0);
            }
            ln += 2.0 * d.abs().ln();
        }
    }
    ln -= m / (2.0 * tau) * a.iter().map(|v| v * v).sum::<f64>();
    Ok(ln.exp())
}

/// Maps the scaled root coordinates `A` of the Plancherel limit to Kerov's
/// coordinates: `a_i = sqrt(x) (A_i - A_{i-1})`, `x = tau/(n+1)`, `A_0 = A_{n+1} = 0`.
/// The map has Jacobian `x^{n/2}` against `da_1 ... da_n`, so the Plancherel
/// density at `A` equals `kerov_density(a) x^{n/2}`.
pub fn kerov_from_root(tau: f64, root: &[f64]) -> Vec<f64> {
    let n = root.len();
    let s = (tau / (n as f64 + 1.0)).sqrt();
    (0..=n)
        .map(|i| {
            let cur = if i < n { root[i] } else { 0.0 };
            let prev = if i > 0 { root[i - 1] } else { 0.0 };
            s * (cur - prev)
        })
        .collect()
}
