//! Character values `chi_lambda(e^t)` at real Cartan elements, in log form.

use crate::error::{Error, Result};
use crate::logspace::{log_sum_exp, signed_log_sum_exp, LogValue};
use crate::rootsys::{RootSystem, DEFAULT_WEYL_CAP};
use crate::scalar::Real;
use crate::weight::Weight;

use super::freudenthal::{weight_multiplicities, weyl_dimension, WeightSystem};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CharacterMethod {
    /// `sum_mu d_mu e^{(mu, t)}` over the full weight system.
    WeightSum,
    /// Alternating Weyl sum divided by the Weyl denominator; needs regular `t`.
    WeylQuotient,
}

/// `chi_lambda(e^t)` for root-basis `t`, as a certified-positive log value.
pub fn character_value<T: Real>(
    rs: &RootSystem,
    lambda: &Weight,
    t: &[T],
    method: CharacterMethod,
) -> Result<LogValue<T>> {
    match method {
        CharacterMethod::WeightSum => {
            let ws = weight_multiplicities(rs, lambda)?;
            Ok(weight_sum(rs, &ws, t))
        }
        CharacterMethod::WeylQuotient => {
            let q = WeylQuotient::new(rs, t, DEFAULT_WEYL_CAP)?;
            q.character(lambda)
        }
    }
}

/// Character from an explicit weight system.
pub fn weight_sum<T: Real>(rs: &RootSystem, ws: &WeightSystem, t: &[T]) -> LogValue<T> {
    let coeffs: Vec<T> = rs
        .symmetrizer_real::<T>()
        .iter()
        .zip(t)
        .map(|(&d, &ti)| d * ti)
        .collect();
    signed_log_sum_exp(ws.iter().map(|(mu, m)| {
        let e: T = mu.coords().iter().zip(&coeffs).map(|(&c, &k)| T::lit(c as f64) * k).sum();
        (e + T::lit(m as f64).ln(), 1)
    }))
}

/// `ln dim V_lambda`, the character at `t = 0`.
pub fn ln_dimension(rs: &RootSystem, lambda: &Weight) -> Result<f64> {
    Ok(crate::logspace::ln_biguint(&weyl_dimension(rs, lambda)?))
}

/// `ln |Delta(x)|` and its sign, `Delta(x) = prod_{alpha>0} 2 sinh((x, alpha)/2)`.
pub fn weyl_denominator<T: Real>(rs: &RootSystem, x: &[T]) -> LogValue<T> {
    let half = T::lit(0.5);
    let mut out = LogValue::from_ln(T::zero());
    for p in rs.root_pairings_real(x) {
        out = out.mul(two_sinh(p * half));
    }
    out
}

/// `2 sinh(y)` in log form without overflow.
pub fn two_sinh<T: Real>(y: T) -> LogValue<T> {
    if y == T::zero() {
        return LogValue::zero();
    }
    let a = y.abs();
    let ln_abs = a + (-(-(a + a)).exp()).ln_1p();
    LogValue { ln_abs, sign: if y > T::zero() { 1 } else { -1 } }
}

/// Precomputed Weyl-quotient evaluator at a fixed regular `t`.
///
/// Holds `d * w(t)` for every Weyl group element so each character costs `|W| r`.
#[derive(Clone, Debug)]
pub struct WeylQuotient<T> {
    t: Vec<T>,
    images: Vec<(Vec<T>, i8)>,
    denominator: LogValue<T>,
}

impl<T: Real> WeylQuotient<T> {
    pub fn new(rs: &RootSystem, t: &[T], cap: usize) -> Result<Self> {
        if !is_regular(rs, t) {
            return Err(Error::DenominatorVanishes);
        }
        let d = rs.symmetrizer_real::<T>();
        let images = rs
            .enumerate_weyl_group(cap)?
            .iter()
            .map(|w| {
                let wt = w.apply_root(t);
                (wt.iter().zip(&d).map(|(&a, &b)| a * b).collect(), w.parity)
            })
            .collect();
        let denominator = weyl_denominator(rs, t);
        Ok(Self { t: t.to_vec(), images, denominator })
    }

    pub fn character(&self, lambda: &Weight) -> Result<LogValue<T>> {
        Ok(self.character_conditioned(lambda)?.0)
    }

    /// The character and `ln` of the condition number `sum |terms| / |sum|` of the
    /// alternating numerator; relative error is about machine epsilon times that.
    pub fn character_conditioned(&self, lambda: &Weight) -> Result<(LogValue<T>, T)> {
        let lr: Vec<T> = lambda.coords().iter().map(|&c| T::lit((c + 1) as f64)).collect();
        let exps: Vec<T> = self.images.iter().map(|(c, _)| lr.iter().zip(c).map(|(&a, &b)| a * b).sum()).collect();
        let num = signed_log_sum_exp(exps.iter().zip(&self.images).map(|(&e, (_, s))| (e, *s)));
        let chi = num.div(self.denominator);
        if chi.sign != 1 {
            return Err(Error::Internal(format!("non-positive character value at {lambda}")));
        }
        Ok((chi, log_sum_exp(&exps) - num.ln_abs))
    }
}

/// Regularity of `t`: `|(t, alpha)| > tol * |t|` for every positive root.
pub fn is_regular<T: Real>(rs: &RootSystem, t: &[T]) -> bool {
    rs.is_regular_real(t)
}

/// Above this log condition number the quotient gives way to the weight sum, which
/// has no cancellation.
const MAX_LN_CONDITION: f64 = 6.9;

/// Evaluates many characters at one `t`, choosing the cheapest valid route.
#[derive(Clone, Debug)]
pub enum CharacterEvaluator<T> {
    Dimension,
    Quotient(WeylQuotient<T>),
    WeightSum(Vec<T>),
}

impl<T: Real> CharacterEvaluator<T> {
    pub fn new(rs: &RootSystem, t: &[T]) -> Result<Self> {
        if t.iter().all(|&v| v == T::zero()) {
            Ok(Self::Dimension)
        } else if is_regular(rs, t) && rs.weyl_group_order() <= DEFAULT_WEYL_CAP as u128 {
            Ok(Self::Quotient(WeylQuotient::new(rs, t, DEFAULT_WEYL_CAP)?))
        } else {
            Ok(Self::WeightSum(t.to_vec()))
        }
    }

    pub fn ln_character(&self, rs: &RootSystem, lambda: &Weight) -> Result<T> {
        match self {
            Self::Dimension => Ok(T::lit(ln_dimension(rs, lambda)?)),
            Self::Quotient(q) => {
                let (chi, ln_cond) = q.character_conditioned(lambda)?;
                if ln_cond <= T::lit(MAX_LN_CONDITION) {
                    Ok(chi.ln_abs)
                } else {
                    Ok(weight_sum(rs, &weight_multiplicities(rs, lambda)?, &q.t).ln_abs)
                }
            }
            Self::WeightSum(t) => {
                let ws = weight_multiplicities(rs, lambda)?;
                Ok(weight_sum(rs, &ws, t).ln_abs)
            }
        }
    }
}
