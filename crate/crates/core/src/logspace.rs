//! Log-domain arithmetic: signed log-sum-exp, big-integer logarithms, compensated sums.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::ToPrimitive;

use crate::scalar::Real;

/// A real number stored as `sign * exp(ln_abs)`; `sign == 0` encodes exact zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogValue<T> {
    pub ln_abs: T,
    pub sign: i8,
}

impl<T: Real> LogValue<T> {
    pub fn zero() -> Self {
        Self { ln_abs: T::neg_infinity(), sign: 0 }
    }

    pub fn from_ln(ln_abs: T) -> Self {
        Self { ln_abs, sign: 1 }
    }

    pub fn from_value(v: T) -> Self {
        if v == T::zero() {
            Self::zero()
        } else {
            Self { ln_abs: v.abs().ln(), sign: if v > T::zero() { 1 } else { -1 } }
        }
    }

    pub fn value(&self) -> T {
        T::lit(f64::from(self.sign)) * self.ln_abs.exp()
    }

    pub fn mul(self, rhs: Self) -> Self {
        if self.sign == 0 || rhs.sign == 0 {
            return Self::zero();
        }
        Self { ln_abs: self.ln_abs + rhs.ln_abs, sign: self.sign * rhs.sign }
    }

    pub fn div(self, rhs: Self) -> Self {
        assert!(rhs.sign != 0, "division by zero in log domain");
        if self.sign == 0 {
            return Self::zero();
        }
        Self { ln_abs: self.ln_abs - rhs.ln_abs, sign: self.sign * rhs.sign }
    }
}

/// `ln sum_i s_i exp(l_i)` with a max-shift per sign class.
pub fn signed_log_sum_exp<T: Real>(terms: impl IntoIterator<Item = (T, i8)>) -> LogValue<T> {
    let mut pos: Vec<T> = Vec::new();
    let mut neg: Vec<T> = Vec::new();
    for (l, s) in terms {
        match s {
            1 => pos.push(l),
            -1 => neg.push(l),
            _ => {}
        }
    }
    let p = log_sum_exp(&pos);
    let n = log_sum_exp(&neg);
    match (p.is_finite(), n.is_finite()) {
        (false, false) => LogValue::zero(),
        (true, false) => LogValue::from_ln(p),
        (false, true) => LogValue { ln_abs: n, sign: -1 },
        (true, true) => {
            if p == n {
                return LogValue::zero();
            }
            let (hi, lo, sign) = if p > n { (p, n, 1) } else { (n, p, -1) };
            LogValue { ln_abs: hi + (-(lo - hi).exp()).ln_1p(), sign }
        }
    }
}

/// `ln sum_i exp(l_i)`; `-inf` for an empty slice.
pub fn log_sum_exp<T: Real>(ls: &[T]) -> T {
    let m = ls.iter().copied().fold(T::neg_infinity(), T::max);
    if !m.is_finite() {
        return m;
    }
    m + ls.iter().map(|&l| (l - m).exp()).sum::<T>().ln()
}

/// Natural logarithm of a positive big integer, accurate to f64 precision.
pub fn ln_biguint(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().expect("finite for < 1000 bits").ln();
    }
    let shift = bits - 64;
    let top = (n >> shift).to_f64().expect("64-bit mantissa");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

pub fn ln_bigint(n: &BigInt) -> f64 {
    assert_eq!(n.sign(), Sign::Plus, "logarithm of non-positive integer");
    ln_biguint(n.magnitude())
}

/// Neumaier-compensated summation.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.carry += (self.sum - t) + v;
        } else {
            self.carry += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.carry
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = Self::default();
        for v in iter {
            s.add(v);
        }
        s
    }
}
