//! Scalar abstractions shared by the exact and floating-point layers.
//!
//! Root-system data lives in exact rationals ([`Rational`]); everything that
//! touches exponentials (characters, Legendre duals, densities) is generic over
//! [`Real`], implemented for `f32` and `f64`.

use std::fmt::Debug;
use std::iter::Sum;

use num_rational::Ratio;
use num_traits::{Float, FloatConst, FromPrimitive, Num, Signed, ToPrimitive};

/// Exact rational scalar used for Cartan data, inner products and basis changes.
pub type Rational = Ratio<i64>;

/// A scalar field with a total-enough order for pivoting.
///
/// Implemented by `f32`, `f64` and [`Rational`]; the generic [`crate::linalg::Matrix`]
/// uses it for Gauss-Jordan inversion and determinants.
pub trait Field: Num + Signed + Clone + PartialOrd + Debug {}

impl<T> Field for T where T: Num + Signed + Clone + PartialOrd + Debug {}

/// Floating-point scalar for the analytic layer.
pub trait Real:
    Float + FloatConst + Signed + FromPrimitive + ToPrimitive + Sum + Debug + Default + Send + Sync + 'static
{
    /// Residual target for the Legendre Newton solver, relative to `max(1, |B xi|)`.
    fn solver_tolerance() -> Self;

    /// Relative tolerance used to decide whether a pairing with a root vanishes.
    fn regularity_tolerance() -> Self;

    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("literal representable")
    }

    fn from_rational(q: &Rational) -> Self {
        Self::lit(*q.numer() as f64 / *q.denom() as f64)
    }
}

impl Real for f64 {
    fn solver_tolerance() -> Self {
        1e-12
    }
    fn regularity_tolerance() -> Self {
        1e-8
    }
}

impl Real for f32 {
    fn solver_tolerance() -> Self {
        2e-5
    }
    fn regularity_tolerance() -> Self {
        1e-4
    }
}

pub fn rat(n: i64, d: i64) -> Rational {
    Ratio::new(n, d)
}
