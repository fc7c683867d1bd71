//! Exact tensor-product decompositions of simple Lie algebra modules and their
//! large-deviation asymptotics.
//!
//! The exact layer (`rootsys`, `charalg`) works in rationals and big integers.
//! The Legendre layer (`legendre`, characters in `charalg`, `logspace`,
//! `linalg`) is generic over [`Real`]; the aliases below fix it to `f64`.
//! `measures`, `pde` and `markov` work in `f64` directly.

pub mod acceptance;
pub mod charalg;
pub mod error;
pub mod legendre;
pub mod linalg;
pub mod markov;
pub mod measures;
pub mod pde;
pub mod logspace;
pub mod quadrature;
pub mod rootsys;
pub mod scalar;
pub mod slnhook;
pub mod weight;

pub use charalg::{DecompositionTable, WeightSystem};
pub use error::{Error, ErrorKind, Result};
pub use rootsys::{AlgebraSpec, Family, RootSystem, WeylElement};
pub use scalar::{Rational, Real};
pub use weight::Weight;

pub type TensorProblem64 = legendre::TensorProblem<f64>;
pub type RatePoint64 = legendre::RatePoint<f64>;
pub type LimitDensity64 = legendre::density::LimitDensity<f64>;
pub type CharacterEvaluator64 = charalg::character::CharacterEvaluator<f64>;
pub type LogValue64 = logspace::LogValue<f64>;
pub type Matrix64 = linalg::Matrix<f64>;
