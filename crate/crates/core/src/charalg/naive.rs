//! Brute-force decomposition by formal-character multiplication.
//!
//! Multiplies characters as exponent-vector polynomials, then peels off
//! irreducibles by repeatedly subtracting the character of the highest
//! remaining weight. Independent of the Klimyk rule; used as its oracle.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rootsys::RootSystem;
use crate::scalar::Rational;
use crate::weight::Weight;

use super::freudenthal::weight_multiplicities;

/// A formal character `sum_mu c_mu e^mu` with integer coefficients.
pub type FormalCharacter = BTreeMap<Weight, BigInt>;

pub fn irreducible_character(rs: &RootSystem, lambda: &Weight) -> Result<FormalCharacter> {
    Ok(weight_multiplicities(rs, lambda)?.iter().map(|(w, d)| (w.clone(), BigInt::from(d))).collect())
}

pub fn multiply(a: &FormalCharacter, b: &FormalCharacter) -> FormalCharacter {
    let mut out = FormalCharacter::new();
    for (wa, ca) in a {
        for (wb, cb) in b {
            *out.entry(wa + wb).or_default() += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Splits a W-invariant formal character into irreducibles.
pub fn decompose_character(rs: &RootSystem, mut chi: FormalCharacter) -> Result<BTreeMap<Weight, BigUint>> {
    let height_coeffs: Vec<Rational> = (0..rs.rank())
        .map(|j| (0..rs.rank()).map(|i| rs.cartan_inverse()[(i, j)]).sum())
        .collect();
    let height = |w: &Weight| -> Rational {
        w.coords().iter().zip(&height_coeffs).map(|(&c, h)| h * c).sum()
    };
    let mut out = BTreeMap::new();
    while let Some(top) = chi.keys().max_by(|a, b| height(a).cmp(&height(b)).then(a.cmp(b))).cloned() {
        let m = chi[&top].clone();
        if !top.is_dominant() || m.sign() != Sign::Plus {
            return Err(Error::Internal(format!("leading term {m} e^{top} is not a highest weight")));
        }
        for (w, c) in irreducible_character(rs, &top)? {
            *chi.entry(w).or_default() -= &m * c;
        }
        chi.retain(|_, c| !c.is_zero());
        out.insert(top, m.magnitude().clone());
    }
    Ok(out)
}

/// Naive decomposition of `(x)_k V_{nu_k}^{N_k}`.
pub fn naive_decompose(rs: &RootSystem, problem: &[(Weight, u64)]) -> Result<BTreeMap<Weight, BigUint>> {
    let mut chi = FormalCharacter::from([(Weight::zero(rs.rank()), BigInt::one())]);
    for (nu, n) in problem {
        let factor = irreducible_character(rs, nu)?;
        for _ in 0..*n {
            chi = multiply(&chi, &factor);
        }
    }
    decompose_character(rs, chi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a2_three_times_three() {
        let a2 = RootSystem::from_name("A2").unwrap();
        let out = naive_decompose(&a2, &[(Weight::new([1, 0]), 2)]).unwrap();
        let expected: BTreeMap<Weight, BigUint> =
            [(Weight::new([2, 0]), 1u32.into()), (Weight::new([0, 1]), 1u32.into())].into();
        assert_eq!(out, expected);
    }

    #[test]
    fn rejects_non_invariant_input() {
        let a1 = RootSystem::from_name("A1").unwrap();
        let chi = FormalCharacter::from([(Weight::new([-1]), BigInt::one())]);
        assert!(decompose_character(&a1, chi).is_err());
    }
}
