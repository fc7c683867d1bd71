//! Weight multiplicities by Freudenthal's recursion, and the Weyl dimension formula.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rootsys::RootSystem;
use crate::weight::Weight;

/// The full weight system `{mu: d_mu}` of an irreducible module.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightSystem {
    highest: Weight,
    entries: BTreeMap<Weight, u64>,
}

impl WeightSystem {
    pub fn highest(&self) -> &Weight {
        &self.highest
    }

    pub fn entries(&self) -> &BTreeMap<Weight, u64> {
        &self.entries
    }

    pub fn multiplicity(&self, mu: &Weight) -> u64 {
        self.entries.get(mu).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Weight, u64)> {
        self.entries.iter().map(|(w, &m)| (w, m))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Sum of multiplicities.
    pub fn dim(&self) -> u128 {
        self.entries.values().map(|&m| m as u128).sum()
    }

    /// Largest `|mu_i|` over all weights; the width of the weight diagram.
    pub fn width(&self) -> i64 {
        self.entries.keys().flat_map(|w| w.coords().iter().map(|c| c.abs())).max().unwrap_or(0)
    }
}

/// Complete weight system of `V_lambda`.
pub fn weight_multiplicities(rs: &RootSystem, lambda: &Weight) -> Result<WeightSystem> {
    lambda.check_rank(rs.rank())?;
    lambda.check_dominant()?;
    let dominant = dominant_multiplicities(rs, lambda);
    let mut entries = BTreeMap::new();
    for (mu, m) in dominant {
        for w in rs.orbit(&mu) {
            entries.insert(w, m);
        }
    }
    Ok(WeightSystem { highest: lambda.clone(), entries })
}

/// Multiplicities of the dominant weights of `V_lambda`.
pub fn dominant_multiplicities(rs: &RootSystem, lambda: &Weight) -> Vec<(Weight, u64)> {
    let roots = rs.positive_roots_weight();
    let heights: Vec<i64> = rs.positive_roots().iter().map(|a| a.iter().sum()).collect();

    // Dominant weights below lambda: closure under subtracting positive roots.
    let mut depth: HashMap<Weight, i64> = HashMap::from([(lambda.clone(), 0)]);
    let mut frontier = vec![lambda.clone()];
    while let Some(mu) = frontier.pop() {
        let d = depth[&mu];
        for (alpha, h) in roots.iter().zip(&heights) {
            let next = &mu - alpha;
            if next.is_dominant() && !depth.contains_key(&next) {
                depth.insert(next.clone(), d + h);
                frontier.push(next);
            }
        }
    }
    let mut order: Vec<(Weight, i64)> = depth.into_iter().collect();
    order.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| b.0.cmp(&a.0)));

    let rho = rs.rho_weight();
    let lr = lambda + &rho;
    let norm_lr = rs.inner_weights_scaled(lr.coords(), lr.coords());
    let mut mult: HashMap<Weight, u64> = HashMap::with_capacity(order.len());
    let mut out = Vec::with_capacity(order.len());
    let known: HashSet<Weight> = order.iter().map(|(w, _)| w.clone()).collect();
    for (mu, _) in &order {
        let m = if mu == lambda {
            1
        } else {
            let mut num: i128 = 0;
            for alpha in roots {
                let mut shifted = mu + alpha;
                loop {
                    let dom = rs.dominant_reflect(&shifted).dominant;
                    if !known.contains(&dom) {
                        break;
                    }
                    let m_shift = *mult.get(&dom).expect("higher weights processed first");
                    if m_shift == 0 {
                        break;
                    }
                    let pairing = rs.inner_weights_scaled(shifted.coords(), alpha.coords());
                    num += m_shift as i128 * pairing as i128;
                    shifted = &shifted + alpha;
                }
            }
            let mr = mu + &rho;
            let den = (norm_lr - rs.inner_weights_scaled(mr.coords(), mr.coords())) as i128;
            let (q, rem) = (2 * num).div_rem(&den);
            assert!(den > 0 && rem == 0, "Freudenthal recursion not integral at {mu}");
            q as u64
        };
        mult.insert(mu.clone(), m);
        out.push((mu.clone(), m));
    }
    out
}

/// `dim V_lambda = prod_{alpha>0} (lambda + rho, alpha) / (rho, alpha)`, certified integral.
pub fn weyl_dimension(rs: &RootSystem, lambda: &Weight) -> Result<BigUint> {
    lambda.check_rank(rs.rank())?;
    lambda.check_dominant()?;
    let rho = rs.rho_weight();
    let lr = lambda + &rho;
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for alpha in rs.positive_roots() {
        num *= rs.pair_weight_root_scaled(lr.coords(), alpha) as u64;
        den *= rs.pair_weight_root_scaled(rho.coords(), alpha) as u64;
    }
    let (q, r) = num.div_rem(&den);
    if !r.is_zero() {
        return Err(Error::Internal(format!("Weyl dimension of {lambda} is not integral")));
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rs(name: &str) -> RootSystem {
        RootSystem::from_name(name).unwrap()
    }

    #[test]
    fn a1_spin_one() {
        let ws = weight_multiplicities(&rs("A1"), &Weight::new([2])).unwrap();
        let expect: BTreeMap<Weight, u64> =
            [(Weight::new([2]), 1), (Weight::new([0]), 1), (Weight::new([-2]), 1)].into();
        assert_eq!(ws.entries(), &expect);
    }

    #[test]
    fn a2_adjoint() {
        let ws = weight_multiplicities(&rs("A2"), &Weight::new([1, 1])).unwrap();
        assert_eq!(ws.multiplicity(&Weight::zero(2)), 2);
        assert_eq!(ws.len(), 7);
        assert_eq!(ws.iter().filter(|(w, _)| !w.is_zero()).all(|(_, m)| m == 1), true);
        assert_eq!(ws.dim(), 8);
    }

    #[test]
    fn trivial_module() {
        for name in ["A3", "G2", "E6"] {
            let rs = rs(name);
            let ws = weight_multiplicities(&rs, &Weight::zero(rs.rank())).unwrap();
            assert_eq!(ws.entries().len(), 1);
            assert_eq!(ws.multiplicity(&Weight::zero(rs.rank())), 1);
        }
    }

    #[test]
    fn dimensions() {
        assert_eq!(weyl_dimension(&rs("A1"), &Weight::new([7])).unwrap(), BigUint::from(8u32));
        assert_eq!(weyl_dimension(&rs("A2"), &Weight::new([1, 1])).unwrap(), BigUint::from(8u32));
        assert_eq!(weyl_dimension(&rs("C3"), &Weight::zero(3)).unwrap(), BigUint::one());
        assert_eq!(weyl_dimension(&rs("G2"), &Weight::new([0, 1])).unwrap(), BigUint::from(7u32));
        assert_eq!(weyl_dimension(&rs("G2"), &Weight::new([1, 0])).unwrap(), BigUint::from(14u32));
        assert_eq!(weyl_dimension(&rs("E8"), &Weight::new([0, 0, 0, 0, 0, 0, 0, 1])).unwrap(), BigUint::from(248u32));
        assert_eq!(weyl_dimension(&rs("F4"), &Weight::new([0, 0, 0, 1])).unwrap(), BigUint::from(26u32));
        assert!(weyl_dimension(&rs("A2"), &Weight::new([-1, 0])).is_err());
    }

    #[test]
    fn multiplicities_sum_to_dimension_and_are_w_symmetric() {
        let cases: [(&str, &[i64]); 10] = [
            ("A2", &[2, 1]), ("A3", &[1, 1, 1]), ("B2", &[1, 1]), ("B3", &[1, 0, 1]),
            ("C3", &[0, 1, 1]), ("D4", &[1, 0, 1, 0]), ("G2", &[1, 1]), ("G2", &[2, 0]),
            ("F4", &[1, 0, 0, 0]), ("E6", &[0, 1, 0, 0, 0, 0]),
        ];
        for (name, hw) in cases {
            let rs = rs(name);
            let lambda = Weight::new(hw.to_vec());
            let ws = weight_multiplicities(&rs, &lambda).unwrap();
            let dim = weyl_dimension(&rs, &lambda).unwrap();
            assert_eq!(BigUint::from(ws.dim()), dim, "{name} {lambda}");
            for (mu, m) in ws.iter() {
                let dom = rs.dominant_reflect(mu).dominant;
                assert_eq!(ws.multiplicity(&dom), m, "{name} {mu}");
            }
        }
    }
}
