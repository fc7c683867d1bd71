//! Exact tensor-product decompositions by the signed, rho-shifted Klimyk rule.

use std::collections::{BTreeMap, HashMap};

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::rootsys::{AlgebraSpec, RootSystem};
use crate::weight::Weight;

use super::freudenthal::{weight_multiplicities, weyl_dimension, WeightSystem};

/// Default guard on the number of distinct highest weights in a table.
pub const DEFAULT_ENTRY_CAP: usize = 5_000_000;

/// Below this many source entries a step runs sequentially.
const PARALLEL_THRESHOLD: usize = 256;

/// `{lambda: m_lambda}` for a tensor-product problem `(x)_k V_{nu_k}^{N_k}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionTable {
    algebra: AlgebraSpec,
    problem: Vec<(Weight, u64)>,
    entries: BTreeMap<Weight, BigUint>,
}

impl DecompositionTable {
    /// The trivial table `{0: 1}` for the empty product.
    pub fn trivial(rs: &RootSystem) -> Self {
        Self {
            algebra: rs.spec(),
            problem: Vec::new(),
            entries: BTreeMap::from([(Weight::zero(rs.rank()), BigUint::one())]),
        }
    }

    pub fn algebra(&self) -> AlgebraSpec {
        self.algebra
    }

    pub fn problem(&self) -> &[(Weight, u64)] {
        &self.problem
    }

    pub fn entries(&self) -> &BTreeMap<Weight, BigUint> {
        &self.entries
    }

    pub fn multiplicity(&self, lambda: &Weight) -> BigUint {
        self.entries.get(lambda).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Weight, &BigUint)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `sum_k N_k`.
    pub fn total_power(&self) -> u64 {
        self.problem.iter().map(|(_, n)| n).sum()
    }

    /// `sum_k N_k nu_k`, the highest weight of the whole product.
    pub fn top_weight(&self) -> Weight {
        let r = self.algebra.rank();
        let mut top = vec![0i64; r];
        for (nu, n) in &self.problem {
            for (t, c) in top.iter_mut().zip(nu.coords()) {
                *t += c * *n as i64;
            }
        }
        Weight(top)
    }

    /// `prod_k dim(V_{nu_k})^{N_k}`.
    pub fn product_dimension(&self, rs: &RootSystem) -> Result<BigUint> {
        let mut out = BigUint::one();
        for (nu, n) in &self.problem {
            out *= weyl_dimension(rs, nu)?.pow(*n as u32);
        }
        Ok(out)
    }

    /// Checks `sum_lambda m_lambda dim V_lambda = prod_k dim(V_{nu_k})^{N_k}` exactly.
    pub fn check_dimension_rule(&self, rs: &RootSystem) -> Result<()> {
        let mut lhs = BigUint::zero();
        for (lambda, m) in &self.entries {
            lhs += m * weyl_dimension(rs, lambda)?;
        }
        let rhs = self.product_dimension(rs)?;
        if lhs != rhs {
            return Err(Error::Internal(format!("dimension sum rule: {lhs} != {rhs}")));
        }
        Ok(())
    }

    /// Checks that `top - lambda` is a nonnegative integer combination of simple roots.
    pub fn check_root_lattice(&self, rs: &RootSystem) -> Result<()> {
        let top = self.top_weight();
        for lambda in self.entries.keys() {
            let diff = rs.weight_to_root(&(&top - lambda));
            if diff.iter().any(|q| !q.is_integer() || *q.numer() < 0) {
                return Err(Error::Internal(format!("{lambda} is not below {top} in the root lattice")));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "algebra": self.algebra.to_string(),
            "problem": self
                .problem
                .iter()
                .map(|(nu, n)| json!({"rep": nu.coords(), "power": n}))
                .collect::<Vec<_>>(),
            "entries": self
                .entries
                .iter()
                .map(|(w, m)| json!([w.coords(), m.to_string()]))
                .collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |what: &str| Error::Parse(format!("decomposition table: {what}"));
        let algebra: AlgebraSpec =
            v["algebra"].as_str().ok_or_else(|| bad("algebra"))?.parse()?;
        let coords = |x: &Value| -> Result<Weight> {
            let c: Vec<i64> = serde_json::from_value(x.clone())?;
            let w = Weight(c);
            w.check_rank(algebra.rank())?;
            Ok(w)
        };
        let mut problem = Vec::new();
        for f in v["problem"].as_array().ok_or_else(|| bad("problem"))? {
            let n = f["power"].as_u64().ok_or_else(|| bad("power"))?;
            problem.push((coords(&f["rep"])?, n));
        }
        let mut entries = BTreeMap::new();
        for e in v["entries"].as_array().ok_or_else(|| bad("entries"))? {
            let m: BigUint = e[1]
                .as_str()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| bad("multiplicity"))?;
            entries.insert(coords(&e[0])?, m);
        }
        Ok(Self { algebra, problem, entries })
    }
}

/// One Klimyk step: `V_nu (x) table`.
pub fn klimyk_tensor_step(
    rs: &RootSystem,
    nu: &Weight,
    table: &DecompositionTable,
) -> Result<DecompositionTable> {
    let ws = weight_multiplicities(rs, nu)?;
    let entries = klimyk_product(rs, &ws, &table.entries, DEFAULT_ENTRY_CAP)?;
    let mut problem = table.problem.clone();
    match problem.last_mut() {
        Some((last, n)) if last == nu => *n += 1,
        _ => problem.push((nu.clone(), 1)),
    }
    Ok(DecompositionTable { algebra: table.algebra, problem, entries })
}

/// Tensors `table` with the module whose weight system is `ws`, returning raw entries.
pub fn klimyk_product(
    rs: &RootSystem,
    ws: &WeightSystem,
    table: &BTreeMap<Weight, BigUint>,
    cap: usize,
) -> Result<BTreeMap<Weight, BigUint>> {
    let r = rs.rank();
    let weights: Vec<(Vec<i64>, BigInt)> =
        ws.iter().map(|(w, d)| (w.0.clone(), BigInt::from(d))).collect();
    let source: Vec<(&Weight, &BigUint)> = table.iter().collect();

    let contribute = |acc: &mut HashMap<Weight, BigInt>, (lambda, m): (&Weight, &BigUint)| {
        let m = BigInt::from_biguint(Sign::Plus, m.clone());
        for (mu, d) in &weights {
            let shifted: Vec<i64> = (0..r).map(|i| lambda.0[i] + mu[i] + 1).collect();
            let refl = rs.dominant_reflect(&Weight(shifted));
            if refl.singular {
                continue;
            }
            let target = Weight(refl.dominant.0.iter().map(|c| c - 1).collect());
            let term = d * &m;
            let slot = acc.entry(target).or_default();
            if refl.parity > 0 {
                *slot += term;
            } else {
                *slot -= term;
            }
        }
    };

    let acc = if source.len() < PARALLEL_THRESHOLD {
        let mut acc = HashMap::new();
        for e in source {
            contribute(&mut acc, e);
        }
        acc
    } else {
        source
            .into_par_iter()
            .fold(HashMap::new, |mut acc, e| {
                contribute(&mut acc, e);
                acc
            })
            .reduce(HashMap::new, |a, b| if a.len() >= b.len() { merge_into(a, b) } else { merge_into(b, a) })
    };

    let mut out = BTreeMap::new();
    for (w, m) in acc {
        match m.sign() {
            Sign::NoSign => {}
            Sign::Plus => {
                out.insert(w, m.magnitude().clone());
            }
            Sign::Minus => {
                return Err(Error::Internal(format!("negative Klimyk multiplicity {m} at {w}")));
            }
        }
    }
    if out.len() > cap {
        return Err(Error::TableTooLarge { cap });
    }
    Ok(out)
}

fn merge_into(mut a: HashMap<Weight, BigInt>, b: HashMap<Weight, BigInt>) -> HashMap<Weight, BigInt> {
    for (k, v) in b {
        *a.entry(k).or_default() += v;
    }
    a
}

/// Decomposes `(x)_k V_{nu_k}^{N_k}` by repeated single-factor steps from `{0: 1}`.
pub fn tensor_power_decompose(rs: &RootSystem, problem: &[(Weight, u64)]) -> Result<DecompositionTable> {
    tensor_power_decompose_capped(rs, problem, DEFAULT_ENTRY_CAP)
}

pub fn tensor_power_decompose_capped(
    rs: &RootSystem,
    problem: &[(Weight, u64)],
    cap: usize,
) -> Result<DecompositionTable> {
    for (nu, _) in problem {
        nu.check_rank(rs.rank())?;
        nu.check_dominant()?;
    }
    let mut entries = DecompositionTable::trivial(rs).entries;
    for (nu, n) in problem {
        let ws = weight_multiplicities(rs, nu)?;
        for _ in 0..*n {
            entries = klimyk_product(rs, &ws, &entries, cap)?;
        }
    }
    Ok(DecompositionTable {
        algebra: rs.spec(),
        problem: problem.iter().filter(|(_, n)| *n > 0).cloned().collect(),
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rs(name: &str) -> RootSystem {
        RootSystem::from_name(name).unwrap()
    }

    fn table(entries: &[(&[i64], u64)]) -> BTreeMap<Weight, BigUint> {
        entries.iter().map(|(w, m)| (Weight::new(w.to_vec()), BigUint::from(*m))).collect()
    }

    #[test]
    fn clebsch_gordan_step() {
        let a1 = rs("A1");
        let t = tensor_power_decompose(&a1, &[(Weight::new([1]), 1)]).unwrap();
        let t2 = klimyk_tensor_step(&a1, &Weight::new([1]), &t).unwrap();
        assert_eq!(t2.entries, table(&[(&[2], 1), (&[0], 1)]));
        assert_eq!(t2.problem, vec![(Weight::new([1]), 2)]);
    }

    #[test]
    fn a2_dual_times_fundamental() {
        let a2 = rs("A2");
        let t = tensor_power_decompose(&a2, &[(Weight::new([1, 0]), 1)]).unwrap();
        let out = klimyk_tensor_step(&a2, &Weight::new([0, 1]), &t).unwrap();
        assert_eq!(out.entries, table(&[(&[1, 1], 1), (&[0, 0], 1)]));
    }

    #[test]
    fn trivial_factor_is_identity() {
        let b2 = rs("B2");
        let t = tensor_power_decompose(&b2, &[(Weight::new([1, 1]), 2)]).unwrap();
        let same = klimyk_tensor_step(&b2, &Weight::zero(2), &t).unwrap();
        assert_eq!(same.entries, t.entries);
    }

    #[test]
    fn a1_ballot_numbers() {
        let a1 = rs("A1");
        let t3 = tensor_power_decompose(&a1, &[(Weight::new([1]), 3)]).unwrap();
        assert_eq!(t3.entries, table(&[(&[3], 1), (&[1], 2)]));
        let t4 = tensor_power_decompose(&a1, &[(Weight::new([1]), 4)]).unwrap();
        assert_eq!(t4.entries, table(&[(&[4], 1), (&[2], 3), (&[0], 2)]));
        let t0 = tensor_power_decompose(&a1, &[(Weight::new([1]), 0)]).unwrap();
        assert_eq!(t0.entries, table(&[(&[0], 1)]));
    }

    #[test]
    fn invariants_hold_on_mixed_problems() {
        for (name, problem) in [
            ("A2", vec![(vec![1, 0], 4), (vec![0, 1], 3)]),
            ("G2", vec![(vec![1, 0], 3), (vec![0, 1], 2)]),
            ("C3", vec![(vec![1, 0, 0], 5)]),
            ("D4", vec![(vec![0, 1, 0, 0], 3)]),
        ] {
            let rs = rs(name);
            let problem: Vec<(Weight, u64)> =
                problem.into_iter().map(|(w, n)| (Weight(w), n)).collect();
            let t = tensor_power_decompose(&rs, &problem).unwrap();
            t.check_dimension_rule(&rs).unwrap();
            t.check_root_lattice(&rs).unwrap();
            assert_eq!(t.multiplicity(&t.top_weight()), BigUint::one());
        }
    }

    #[test]
    fn parallel_path_matches_sequential() {
        let a2 = rs("A2");
        let ws = weight_multiplicities(&a2, &Weight::new([1, 1])).unwrap();
        let t = tensor_power_decompose(&a2, &[(Weight::new([1, 0]), 60)]).unwrap();
        assert!(t.len() >= PARALLEL_THRESHOLD);
        let par = klimyk_product(&a2, &ws, &t.entries, DEFAULT_ENTRY_CAP).unwrap();
        let mut seq_acc: BTreeMap<Weight, BigUint> = BTreeMap::new();
        for chunk in t.entries.iter().collect::<Vec<_>>().chunks(50) {
            let part: BTreeMap<Weight, BigUint> = chunk.iter().map(|(w, m)| ((*w).clone(), (*m).clone())).collect();
            for (w, m) in klimyk_product(&a2, &ws, &part, DEFAULT_ENTRY_CAP).unwrap() {
                *seq_acc.entry(w).or_default() += m;
            }
        }
        assert_eq!(par, seq_acc);
    }

    #[test]
    fn entry_cap_is_enforced() {
        let a2 = rs("A2");
        let err = tensor_power_decompose_capped(&a2, &[(Weight::new([1, 0]), 12)], 5).unwrap_err();
        assert!(matches!(err, Error::TableTooLarge { cap: 5 }));
    }

    #[test]
    fn json_round_trip_is_sorted() {
        let a2 = rs("A2");
        let t = tensor_power_decompose(&a2, &[(Weight::new([1, 0]), 5)]).unwrap();
        let v = t.to_json();
        let keys: Vec<Vec<i64>> = v["entries"]
            .as_array()
            .unwrap()
            .iter()
            .map(|e| serde_json::from_value(e[0].clone()).unwrap())
            .collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        assert_eq!(DecompositionTable::from_json(&v).unwrap(), t);
    }
}
