//! The Markov chain `p^(N) = M^N delta_0` on dominant weights: exact transition
//! rows, exact evolution, and seeded Monte Carlo paths.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::One;
use parking_lot::RwLock;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::charalg::character::CharacterEvaluator;
use crate::charalg::freudenthal::{weight_multiplicities, WeightSystem};
use crate::charalg::klimyk::{klimyk_product, DEFAULT_ENTRY_CAP};
use crate::error::{Error, Result};
use crate::logspace::{ln_biguint, CompensatedSum};
use crate::measures::MeasureTable;
use crate::rootsys::RootSystem;
use crate::weight::Weight;

/// Largest tolerated deviation of a raw row sum from one.
pub const ROW_TOLERANCE: f64 = 1e-9;

/// Outgoing probabilities from one dominant weight, sorted by target.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TransitionRow {
    pub source: Weight,
    pub targets: Vec<(Weight, f64)>,
}

impl TransitionRow {
    pub fn probability(&self, target: &Weight) -> f64 {
        self.targets.iter().find(|(w, _)| w == target).map_or(0.0, |(_, p)| *p)
    }

    /// Inverse-CDF draw for `u` in `[0, 1)`.
    pub fn sample(&self, u: f64) -> &Weight {
        let mut acc = 0.0;
        for (w, p) in &self.targets {
            acc += p;
            if u < acc {
                return w;
            }
        }
        &self.targets.last().expect("rows are nonempty").0
    }
}

/// One recorded path; `steps[0]` is the zero weight.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Trajectory {
    pub seed: u64,
    pub chain: u64,
    pub steps: Vec<Weight>,
}

impl Trajectory {
    /// `{"seed":..,"chain":..,"steps":[[..],..]}` on one line.
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("trajectory serializes")
    }
}

/// Output of [`MarkovChain::sample_paths`].
#[derive(Clone, Debug)]
pub struct SampleOutcome {
    pub counts: BTreeMap<Weight, u64>,
    pub empirical: MeasureTable,
    pub trajectories: Vec<Trajectory>,
}

/// The kernel `M_{lambda -> mu} = b_{lambda,mu} chi_mu(e^t) / (chi_lambda(e^t) chi_V(e^t))`.
pub struct MarkovChain {
    rs: RootSystem,
    v: Weight,
    t: Vec<f64>,
    weights: WeightSystem,
    eval: CharacterEvaluator<f64>,
    ln_chi_v: f64,
    cache: RwLock<HashMap<Weight, Arc<TransitionRow>>>,
}

impl MarkovChain {
    pub fn new(rs: &RootSystem, v: &Weight, t: &[f64]) -> Result<Self> {
        if t.len() != rs.rank() {
            return Err(Error::RankMismatch { rank: rs.rank(), got: t.len() });
        }
        let weights = weight_multiplicities(rs, v)?;
        let eval = CharacterEvaluator::new(rs, t)?;
        let ln_chi_v = eval.ln_character(rs, v)?;
        Ok(Self {
            rs: rs.clone(),
            v: v.clone(),
            t: t.to_vec(),
            weights,
            eval,
            ln_chi_v,
            cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    /// The row out of `lambda`, memoized.
    pub fn transition_row(&self, lambda: &Weight) -> Result<Arc<TransitionRow>> {
        if let Some(row) = self.cache.read().get(lambda) {
            return Ok(row.clone());
        }
        let row = Arc::new(self.compute_row(lambda)?);
        Ok(self.cache.write().entry(lambda.clone()).or_insert(row).clone())
    }

    fn compute_row(&self, lambda: &Weight) -> Result<TransitionRow> {
        lambda.check_rank(self.rs.rank())?;
        lambda.check_dominant()?;
        let source = BTreeMap::from([(lambda.clone(), BigUint::one())]);
        let b = klimyk_product(&self.rs, &self.weights, &source, DEFAULT_ENTRY_CAP)?;
        let ln_den = self.eval.ln_character(&self.rs, lambda)? + self.ln_chi_v;
        let mut targets = Vec::with_capacity(b.len());
        for (mu, m) in b {
            let p = (ln_biguint(&m) + self.eval.ln_character(&self.rs, &mu)? - ln_den).exp();
            targets.push((mu, p));
        }
        let total = targets.iter().map(|(_, p)| *p).collect::<CompensatedSum>().total();
        if !((total - 1.0).abs() <= ROW_TOLERANCE) {
            return Err(Error::Internal(format!("row sum at {lambda} is {total}")));
        }
        for (_, p) in targets.iter_mut() {
            *p /= total;
        }
        Ok(TransitionRow { source: lambda.clone(), targets })
    }

    /// `M^N delta_0`, exactly up to floating point.
    pub fn evolve_exact(&self, n: u64) -> Result<MeasureTable> {
        let mut p: BTreeMap<Weight, f64> = BTreeMap::from([(Weight::zero(self.rs.rank()), 1.0)]);
        for _ in 0..n {
            let rows: Vec<(f64, Arc<TransitionRow>)> = p
                .par_iter()
                .map(|(w, &q)| Ok((q, self.transition_row(w)?)))
                .collect::<Result<_>>()?;
            let mut next: BTreeMap<Weight, CompensatedSum> = BTreeMap::new();
            for (q, row) in rows {
                for (mu, m) in &row.targets {
                    next.entry(mu.clone()).or_default().add(q * m);
                }
            }
            p = next.into_iter().map(|(w, s)| (w, s.total())).collect();
        }
        MeasureTable::from_probabilities(&self.rs, &[(self.v.clone(), n)], &self.t, p.into_iter().collect())
    }

    /// Runs `chains` independent paths of length `n`.
    ///
    /// Chain `c` draws from ChaCha8 seeded by `seed` on stream `c`, so the result is
    /// identical for every thread count.
    pub fn sample_paths(&self, n: u64, chains: u64, seed: u64, record: bool) -> Result<SampleOutcome> {
        if chains == 0 {
            return Err(Error::Constraint("at least one chain is required".into()));
        }
        let run = |chain: u64| -> Result<(Weight, Option<Trajectory>)> {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(chain);
            let mut at = Weight::zero(self.rs.rank());
            let mut steps = record.then(|| vec![at.clone()]);
            for _ in 0..n {
                let row = self.transition_row(&at)?;
                at = row.sample(rng.random::<f64>()).clone();
                if let Some(s) = steps.as_mut() {
                    s.push(at.clone());
                }
            }
            Ok((at, steps.map(|steps| Trajectory { seed, chain, steps })))
        };
        let results: Vec<(Weight, Option<Trajectory>)> =
            (0..chains).into_par_iter().map(run).collect::<Result<_>>()?;
        let mut counts: BTreeMap<Weight, u64> = BTreeMap::new();
        let mut trajectories = Vec::new();
        for (end, tr) in results {
            *counts.entry(end).or_default() += 1;
            trajectories.extend(tr);
        }
        let probs = counts.iter().map(|(w, &c)| (w.clone(), c as f64 / chains as f64)).collect();
        let empirical = MeasureTable::from_probabilities(&self.rs, &[(self.v.clone(), n)], &self.t, probs)?;
        Ok(SampleOutcome { counts, empirical, trajectories })
    }
}

/// One-off transition row without a persistent cache.
pub fn transition_row(rs: &RootSystem, v: &Weight, t: &[f64], lambda: &Weight) -> Result<TransitionRow> {
    MarkovChain::new(rs, v, t)?.compute_row(lambda)
}

/// Runs `f` on a dedicated pool of `threads` workers (all cores when `None`).
pub fn with_threads<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> Result<R> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(k) = threads {
        b = b.num_threads(k);
    }
    let pool = b.build().map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a1() -> RootSystem {
        RootSystem::from_name("A1").unwrap()
    }

    #[test]
    fn a1_rows_at_zero_temperature() {
        let row = transition_row(&a1(), &Weight::new([1]), &[0.0], &Weight::new([5])).unwrap();
        assert_eq!(row.targets.len(), 2);
        assert!((row.probability(&Weight::new([6])) - 7.0 / 12.0).abs() < 1e-15);
        assert!((row.probability(&Weight::new([4])) - 5.0 / 12.0).abs() < 1e-15);
        let row = transition_row(&a1(), &Weight::new([1]), &[0.0], &Weight::new([0])).unwrap();
        assert_eq!(row.targets, vec![(Weight::new([1]), 1.0)]);
    }

    #[test]
    fn regular_rows_sum_to_one() {
        let a2 = RootSystem::from_name("A2").unwrap();
        let row = transition_row(&a2, &Weight::new([1, 0]), &[0.3, 0.1], &Weight::new([3, 2])).unwrap();
        let s: f64 = row.targets.iter().map(|(_, p)| p).sum();
        assert!((s - 1.0).abs() < 1e-12);
    }

    #[test]
    fn a1_exact_evolution() {
        let chain = MarkovChain::new(&a1(), &Weight::new([1]), &[0.0]).unwrap();
        let m0 = chain.evolve_exact(0).unwrap();
        assert_eq!(m0.entries, BTreeMap::from([(Weight::new([0]), 1.0)]));
        let m = chain.evolve_exact(4).unwrap();
        assert!((m.probability(&Weight::new([4])) - 5.0 / 16.0).abs() < 1e-15);
        assert!((m.probability(&Weight::new([2])) - 9.0 / 16.0).abs() < 1e-15);
        assert!((m.probability(&Weight::new([0])) - 2.0 / 16.0).abs() < 1e-15);
    }

    #[test]
    fn sampling_is_reproducible() {
        let chain = MarkovChain::new(&a1(), &Weight::new([1]), &[0.4]).unwrap();
        let a = chain.sample_paths(20, 64, 7, true).unwrap();
        let b = chain.sample_paths(20, 64, 7, true).unwrap();
        assert_eq!(a.trajectories, b.trajectories);
        assert_eq!(a.counts, b.counts);
        let c = chain.sample_paths(20, 64, 8, true).unwrap();
        assert_ne!(a.trajectories, c.trajectories);
        let line = a.trajectories[0].to_json_line();
        assert!(line.starts_with("{\"seed\":7,\"chain\":0,\"steps\":[[0],[1],"), "{line}");
    }

    #[test]
    fn single_step_follows_first_row() {
        let chain = MarkovChain::new(&a1(), &Weight::new([2]), &[0.0]).unwrap();
        let out = chain.sample_paths(1, 1, 3, false).unwrap();
        assert_eq!(out.counts.values().sum::<u64>(), 1);
        assert_eq!(out.counts.keys().next().unwrap(), &Weight::new([2]));
    }
}
