//! Character and Plancherel measures on the components of a tensor product, their
//! asymptotic counterparts, and a binned total-variation distance to the limit laws.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::charalg::character::{weyl_denominator, CharacterEvaluator};
use crate::charalg::freudenthal::weyl_dimension;
use crate::charalg::klimyk::DecompositionTable;
use crate::error::{Error, Result};
use crate::legendre::density::LimitDensity;
use crate::legendre::TensorProblem;
use crate::linalg::dot;
use crate::logspace::{ln_biguint, CompensatedSum};
use crate::quadrature::integrate_box;
use crate::rootsys::{AlgebraSpec, RootSystem};
use crate::weight::Weight;

/// Largest tolerated deviation of the raw probability sum from one.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

/// The affine map `lambda -> (epsilon lambda - center) / spread` to limit-law coordinates.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Scaling {
    pub epsilon: f64,
    pub x_scalar: f64,
    /// Root coordinates.
    pub center: Vec<f64>,
    pub spread: f64,
}

impl Scaling {
    /// `a = sqrt(epsilon / x) lambda`, the Plancherel and intermediate scaling.
    pub fn chambered(epsilon: f64, x_scalar: f64, rank: usize) -> Self {
        Self { epsilon, x_scalar, center: vec![0.0; rank], spread: (epsilon * x_scalar).sqrt() }
    }

    /// `a = (epsilon lambda - eta) / sqrt(epsilon)`, the Gaussian scaling around `eta`.
    pub fn gaussian(epsilon: f64, x_scalar: f64, eta: Vec<f64>) -> Self {
        Self { epsilon, x_scalar, center: eta, spread: epsilon.sqrt() }
    }

    /// Root-coordinate image of `lambda`.
    pub fn map(&self, rs: &RootSystem, lambda: &Weight) -> Vec<f64> {
        let w: Vec<f64> = lambda.coords().iter().map(|&c| c as f64 * self.epsilon).collect();
        rs.weight_to_root_real(&w)
            .iter()
            .zip(&self.center)
            .map(|(x, c)| (x - c) / self.spread)
            .collect()
    }
}

/// A probability measure on dominant weights.
#[derive(Clone, Debug, Serialize)]
pub struct MeasureTable {
    pub algebra: AlgebraSpec,
    pub problem: Vec<(Weight, u64)>,
    /// Root-basis temperature; zero for the Plancherel measure.
    pub t: Vec<f64>,
    pub entries: BTreeMap<Weight, f64>,
    pub scaling: Scaling,
    /// `sum p - 1` before the final renormalization.
    pub raw_residual: f64,
}

impl MeasureTable {
    pub fn probability(&self, lambda: &Weight) -> f64 {
        self.entries.get(lambda).copied().unwrap_or(0.0)
    }

    pub fn total(&self) -> f64 {
        self.entries.values().copied().collect::<CompensatedSum>().total()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The most probable weight; ties go to the lexicographically smallest.
    pub fn mode(&self) -> Option<&Weight> {
        self.entries
            .iter()
            .fold(None, |best: Option<(&Weight, f64)>, (w, &p)| match best {
                Some((_, bp)) if bp >= p => best,
                _ => Some((w, p)),
            })
            .map(|(w, _)| w)
    }

    pub fn with_scaling(mut self, scaling: Scaling) -> Self {
        self.scaling = scaling;
        self
    }

    /// Total-variation distance between two measures on the same keys.
    pub fn tv_distance(&self, other: &MeasureTable) -> f64 {
        let mut s = CompensatedSum::default();
        for (w, p) in &self.entries {
            s.add((p - other.probability(w)).abs());
        }
        for (w, q) in &other.entries {
            if !self.entries.contains_key(w) {
                s.add(q.abs());
            }
        }
        0.5 * s.total()
    }

    /// `{algebra, problem, t, scaling, entries: [[coords, p], ...]}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "algebra": self.algebra.to_string(),
            "problem": self
                .problem
                .iter()
                .map(|(nu, n)| serde_json::json!({"rep": nu.coords(), "power": n}))
                .collect::<Vec<_>>(),
            "t": self.t,
            "scaling": self.scaling,
            "entries": self.entries.iter().map(|(w, p)| serde_json::json!([w.coords(), p])).collect::<Vec<_>>(),
        })
    }

    /// One CSV row per weight: coordinates, probability, asymptotic log-probability, scaled coordinates.
    pub fn to_csv(&self, rs: &RootSystem, asymptotic: impl Fn(&Weight) -> Option<f64>) -> String {
        let r = rs.rank();
        let mut out = String::new();
        let cols: Vec<String> = (1..=r)
            .map(|i| format!("lambda_{i}"))
            .chain(["probability".into(), "asymptotic_log_probability".into()])
            .chain((1..=r).map(|i| format!("scaled_{i}")))
            .collect();
        out.push_str(&cols.join(","));
        out.push('\n');
        for (w, p) in &self.entries {
            for c in w.coords() {
                let _ = write!(out, "{c},");
            }
            let _ = write!(out, "{p:e},");
            match asymptotic(w) {
                Some(v) => {
                    let _ = write!(out, "{v:e}");
                }
                None => out.push_str("nan"),
            }
            for a in self.scaling.map(rs, w) {
                let _ = write!(out, ",{a:e}");
            }
            out.push('\n');
        }
        out
    }
}

/// `1 / sum_k N_k`, or one for the empty product.
pub fn default_epsilon(problem: &[(Weight, u64)]) -> f64 {
    match problem.iter().map(|(_, n)| n).sum::<u64>() {
        0 => 1.0,
        n => 1.0 / n as f64,
    }
}

/// Plancherel scaling at `t = 0`, Gaussian scaling around `forward_dual(t)` otherwise.
pub fn default_scaling(rs: &RootSystem, problem: &[(Weight, u64)], t: &[f64]) -> Result<Scaling> {
    scaling_with_epsilon(rs, problem, t, default_epsilon(problem))
}

/// [`default_scaling`] with `tau_k = epsilon N_k` for a chosen `epsilon`.
pub fn scaling_with_epsilon(rs: &RootSystem, problem: &[(Weight, u64)], t: &[f64], epsilon: f64) -> Result<Scaling> {
    let r = rs.rank();
    if problem.iter().all(|(_, n)| *n == 0) {
        return Ok(Scaling::chambered(epsilon, 1.0, r));
    }
    let p = TensorProblem::from_powers(rs, problem, Some(epsilon))?;
    let x = p.x_scalar();
    if t.iter().all(|&v| v == 0.0) {
        Ok(Scaling::chambered(epsilon, x, r))
    } else {
        Ok(Scaling::gaussian(epsilon, x, p.forward_dual(t)))
    }
}

impl MeasureTable {
    /// Builds a table from unnormalized-by-construction probabilities, checking their sum.
    pub fn from_probabilities(
        rs: &RootSystem,
        problem: &[(Weight, u64)],
        t: &[f64],
        probs: Vec<(Weight, f64)>,
    ) -> Result<Self> {
        let total = probs.iter().map(|(_, p)| *p).collect::<CompensatedSum>().total();
        let raw_residual = total - 1.0;
        if !(raw_residual.abs() <= NORMALIZATION_TOLERANCE) {
            return Err(Error::Internal(format!("measure normalization residual {raw_residual:e}")));
        }
        let entries = probs.into_iter().map(|(w, p)| (w, p / total)).collect();
        Ok(Self {
            algebra: rs.spec(),
            problem: problem.to_vec(),
            t: t.to_vec(),
            entries,
            scaling: default_scaling(rs, problem, t)?,
            raw_residual,
        })
    }
}

/// `p_lambda = m_lambda chi_lambda(e^t) / prod_k chi_{nu_k}(e^t)^{N_k}`, evaluated in log form.
pub fn character_measure(rs: &RootSystem, table: &DecompositionTable, t: &[f64]) -> Result<MeasureTable> {
    if t.len() != rs.rank() {
        return Err(Error::RankMismatch { rank: rs.rank(), got: t.len() });
    }
    if t.iter().all(|&v| v == 0.0) {
        return plancherel_measure(rs, table);
    }
    let eval = CharacterEvaluator::new(rs, t)?;
    let mut ln_total = 0.0;
    for (nu, n) in table.problem() {
        ln_total += *n as f64 * eval.ln_character(rs, nu)?;
    }
    let items: Vec<(&Weight, &num_bigint::BigUint)> = table.iter().collect();
    let probs = items
        .par_iter()
        .map(|(w, m)| Ok(((*w).clone(), (ln_biguint(m) + eval.ln_character(rs, w)? - ln_total).exp())))
        .collect::<Result<Vec<_>>>()?;
    MeasureTable::from_probabilities(rs, table.problem(), t, probs)
}

/// `p_lambda = m_lambda dim V_lambda / prod_k dim(V_{nu_k})^{N_k}`, as exact ratios rounded once.
pub fn plancherel_measure(rs: &RootSystem, table: &DecompositionTable) -> Result<MeasureTable> {
    let denom = BigInt::from(table.product_dimension(rs)?);
    let items: Vec<(&Weight, &num_bigint::BigUint)> = table.iter().collect();
    let probs = items
        .par_iter()
        .map(|(w, m)| {
            let num = BigInt::from(*m * weyl_dimension(rs, w)?);
            let p = BigRational::new(num, denom.clone())
                .to_f64()
                .ok_or_else(|| Error::Internal("probability not representable".into()))?;
            Ok(((*w).clone(), p))
        })
        .collect::<Result<Vec<_>>>()?;
    MeasureTable::from_probabilities(rs, table.problem(), &vec![0.0; rs.rank()], probs)
}

/// Natural log of the asymptotic estimate for `p_lambda(t)`.
///
/// For regular `t` this is the local Gaussian form with `S~ = S - f(t) + (t, xi)`;
/// for `t = 0` it is the Plancherel form normalized by `f(tau, 0)`.
pub fn asymptotic_log_probability(p: &TensorProblem<f64>, lambda: &Weight, t: &[f64]) -> Result<f64> {
    let rs = p.root_system();
    let r = rs.rank();
    let eps = p.epsilon();
    let xi = p.scaled_root(lambda);
    p.check_regular(&xi)?;
    let rp = p.rate_point(&xi)?;
    let half_r = r as f64 / 2.0;
    let base = half_r * eps.ln() + rp.log_prefactor;
    if t.iter().all(|&v| v == 0.0) {
        let s_tilde = rp.s - p.f_at_origin();
        let vand: f64 = rs.root_pairings_real(&xi).iter().map(|v| (v / eps).ln()).sum();
        let rho: f64 = rs.rho_pairings().iter().map(|q| (*q.numer() as f64 / *q.denom() as f64).ln()).sum();
        return Ok(s_tilde / eps + base + vand - rho);
    }
    if !rs.is_regular_real(t) {
        return Err(Error::UseIntermediateScaling(t.to_vec()));
    }
    let (tp, _) = rs.dominant_reflect_real(t);
    let b = rs.form_real::<f64>();
    let s_tilde = rp.s - p.f_value(&tp) + dot(&tp, &b.mul_vec(&xi));
    let rho_t: f64 = rs.symmetrizer_real::<f64>().iter().zip(&tp).map(|(d, v)| d * v).sum();
    Ok(s_tilde / eps + base + rho_t - weyl_denominator(rs, &tp).ln_abs)
}

/// An axis-aligned grid of equal cells.
///
/// For the Gaussian law the axes are root coordinates of `a`; for chambered laws
/// they are fundamental-weight coordinates, where the chamber is the positive orthant.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Grid {
    pub lower: Vec<f64>,
    pub width: Vec<f64>,
    pub cells: Vec<usize>,
}

/// Target number of cells per axis for [`Grid::for_measure`].
pub const DEFAULT_CELLS: usize = 40;

impl Grid {
    pub fn rank(&self) -> usize {
        self.lower.len()
    }

    pub fn num_cells(&self) -> usize {
        self.cells.iter().product()
    }

    fn index(&self, p: &[f64]) -> Option<usize> {
        let mut idx = 0;
        for i in 0..self.rank() {
            let k = ((p[i] - self.lower[i]) / self.width[i]).floor();
            if !(k >= 0.0 && (k as usize) < self.cells[i]) {
                return None;
            }
            idx = idx * self.cells[i] + k as usize;
        }
        Some(idx)
    }

    fn cell_bounds(&self, mut idx: usize) -> (Vec<f64>, Vec<f64>) {
        let r = self.rank();
        let mut lo = vec![0.0; r];
        for i in (0..r).rev() {
            let k = idx % self.cells[i];
            idx /= self.cells[i];
            lo[i] = self.lower[i] + k as f64 * self.width[i];
        }
        let hi = lo.iter().zip(&self.width).map(|(l, w)| l + w).collect();
        (lo, hi)
    }

    /// Grid whose cell walls sit at lattice midpoints of the pushed-forward measure.
    ///
    /// Cell widths are whole multiples of the lattice period, so every cell holds the
    /// same number of lattice sites; this keeps the binned distance free of aliasing.
    /// The span is `+-6` standard deviations (Gaussian) or `[0, 5]` in root units
    /// (chambered, widened by `|u|` for the intermediate law).
    pub fn for_measure(rs: &RootSystem, m: &MeasureTable, law: &LimitDensity<f64>, target_cells: usize) -> Self {
        let r = rs.rank();
        let sc = &m.scaling;
        if law.chambered() {
            // Weight coordinates of the scaled lattice are integers times `step`.
            let step = sc.epsilon / sc.spread;
            let det = rs.cartan().map(|&c| num_rational::Ratio::from_integer(c)).determinant();
            let period = det.to_integer().unsigned_abs() as f64;
            let (_, hi) = law.support_box(5.0);
            let span = 2.0 * hi.iter().cloned().fold(0.0, f64::max);
            let k = ((span / target_cells as f64) / (period * step)).round().max(1.0);
            let width = k * period * step;
            let n = ((span + 0.5 * step) / width).ceil() as usize;
            Self { lower: vec![-0.5 * step; r], width: vec![width; r], cells: vec![n; r] }
        } else {
            let step = sc.epsilon / sc.spread;
            let (lo, hi) = law.support_box(6.0);
            // Lattice sites: (epsilon * top - center) / spread minus integer steps.
            let top = rs.weight_to_root_real(
                &m.entries.keys().next_back().map(|w| w.coords().iter().map(|&c| c as f64).collect::<Vec<_>>())
                    .unwrap_or_else(|| vec![0.0; r]),
            );
            let mut lower = Vec::with_capacity(r);
            let mut width = Vec::with_capacity(r);
            let mut cells = Vec::with_capacity(r);
            for i in 0..r {
                let site = (sc.epsilon * top[i] - sc.center[i]) / sc.spread;
                let k = (((hi[i] - lo[i]) / target_cells as f64) / step).round().max(1.0);
                let w = k * step;
                let offset = site + 0.5 * step;
                let start = offset + ((lo[i] - offset) / step).floor() * step;
                let n = ((hi[i] - start) / w).ceil() as usize;
                lower.push(start);
                width.push(w);
                cells.push(n.max(1));
            }
            Self { lower, width, cells }
        }
    }
}

/// Result of a binned comparison against a limit law.
#[derive(Clone, Debug, Serialize)]
pub struct TvReport {
    pub tv: f64,
    /// Limit mass inside the grid.
    pub covered: f64,
    /// Exact mass outside the grid.
    pub outside: f64,
    pub cells: usize,
}

/// Required limit mass inside the grid.
pub const MIN_COVERAGE: f64 = 1.0 - 1e-6;

/// Total-variation distance between the pushforward of `m` and `law`, binned on `grid`.
pub fn weak_convergence_distance(
    rs: &RootSystem,
    m: &MeasureTable,
    law: &LimitDensity<f64>,
    grid: &Grid,
) -> Result<TvReport> {
    let r = rs.rank();
    if grid.rank() != r || law.rank() != r {
        return Err(Error::RankMismatch { rank: r, got: grid.rank() });
    }
    if r > 2 {
        return Err(Error::Constraint("binned distances are implemented for rank <= 2".into()));
    }
    let chambered = law.chambered();
    let to_grid = |a: Vec<f64>| if chambered { rs.root_to_weight_real(&a) } else { a };

    let mut empirical = vec![CompensatedSum::default(); grid.num_cells()];
    let mut outside = CompensatedSum::default();
    for (w, &p) in &m.entries {
        match grid.index(&to_grid(m.scaling.map(rs, w))) {
            Some(i) => empirical[i].add(p),
            None => outside.add(p),
        }
    }

    let jac = if chambered {
        let d = rs.cartan_inverse().determinant();
        (*d.numer() as f64 / *d.denom() as f64).abs()
    } else {
        1.0
    };
    let density = |g: &[f64]| -> f64 {
        if chambered {
            law.density(&rs.weight_to_root_real(g)) * jac
        } else {
            law.density(g)
        }
    };
    let limit: Vec<f64> = (0..grid.num_cells())
        .into_par_iter()
        .map(|i| {
            let (mut lo, hi) = grid.cell_bounds(i);
            if chambered {
                for v in lo.iter_mut() {
                    *v = v.max(0.0);
                }
            }
            if lo.iter().zip(&hi).any(|(l, h)| l >= h) {
                return 0.0;
            }
            integrate_box(&density, &lo, &hi, 1e-11)
        })
        .collect();
    let covered = limit.iter().copied().collect::<CompensatedSum>().total();
    if covered < MIN_COVERAGE {
        return Err(Error::GridCoverage { covered });
    }
    let mut diff: CompensatedSum =
        empirical.iter().zip(&limit).map(|(e, l)| (e.total() - l).abs()).collect();
    diff.add((outside.total() - (1.0 - covered).max(0.0)).abs());
    Ok(TvReport { tv: 0.5 * diff.total(), covered, outside: outside.total(), cells: grid.num_cells() })
}

/// [`weak_convergence_distance`] on the default grid.
pub fn weak_convergence_default(rs: &RootSystem, m: &MeasureTable, law: &LimitDensity<f64>) -> Result<TvReport> {
    let grid = Grid::for_measure(rs, m, law, DEFAULT_CELLS);
    weak_convergence_distance(rs, m, law, &grid)
}

/// The limit law matching a measure's scaling: Plancherel at `t = 0`, else the local Gaussian.
pub fn natural_limit(p: &TensorProblem<f64>, t: &[f64]) -> Result<LimitDensity<f64>> {
    if t.iter().all(|&v| v == 0.0) {
        Ok(LimitDensity::plancherel(p.root_system()))
    } else {
        let rp = p.rate_point_from_temperature(t)?;
        LimitDensity::gaussian(rp.k)
    }
}
