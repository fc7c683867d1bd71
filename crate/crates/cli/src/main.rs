//! `tensorstat`: exact decompositions, character measures and their limit laws.
//!
//! Exit codes: 0 success, 1 usage, 2 domain error, 3 internal-consistency failure.

mod cache;

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use tensorstat::acceptance;
use tensorstat::legendre::density::{LimitDensity, LimitKind};
use tensorstat::legendre::TensorProblem;
use tensorstat::logspace::ln_biguint;
use tensorstat::markov::{with_threads, MarkovChain};
use tensorstat::measures::{
    asymptotic_log_probability, character_measure, default_epsilon, natural_limit, scaling_with_epsilon,
    weak_convergence_distance, Grid, Scaling, DEFAULT_CELLS,
};
use tensorstat::pde::{derivative_check, interior_grid, pde_residual};
use tensorstat::{Error, ErrorKind, RootSystem, Weight};

#[derive(Parser)]
#[command(name = "tensorstat", version, about = "Exact and asymptotic statistics of tensor-product decompositions")]
struct Cli {
    /// Worker threads (default: all cores). Results do not depend on this.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Write the main output here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact multiplicities of every irreducible component (cached JSON).
    Decompose {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long)]
        format: Option<Format>,
    },
    /// Character or Plancherel measure of the components.
    Measure {
        #[command(flatten)]
        problem: ProblemArgs,
        #[command(flatten)]
        temperature: TemperatureArgs,
        #[arg(long)]
        format: Option<Format>,
    },
    /// Rate-function data at one point, or exact vs asymptotic multiplicities for every component.
    Asymptotic {
        #[command(flatten)]
        problem: ProblemArgs,
        /// Highest weight whose scaled image is the evaluation point.
        #[arg(long, conflicts_with = "xi", allow_hyphen_values = true)]
        lambda: Option<String>,
        /// Evaluation point in simple-root coordinates.
        #[arg(long, allow_hyphen_values = true)]
        xi: Option<String>,
        #[arg(long)]
        format: Option<Format>,
    },
    /// Binned total-variation distance between the rescaled measure and its limit law.
    LimitCompare {
        #[command(flatten)]
        problem: ProblemArgs,
        #[command(flatten)]
        temperature: TemperatureArgs,
        /// Intermediate regime: sets `t = sqrt(epsilon / x) u` (root coordinates).
        #[arg(long, conflicts_with = "t", allow_hyphen_values = true)]
        u: Option<String>,
        /// Limit law; inferred from `--t` / `--u` when omitted.
        #[arg(long)]
        law: Option<String>,
        /// Target number of cells per axis.
        #[arg(long, default_value_t = DEFAULT_CELLS)]
        cells: usize,
        #[arg(long)]
        format: Option<Format>,
    },
    /// Monte Carlo paths of the Markov chain on dominant weights.
    Sample {
        #[command(flatten)]
        problem: ProblemArgs,
        #[command(flatten)]
        temperature: TemperatureArgs,
        #[arg(long, default_value_t = 10_000)]
        chains: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write every trajectory here as JSON lines.
        #[arg(long)]
        trajectories: Option<PathBuf>,
        #[arg(long)]
        format: Option<Format>,
    },
    /// Residual of the rate-function PDE and finite-difference checks on an interior grid.
    PdeCheck {
        #[arg(long)]
        algebra: String,
        #[arg(long, allow_hyphen_values = true)]
        rep: String,
        #[arg(long, default_value_t = 1.0)]
        tau: f64,
        /// Points per axis (radii and directions).
        #[arg(long, default_value_t = 10)]
        grid: usize,
        /// Fraction of the way to the domain boundary covered by the grid.
        #[arg(long, default_value_t = 0.9)]
        reach: f64,
        #[arg(long, default_value_t = 1e-5)]
        h: f64,
        #[arg(long)]
        format: Option<Format>,
    },
    /// Type-A checks: hook lengths vs tensor powers and closed forms vs the generic solver.
    HookCheck {
        #[arg(long, default_value_t = 3)]
        max_rank: usize,
        #[arg(long, default_value_t = 12)]
        max_power: u64,
        /// Random interior points per rank for the closed-form comparison.
        #[arg(long, default_value_t = 50)]
        points: usize,
        #[arg(long, default_value_t = 4)]
        seed: u64,
    },
    /// The full acceptance suite.
    Selftest {
        /// Run only these criteria (1-12).
        #[arg(long, value_delimiter = ',')]
        only: Vec<usize>,
    },
}

#[derive(Args, Clone)]
struct ProblemArgs {
    /// Algebra name such as A2, B3, G2.
    #[arg(long)]
    algebra: String,
    /// Highest weight in fundamental-weight coordinates, e.g. 1,0. Repeatable.
    #[arg(long, required = true, allow_hyphen_values = true)]
    rep: Vec<String>,
    /// Tensor power of the matching --rep (default 1). Repeatable.
    #[arg(long)]
    power: Vec<u64>,
    /// Scale parameter; defaults to 1 / sum of powers.
    #[arg(long)]
    epsilon: Option<f64>,
    /// Recompute even if a cached table exists.
    #[arg(long)]
    no_cache: bool,
}

#[derive(Args, Clone)]
struct TemperatureArgs {
    /// Temperature, default 0.
    #[arg(long, allow_hyphen_values = true)]
    t: Option<String>,
    #[arg(long, value_enum, default_value_t = Basis::Root)]
    t_basis: Basis,
}

#[derive(Clone, Copy, ValueEnum)]
enum Basis {
    Root,
    Weight,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

/// A command's failure and the exit code it maps to.
enum Failure {
    Lib(Error),
    Usage(String),
    /// A check ran to completion and failed.
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self::Lib(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self::Lib(e.into())
    }
}

type Outcome = Result<String, Failure>;

struct Problem {
    rs: RootSystem,
    powers: Vec<(Weight, u64)>,
    epsilon: Option<f64>,
    use_cache: bool,
}

impl Problem {
    fn parse(a: &ProblemArgs) -> Result<Self, Failure> {
        let rs = RootSystem::from_name(&a.algebra)?;
        if !a.power.is_empty() && a.power.len() != a.rep.len() {
            return Err(Failure::Usage(format!("{} --rep values but {} --power values", a.rep.len(), a.power.len())));
        }
        let mut powers = Vec::with_capacity(a.rep.len());
        for (i, r) in a.rep.iter().enumerate() {
            let nu: Weight = r.parse()?;
            nu.check_rank(rs.rank())?;
            nu.check_dominant()?;
            powers.push((nu, a.power.get(i).copied().unwrap_or(1)));
        }
        if let Some(e) = a.epsilon {
            if !(e > 0.0) {
                return Err(Failure::Usage("--epsilon must be positive".into()));
            }
        }
        Ok(Self { rs, powers, epsilon: a.epsilon, use_cache: !a.no_cache })
    }

    fn epsilon(&self) -> f64 {
        self.epsilon.unwrap_or_else(|| default_epsilon(&self.powers))
    }

    fn table(&self) -> Result<tensorstat::DecompositionTable, Failure> {
        Ok(cache::load_or_compute(&self.rs, &self.powers, self.use_cache)?)
    }

    fn tensor_problem(&self) -> Result<TensorProblem<f64>, Failure> {
        Ok(TensorProblem::from_powers(&self.rs, &self.powers, Some(self.epsilon()))?)
    }
}

fn parse_reals(s: &str, rank: usize, what: &str) -> Result<Vec<f64>, Failure> {
    let v = s
        .trim()
        .trim_start_matches(['(', '['])
        .trim_end_matches([')', ']'])
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| Failure::Usage(format!("{what} {p:?}: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    if v.len() != rank {
        return Err(Error::RankMismatch { rank, got: v.len() }.into());
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Failure::Usage(format!("{what} must be finite")));
    }
    Ok(v)
}

fn temperature(rs: &RootSystem, a: &TemperatureArgs) -> Result<Vec<f64>, Failure> {
    let Some(s) = &a.t else { return Ok(vec![0.0; rs.rank()]) };
    let v = parse_reals(s, rs.rank(), "--t")?;
    Ok(match a.t_basis {
        Basis::Root => v,
        Basis::Weight => rs.weight_to_root_real(&v),
    })
}

fn problem_json(powers: &[(Weight, u64)]) -> Value {
    Value::Array(powers.iter().map(|(nu, n)| json!({"rep": nu.coords(), "power": n})).collect())
}

fn float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:e}")
    } else {
        "nan".into()
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn weight_header(r: usize) -> String {
    (1..=r).map(|i| format!("lambda_{i}")).collect::<Vec<_>>().join(",")
}

fn coords_csv(w: &Weight) -> String {
    w.coords().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
}

fn decompose(p: &ProblemArgs, format: Option<Format>) -> Outcome {
    let p = Problem::parse(p)?;
    let table = p.table()?;
    table.check_dimension_rule(&p.rs)?;
    Ok(match format.unwrap_or(Format::Json) {
        Format::Json => pretty(&table.to_json()),
        Format::Csv => {
            let mut out = format!("{},multiplicity\n", weight_header(p.rs.rank()));
            for (w, m) in table.iter() {
                let _ = writeln!(out, "{},{m}", coords_csv(w));
            }
            out
        }
    })
}

fn measure(p: &ProblemArgs, t: &TemperatureArgs, format: Option<Format>) -> Outcome {
    let p = Problem::parse(p)?;
    let t = temperature(&p.rs, t)?;
    let table = p.table()?;
    let scaling = scaling_with_epsilon(&p.rs, table.problem(), &t, p.epsilon())?;
    let m = character_measure(&p.rs, &table, &t)?.with_scaling(scaling);
    Ok(match format.unwrap_or(Format::Csv) {
        Format::Json => pretty(&m.to_json()),
        Format::Csv => {
            let tp = p.tensor_problem()?;
            m.to_csv(&p.rs, |w| asymptotic_log_probability(&tp, w, &t).ok())
        }
    })
}

fn asymptotic(p: &ProblemArgs, lambda: &Option<String>, xi: &Option<String>, format: Option<Format>) -> Outcome {
    let p = Problem::parse(p)?;
    let tp = p.tensor_problem()?;
    let r = p.rs.rank();
    let point = match (lambda, xi) {
        (Some(l), _) => {
            let w: Weight = l.parse()?;
            w.check_rank(r)?;
            Some(tp.scaled_root(&w))
        }
        (None, Some(x)) => Some(parse_reals(x, r, "--xi")?),
        (None, None) => None,
    };
    if let Some(xi) = point {
        if format == Some(Format::Csv) {
            return Err(Failure::Usage("a single rate point is emitted as JSON".into()));
        }
        let rp = tp.rate_point(&xi)?;
        let mut v = serde_json::to_value(&rp).map_err(Error::from)?;
        v["det_K"] = json!(rp.det_k());
        v["epsilon"] = json!(tp.epsilon());
        return Ok(pretty(&v));
    }
    if format == Some(Format::Json) {
        return Err(Failure::Usage("the per-weight comparison is emitted as CSV; pass --lambda or --xi for JSON".into()));
    }
    let table = p.table()?;
    let mut out =
        format!("{},multiplicity,ln_multiplicity,asymptotic_ln_multiplicity,ratio\n", weight_header(r));
    for (w, m) in table.iter() {
        let exact = ln_biguint(m);
        let est = tp.asymptotic_log_multiplicity(w).ok();
        let _ = writeln!(
            out,
            "{},{m},{},{},{}",
            coords_csv(w),
            float(exact),
            est.map_or("nan".into(), float),
            est.map_or("nan".into(), |e| float((e - exact).exp()))
        );
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn limit_compare(
    p: &ProblemArgs,
    t: &TemperatureArgs,
    u: &Option<String>,
    law: &Option<String>,
    cells: usize,
    format: Option<Format>,
) -> Outcome {
    let p = Problem::parse(p)?;
    let r = p.rs.rank();
    let tp = p.tensor_problem()?;
    let (eps, x) = (tp.epsilon(), tp.x_scalar());
    let table = p.table()?;
    let requested: Option<LimitKind> = law.as_deref().map(str::parse).transpose()?;
    let (t, u, law, scaling) = match u {
        Some(u) => {
            let u = parse_reals(u, r, "--u")?;
            let t: Vec<f64> = u.iter().map(|v| (eps / x).sqrt() * v).collect();
            let law = LimitDensity::intermediate(&p.rs, &u)?;
            (t, Some(u), law, Scaling::chambered(eps, x, r))
        }
        None => {
            let t = temperature(&p.rs, t)?;
            let law = natural_limit(&tp, &t)?;
            let scaling = scaling_with_epsilon(&p.rs, table.problem(), &t, eps)?;
            (t, None, law, scaling)
        }
    };
    if let Some(k) = requested {
        if k != law.kind() {
            return Err(Failure::Usage(format!(
                "--law {k:?} does not match the inputs, which select {:?}; use --t 0 for plancherel, --u for intermediate",
                law.kind()
            )));
        }
    }
    let m = character_measure(&p.rs, &table, &t)?.with_scaling(scaling);
    let grid = Grid::for_measure(&p.rs, &m, &law, cells);
    let rep = weak_convergence_distance(&p.rs, &m, &law, &grid)?;
    let kind = serde_json::to_value(law.kind()).map_err(Error::from)?;
    Ok(match format.unwrap_or(Format::Json) {
        Format::Json => pretty(&json!({
            "algebra": p.rs.spec().to_string(),
            "problem": problem_json(table.problem()),
            "law": kind,
            "t": t,
            "u": u,
            "scaling": m.scaling,
            "grid": grid,
            "tv": rep.tv,
            "covered": rep.covered,
            "outside": rep.outside,
            "cells": rep.cells,
        })),
        Format::Csv => format!(
            "law,tv,covered,outside,cells\n{},{},{},{},{}\n",
            kind.as_str().unwrap_or("?"),
            float(rep.tv),
            float(rep.covered),
            float(rep.outside),
            rep.cells
        ),
    })
}

fn sample(
    p: &ProblemArgs,
    t: &TemperatureArgs,
    chains: u64,
    seed: u64,
    trajectories: &Option<PathBuf>,
    format: Option<Format>,
) -> Outcome {
    let p = Problem::parse(p)?;
    let [(v, n)] = p.powers.as_slice() else {
        return Err(Failure::Usage("sample takes exactly one --rep; --power is the number of steps".into()));
    };
    let t = temperature(&p.rs, t)?;
    let chain = MarkovChain::new(&p.rs, v, &t)?;
    let outcome = chain.sample_paths(*n, chains, seed, trajectories.is_some())?;
    let exact = chain.evolve_exact(*n)?;
    let tv = outcome.empirical.tv_distance(&exact);
    if let Some(path) = trajectories {
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        for tr in &outcome.trajectories {
            writeln!(f, "{}", tr.to_json_line())?;
        }
        f.flush()?;
    }
    Ok(match format.unwrap_or(Format::Json) {
        Format::Json => pretty(&json!({
            "algebra": p.rs.spec().to_string(),
            "rep": v.coords(),
            "steps": n,
            "t": t,
            "chains": chains,
            "seed": seed,
            "tv_to_exact": tv,
            "counts": outcome.counts.iter().map(|(w, c)| json!([w.coords(), c])).collect::<Vec<_>>(),
        })),
        Format::Csv => {
            let mut out = format!("{},count,empirical,exact\n", weight_header(p.rs.rank()));
            let keys: std::collections::BTreeSet<&Weight> =
                outcome.counts.keys().chain(exact.entries.keys()).collect();
            for w in keys {
                let _ = writeln!(
                    out,
                    "{},{},{},{}",
                    coords_csv(w),
                    outcome.counts.get(w).copied().unwrap_or(0),
                    float(outcome.empirical.probability(w)),
                    float(exact.probability(w))
                );
            }
            out
        }
    })
}

/// PDE residual bound.
const PDE_TOLERANCE: f64 = 1e-9;
/// Finite-difference agreement bound.
const DERIVATIVE_TOLERANCE: f64 = 1e-6;

#[allow(clippy::too_many_arguments)]
fn pde_check(algebra: &str, rep: &str, tau: f64, grid: usize, reach: f64, h: f64, format: Option<Format>) -> Outcome {
    let rs = RootSystem::from_name(algebra)?;
    let nu: Weight = rep.parse()?;
    nu.check_rank(rs.rank())?;
    nu.check_dominant()?;
    if !(0.0 < reach && reach < 1.0) {
        return Err(Failure::Usage("--reach must lie in (0, 1)".into()));
    }
    let p = TensorProblem::new(&rs, &[(nu.clone(), tau)], 1.0)?;
    let mut rows = Vec::new();
    let (mut worst_res, mut worst_dev) = (0f64, 0f64);
    for xi in interior_grid(&p, grid, grid, reach) {
        let res = pde_residual(&p, &xi)?;
        let dev = derivative_check(&p, &xi, h)?;
        worst_res = worst_res.max(res.residual);
        worst_dev = worst_dev.max(dev.max_deviation);
        rows.push((res, dev));
    }
    let passed = worst_res <= PDE_TOLERANCE && worst_dev <= DERIVATIVE_TOLERANCE;
    let out = match format.unwrap_or(Format::Json) {
        Format::Json => pretty(&json!({
            "algebra": rs.spec().to_string(),
            "rep": nu.coords(),
            "tau": tau,
            "h": h,
            "points": rows.iter().map(|(r, d)| json!({
                "xi": r.xi, "lhs": r.lhs, "rhs": r.rhs, "residual": r.residual,
                "derivative_deviation": d.max_deviation,
            })).collect::<Vec<_>>(),
            "max_residual": worst_res,
            "max_derivative_deviation": worst_dev,
            "passed": passed,
        })),
        Format::Csv => {
            let r = rs.rank();
            let cols: Vec<String> = (1..=r).map(|i| format!("xi_{i}")).collect();
            let mut out = format!("{},lhs,rhs,residual,derivative_deviation\n", cols.join(","));
            for (res, dev) in &rows {
                let xs: Vec<String> = res.xi.iter().map(|v| float(*v)).collect();
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    xs.join(","),
                    float(res.lhs),
                    float(res.rhs),
                    float(res.residual),
                    float(dev.max_deviation)
                );
            }
            out
        }
    };
    if passed {
        Ok(out)
    } else {
        Err(Failure::Check(format!(
            "{out}max residual {worst_res:e} (bound {PDE_TOLERANCE:e}), max derivative deviation {worst_dev:e} (bound {DERIVATIVE_TOLERANCE:e})"
        )))
    }
}

fn hook_check(max_rank: usize, max_power: u64, points: usize, seed: u64) -> Outcome {
    let (hooks_ok, hooks) = acceptance::hook_suite(max_rank, max_power)?;
    let (forms_ok, forms) = acceptance::type_a_closed_forms(points, seed)?;
    let out = format!(
        "hook lengths {}: {hooks}\nclosed forms {}: {forms}\n",
        if hooks_ok { "PASS" } else { "FAIL" },
        if forms_ok { "PASS" } else { "FAIL" }
    );
    if hooks_ok && forms_ok {
        Ok(out)
    } else {
        Err(Failure::Check(out))
    }
}

fn selftest(only: &[usize]) -> Outcome {
    let ids: Vec<usize> = if only.is_empty() { (1..=acceptance::COUNT).collect() } else { only.to_vec() };
    if let Some(bad) = ids.iter().find(|&&i| !(1..=acceptance::COUNT).contains(&i)) {
        return Err(Failure::Usage(format!("no criterion {bad}; criteria are 1-{}", acceptance::COUNT)));
    }
    let mut out = String::new();
    let mut failed = Vec::new();
    for id in ids {
        let o = acceptance::run_criterion(id);
        // Progress goes out as each criterion finishes.
        println!("{o}");
        let _ = writeln!(out, "{o}");
        if !o.passed() {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        Ok(String::new())
    } else {
        Err(Failure::Check(format!("failed criteria: {failed:?}")))
    }
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Decompose { problem, format } => decompose(problem, *format),
        Command::Measure { problem, temperature, format } => measure(problem, temperature, *format),
        Command::Asymptotic { problem, lambda, xi, format } => asymptotic(problem, lambda, xi, *format),
        Command::LimitCompare { problem, temperature, u, law, cells, format } => {
            limit_compare(problem, temperature, u, law, *cells, *format)
        }
        Command::Sample { problem, temperature, chains, seed, trajectories, format } => {
            sample(problem, temperature, *chains, *seed, trajectories, *format)
        }
        Command::PdeCheck { algebra, rep, tau, grid, reach, h, format } => {
            pde_check(algebra, rep, *tau, *grid, *reach, *h, *format)
        }
        Command::HookCheck { max_rank, max_power, points, seed } => hook_check(*max_rank, *max_power, *points, *seed),
        Command::Selftest { only } => selftest(only),
    }
}

fn emit(cli: &Cli, text: &str) -> std::io::Result<()> {
    match &cli.output {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = match with_threads(cli.threads, || run(&cli)) {
        Ok(r) => r,
        Err(e) => Err(Failure::Lib(e)),
    };
    match result {
        Ok(text) => match emit(&cli, &text) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(1)
            }
        },
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Check(msg)) => {
            let _ = emit(&cli, &msg);
            eprintln!("check failed");
            ExitCode::from(3)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e.kind() {
                ErrorKind::Usage => 1,
                ErrorKind::Domain => 2,
                ErrorKind::Internal => 3,
            })
        }
    }
}
