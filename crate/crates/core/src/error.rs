use thiserror::Error;

/// Coarse classification used by the CLI to pick an exit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    /// Bad arguments: invalid algebra, malformed weights.
    Usage,
    /// Mathematically out-of-domain input: non-regular directions, points outside
    /// the Legendre domain, walls, oversized Weyl groups.
    Domain,
    /// A certified identity failed; indicates a bug rather than bad input.
    Internal,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid algebra {family}{rank}: {reason}")]
    InvalidAlgebra { family: char, rank: usize, reason: &'static str },

    #[error("weight has {got} coordinates, algebra has rank {rank}")]
    RankMismatch { rank: usize, got: usize },

    #[error("weight {0:?} is not dominant")]
    NotDominant(Vec<i64>),

    #[error("Weyl group too large: at least {found} elements exceed cap {cap}")]
    WeylGroupTooLarge { found: usize, cap: usize },

    #[error("Weyl denominator vanishes: t is not regular")]
    DenominatorVanishes,

    #[error("point {0:?} lies outside the Legendre domain")]
    OutsideLegendreDomain(Vec<f64>),

    #[error("Newton solver did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("non-regular direction {0:?}: some pairing with a positive root vanishes")]
    NonRegular(Vec<f64>),

    #[error("temperature {0:?} is neither regular nor zero; use the intermediate scaling")]
    UseIntermediateScaling(Vec<f64>),

    #[error("u = {0:?} lies on a wall; use the Plancherel density")]
    UsePlancherel(Vec<f64>),

    #[error("decomposition table exceeds entry cap {cap}")]
    TableTooLarge { cap: usize },

    #[error("invalid partition {0:?}")]
    InvalidPartition(Vec<u64>),

    #[error("constraint violated: {0}")]
    Constraint(String),

    #[error("grid covers only {covered} of the limit mass")]
    GridCoverage { covered: f64 },

    #[error("finite-difference step leaves the domain at {0:?}")]
    StepLeavesDomain(Vec<f64>),

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        use Error::*;
        match self {
            InvalidAlgebra { .. } | RankMismatch { .. } | NotDominant(_) | InvalidPartition(_)
            | Parse(_) | Json(_) | Io(_) => ErrorKind::Usage,
            Internal(_) => ErrorKind::Internal,
            _ => ErrorKind::Domain,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
