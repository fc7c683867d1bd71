use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An integral weight in fundamental-weight coordinates: `lambda = sum_i c_i omega_i`.
///
/// Ordering is lexicographic on the coordinates, which is the canonical order for
/// every serialized table.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn new(coords: impl Into<Vec<i64>>) -> Self {
        Self(coords.into())
    }

    pub fn zero(rank: usize) -> Self {
        Self(vec![0; rank])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn check_rank(&self, rank: usize) -> Result<()> {
        if self.rank() != rank {
            return Err(Error::RankMismatch { rank, got: self.rank() });
        }
        Ok(())
    }

    pub fn check_dominant(&self) -> Result<()> {
        if !self.is_dominant() {
            return Err(Error::NotDominant(self.0.clone()));
        }
        Ok(())
    }
}

impl Add for &Weight {
    type Output = Weight;
    fn add(self, rhs: &Weight) -> Weight {
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Weight {
    type Output = Weight;
    fn sub(self, rhs: &Weight) -> Weight {
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl std::str::FromStr for Weight {
    type Err = Error;

    /// Parses `"1,0,2"` (whitespace tolerated).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches(['(', '[']).trim_end_matches([')', ']']);
        s.split(',')
            .map(|p| p.trim().parse::<i64>().map_err(|e| Error::Parse(format!("{p:?}: {e}"))))
            .collect::<Result<Vec<_>>>()
            .map(Weight)
    }
}
