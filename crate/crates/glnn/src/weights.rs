//! Core weight arithmetic: parsing, supports, Berezin twists, normalization,
//! parity, degree, and the atypicality of general dominant weights.

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WeightError {
    #[error("weight entries must be weakly decreasing, got {0:?}")]
    NotDecreasing(Vec<i64>),
    #[error("cannot parse weight entry {0:?}")]
    BadEntry(String),
    #[error("dominant weight halves must have equal length n, got {0} and {1}")]
    HalfLengths(usize, usize),
}

/// A maximal atypical highest weight `[λ1 ≥ … ≥ λn]` of GL(n|n).
///
/// The rank-0 (empty) weight is allowed; it is the terminal value of the
/// iterated derivative.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Weight(Vec<i64>);

impl Weight {
    pub fn new(entries: Vec<i64>) -> Result<Self, WeightError> {
        if entries.windows(2).any(|w| w[0] < w[1]) {
            return Err(WeightError::NotDecreasing(entries));
        }
        Ok(Weight(entries))
    }

    pub fn empty() -> Self {
        Weight(Vec::new())
    }

    /// Accepts `[3,2,1,0]` or `3,2,1,0`; `[]` is the empty weight.
    pub fn parse(s: &str) -> Result<Self, WeightError> {
        let t = s.trim();
        let t = t.strip_prefix('[').and_then(|t| t.strip_suffix(']')).unwrap_or(t);
        let t = t.trim();
        if t.is_empty() {
            return Ok(Weight::empty());
        }
        let entries = t
            .split(',')
            .map(|p| p.trim().parse::<i64>().map_err(|_| WeightError::BadEntry(p.trim().to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Weight::new(entries)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    /// ∨-positions of the weight diagram: `{λi + 1 − i}`, strictly decreasing.
    pub fn support(&self) -> Support {
        Support(self.0.iter().enumerate().map(|(i, &l)| l + 1 - (i as i64 + 1)).collect())
    }

    /// Inverse of [`Weight::support`]: `λi = si + i − 1` for points sorted
    /// in decreasing order.
    pub fn from_support(points: &[i64]) -> Self {
        let mut pts: Vec<i64> = points.to_vec();
        pts.sort_unstable_by(|a, b| b.cmp(a));
        debug_assert!(pts.windows(2).all(|w| w[0] > w[1]), "support points must be distinct");
        Weight(pts.iter().enumerate().map(|(i, &s)| s + (i as i64 + 1) - 1).collect())
    }

    /// Tensoring with the r-th Berezin power adds r to every entry.
    pub fn berezin(&self, r: i64) -> Self {
        Weight(self.0.iter().map(|&l| l + r).collect())
    }

    /// Twist so the last entry becomes 0; returns `(w0, r)` with
    /// `w = berezin(w0, r)`.
    pub fn normalize(&self) -> (Self, i64) {
        let r = self.0.last().copied().unwrap_or(0);
        (self.berezin(-r), r)
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn parity(&self) -> u8 {
        (self.degree().rem_euclid(2)) as u8
    }

    /// The dominant GL(n|n) weight `(λ1..λn | −λn..−λ1)`, the mirrored
    /// convention that makes the crosses and circles of the diagram cancel.
    pub fn to_dominant(&self) -> DominantWeight {
        let lower: Vec<i64> = self.0.iter().rev().map(|&l| -l).collect();
        DominantWeight { upper: self.0.clone(), lower }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The ∨-positions of a maximal atypical weight diagram, sorted decreasing.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Support(Vec<i64>);

impl Support {
    pub fn points(&self) -> &[i64] {
        &self.0
    }

    /// Points in increasing order.
    pub fn ascending(&self) -> Vec<i64> {
        let mut v = self.0.clone();
        v.reverse();
        v
    }

    pub fn translate(&self, r: i64) -> Support {
        Support(self.0.iter().map(|&x| x + r).collect())
    }
}

/// A general dominant weight `(λ1..λn | λn+1..λ2n)`, both halves weakly
/// decreasing. Only used for the atypicality degree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DominantWeight {
    upper: Vec<i64>,
    lower: Vec<i64>,
}

impl DominantWeight {
    pub fn new(upper: Vec<i64>, lower: Vec<i64>) -> Result<Self, WeightError> {
        if upper.len() != lower.len() {
            return Err(WeightError::HalfLengths(upper.len(), lower.len()));
        }
        if upper.windows(2).any(|w| w[0] < w[1]) {
            return Err(WeightError::NotDecreasing(upper));
        }
        if lower.windows(2).any(|w| w[0] < w[1]) {
            return Err(WeightError::NotDecreasing(lower));
        }
        Ok(DominantWeight { upper, lower })
    }

    pub fn n(&self) -> usize {
        self.upper.len()
    }

    /// Number of ∨-labels `|I× ∩ I∘|` with `I× = {λi − i + 1}` and
    /// `I∘ = {i − n − λ(n+i)}`; ranges over 0..=n, and n means maximal
    /// atypical.
    pub fn atypicality(&self) -> usize {
        let n = self.n() as i64;
        let crosses: std::collections::BTreeSet<i64> = self
            .upper
            .iter()
            .enumerate()
            .map(|(i, &l)| l - (i as i64 + 1) + 1)
            .collect();
        let circles: std::collections::BTreeSet<i64> = self
            .lower
            .iter()
            .enumerate()
            .map(|(i, &l)| (i as i64 + 1) - n - l)
            .collect();
        crosses.intersection(&circles).count()
    }
}
