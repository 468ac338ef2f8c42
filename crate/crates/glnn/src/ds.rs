//! The derivative on irreducibles, its iteration, signed superdimensions,
//! the left-move count D, the determinant exponent ℓ, and their identities.
//!
//! The derivative of a weight with sectors S1..Sk has one summand per
//! sector, obtained by deleting the sector's leftmost ∨ from the support,
//! with a parity-shift bit that tracks the sign change.

use crate::diagrams::sectors;
use crate::weights::Weight;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DsError {
    #[error("the empty weight has no derivative")]
    EmptyWeight,
    #[error("iteration depth {0} exceeds rank {1}")]
    TooManySteps(usize, usize),
}

/// One summand of the derivative: a rank-(n−1) weight plus the parity-shift
/// bit of its summand.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct DerivativeSummand {
    pub weight: Weight,
    pub shift: u8,
}

/// Superdimension with its sign; the sign is `(−1)^parity` and the absolute
/// value is the dimension of the corresponding semisimplified object.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct SignedDimension {
    pub sdim: i128,
}

impl SignedDimension {
    pub fn dim(&self) -> u128 {
        self.sdim.unsigned_abs()
    }
}

/// Derivative summands, one per sector, left to right; multiplicity free.
pub fn ds(w: &Weight) -> Result<Vec<DerivativeSummand>, DsError> {
    if w.rank() == 0 {
        return Err(DsError::EmptyWeight);
    }
    let (secs, _) = sectors(w);
    let support = w.support();
    let p = w.parity();
    let out = secs
        .iter()
        .map(|s| {
            let pts: Vec<i64> = support.points().iter().copied().filter(|&x| x != s.start).collect();
            let child = Weight::from_support(&pts);
            let shift = (p + child.parity()) % 2;
            DerivativeSummand { weight: child, shift }
        })
        .collect();
    Ok(out)
}

/// m-fold derivative, flattened to a multiset of `(weight, shift)` pairs
/// with shifts added mod 2; sorted for determinism.
pub fn ds_iterate(w: &Weight, m: usize) -> Result<Vec<(Weight, u8)>, DsError> {
    if m > w.rank() {
        return Err(DsError::TooManySteps(m, w.rank()));
    }
    let mut level: Vec<(Weight, u8)> = vec![(w.clone(), 0)];
    for _ in 0..m {
        let mut next = Vec::with_capacity(level.len() * 2);
        for (v, s) in &level {
            for d in ds(v)? {
                next.push((d.weight, (s + d.shift) % 2));
            }
        }
        level = next;
    }
    level.sort();
    Ok(level)
}

/// Signed superdimension, computed by descending through the first sector:
/// `|sdim(w)| · r1 = |sdim(w1)| · n`, with sign `(−1)^parity`.
pub fn sdim(w: &Weight) -> SignedDimension {
    let a = sdim_abs(w);
    let a = i128::try_from(a).expect("superdimension exceeds the signed 128-bit range");
    let sdim = if w.parity() == 1 { -a } else { a };
    SignedDimension { sdim }
}

fn sdim_abs(w: &Weight) -> u128 {
    let n = w.rank();
    if n == 0 {
        return 1;
    }
    let (secs, _) = sectors(w);
    let r1 = secs[0].rank() as u128;
    let pts: Vec<i64> = w.support().points().iter().copied().filter(|&x| x != secs[0].start).collect();
    let child = sdim_abs(&Weight::from_support(&pts));
    let prod = child.checked_mul(n as u128).expect("superdimension exceeds 128-bit range");
    assert_eq!(prod % r1, 0, "superdimension ratio law must divide exactly");
    prod / r1
}

/// Total number of left moves to the associated basic weight:
/// `D = Σ rν (d0 + d1 + … + d(ν−1))` with `d0 = λn`.
pub fn left_moves(w: &Weight) -> i64 {
    let (_, p) = sectors(w);
    let mut prefix = p.d0_shift;
    let mut total = 0i64;
    for (j, &r) in p.ranks.iter().enumerate() {
        if j > 0 {
            prefix += p.gaps[j - 1];
        }
        total += r as i64 * prefix;
    }
    total
}

/// Berezin exponent of the determinant: `ℓ = |sdim| · D / n`, always an
/// integer.
pub fn ell(w: &Weight) -> i128 {
    let n = w.rank() as i128;
    if n == 0 {
        return 0;
    }
    let d = i128::try_from(sdim(w).dim()).expect("superdimension exceeds the signed 128-bit range");
    let num = d.checked_mul(left_moves(w) as i128).expect("determinant exponent exceeds 128-bit range");
    assert!(
        num % n == 0,
        "determinant exponent of {w} is not integral: |sdim|*D = {num}, n = {n}"
    );
    num / n
}

/// The determinant of the positively-normalized irreducible is the ℓ-th
/// Berezin power up to negligible summands. The formula for the non-obvious
/// cases rests on an open conjecture; callers should surface that flag.
pub fn det_berezin_power(w: &Weight) -> i128 {
    ell(w)
}
