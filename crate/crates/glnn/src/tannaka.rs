//! Classification of the reductive group generated by an irreducible in the
//! semisimplified category, the duality type that drives it, class
//! enumeration, and branching.

use crate::diagrams::{associated_basic, class_key, is_weakly_selfdual};
use crate::ds::{ds, ell, sdim, DerivativeSummand, DsError, SignedDimension};
use crate::weights::Weight;
use serde::Serialize;
use std::fmt;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum GroupFamily {
    #[serde(rename = "SL")]
    Sl,
    #[serde(rename = "GL")]
    Gl,
    #[serde(rename = "SO")]
    So,
    #[serde(rename = "GSO")]
    Gso,
    #[serde(rename = "Sp")]
    Sp,
    #[serde(rename = "GSp")]
    Gsp,
    #[serde(rename = "Torus")]
    Torus,
}

impl GroupFamily {
    /// The derived group shared along a Berezin orbit.
    pub fn derived(self) -> GroupFamily {
        match self {
            GroupFamily::Sl | GroupFamily::Gl => GroupFamily::Sl,
            GroupFamily::So | GroupFamily::Gso => GroupFamily::So,
            GroupFamily::Sp | GroupFamily::Gsp => GroupFamily::Sp,
            GroupFamily::Torus => GroupFamily::Torus,
        }
    }
}

impl fmt::Display for GroupFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GroupFamily::Sl => "SL",
            GroupFamily::Gl => "GL",
            GroupFamily::So => "SO",
            GroupFamily::Gso => "GSO",
            GroupFamily::Sp => "Sp",
            GroupFamily::Gsp => "GSp",
            GroupFamily::Torus => "Torus",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct TannakaGroup {
    pub family: GroupFamily,
    pub dim: u128,
    /// True where the classification rests on open conjectures (even
    /// orthogonal cases and the special-linear case of vanishing ℓ).
    pub conditional: bool,
}

impl fmt::Display for TannakaGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.family, self.dim)?;
        if self.conditional {
            write!(f, "*")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Pairing {
    Even,
    Odd,
}

/// Selfduality data of the positively-normalized irreducible.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct DualityType {
    /// True for weakly selfdual (the dual is a Berezin twist of the weight).
    pub selfdual: bool,
    /// Parity of the invariant pairing; only defined in the selfdual case.
    /// It is constant along the twist class and is read off the associated
    /// basic weight: even exactly when that basic has positive sign.
    pub pairing: Option<Pairing>,
    /// ℓ = 0 within the selfdual case, i.e. the dual is the weight itself.
    pub proper: Option<bool>,
}

pub fn duality_type(w: &Weight) -> DualityType {
    if !is_weakly_selfdual(w) {
        return DualityType { selfdual: false, pairing: None, proper: None };
    }
    let pairing = if sdim(associated_basic(w).weight()).sdim > 0 {
        Pairing::Even
    } else {
        Pairing::Odd
    };
    DualityType { selfdual: true, pairing: Some(pairing), proper: Some(ell(w) == 0) }
}

/// The reductive group generated by the image of the irreducible in the
/// semisimplified category.
pub fn classify(w: &Weight) -> TannakaGroup {
    let d = sdim(w).dim();
    if d == 1 {
        return TannakaGroup { family: GroupFamily::Torus, dim: 1, conditional: false };
    }
    let dt = duality_type(w);
    let proper = dt.proper.unwrap_or(false);
    if d == 2 {
        // Dimension-two objects are always weakly selfdual; the even
        // orthogonal group degenerates there, so the split is by ℓ alone.
        let family = if proper { GroupFamily::Sl } else { GroupFamily::Gl };
        return TannakaGroup { family, dim: 2, conditional: false };
    }
    let (family, conditional) = if !dt.selfdual {
        if ell(w) == 0 {
            (GroupFamily::Sl, true)
        } else {
            (GroupFamily::Gl, false)
        }
    } else {
        match (dt.pairing.unwrap(), proper) {
            (Pairing::Even, true) => (GroupFamily::So, true),
            (Pairing::Odd, true) => (GroupFamily::Sp, false),
            (Pairing::Even, false) => (GroupFamily::Gso, true),
            (Pairing::Odd, false) => (GroupFamily::Gsp, false),
        }
    };
    TannakaGroup { family, dim: d, conditional }
}

/// One entry per equivalence class whose canonical representative has
/// degree at most `degree_bound`; sorted by (degree, entries).
pub fn enumerate_classes(n: usize, degree_bound: i64) -> Vec<(Weight, TannakaGroup)> {
    let mut out = Vec::new();
    if n == 0 {
        if degree_bound >= 0 {
            out.push((Weight::empty(), classify(&Weight::empty())));
        }
        return out;
    }
    // Normalized weights are partitions padded to length n with a zero last
    // entry; canonical class representatives are the self-keyed ones.
    fn rec(n: usize, i: usize, max: i64, left: i64, prefix: &mut Vec<i64>, out: &mut Vec<(Weight, TannakaGroup)>) {
        if i == n - 1 {
            prefix.push(0);
            let w = Weight::new(prefix.clone()).unwrap();
            if class_key(&w) == w {
                out.push((w.clone(), classify(&w)));
            }
            prefix.pop();
            return;
        }
        for v in (0..=max.min(left)).rev() {
            prefix.push(v);
            rec(n, i + 1, v, left - v, prefix, out);
            prefix.pop();
        }
    }
    rec(n, 0, degree_bound.max(0), degree_bound.max(0), &mut Vec::new(), &mut out);
    out.sort_by_key(|(w, _)| (w.degree(), w.clone()));
    out
}

/// The derivative annotated with superdimensions; the signed dimensions add
/// up to the superdimension of the input.
pub fn branching(w: &Weight) -> Result<Vec<(DerivativeSummand, SignedDimension)>, DsError> {
    Ok(ds(w)?
        .into_iter()
        .map(|s| {
            let dim = sdim(&s.weight);
            (s, dim)
        })
        .collect())
}
