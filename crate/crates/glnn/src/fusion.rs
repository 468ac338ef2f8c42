//! Classical fusion for the simple groups of type A, B, C, D: exact Weyl
//! dimensions, Freudenthal weight systems, and the signed-reflection tensor
//! product algorithm; plus the superized decomposition of a tensor product
//! of equivalent irreducibles through the standard representation of their
//! group.
//!
//! All weights live in the ε-coordinate basis (length rank+1 for type A,
//! rank otherwise). Internally every computation runs on doubled
//! coordinates so the half-integral ρ of type B stays integral.

use crate::diagrams::are_equivalent;
use crate::ds::{ell, sdim};
use crate::tannaka::{classify, GroupFamily, TannakaGroup};
use crate::weights::Weight;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::path::PathBuf;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FusionError {
    #[error("rank {rank} is not valid for type {ty:?}")]
    BadRank { ty: RootType, rank: usize },
    #[error("weight {0:?} has wrong length for the root system")]
    BadLength(Vec<i64>),
    #[error("weight {0:?} is not dominant for the root system")]
    NotDominant(Vec<i64>),
    #[error("super tensor factors must have equal rank, got {0} and {1}")]
    RankMismatch(usize, usize),
    #[error("value exceeds the supported 128-bit range")]
    Overflow,
    #[error("superdimension {0} is too large for an explicit fusion decomposition")]
    TooLarge(u128),
}

/// Largest standard-representation dimension for which the explicit
/// classical decomposition is attempted.
pub const MAX_FUSION_DIM: u128 = 4096;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum RootType {
    A,
    B,
    C,
    D,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct RootSystem {
    pub ty: RootType,
    pub rank: usize,
}

impl fmt::Display for RootSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.ty, self.rank)
    }
}

/// Integer vector in the ε-basis, weakly decreasing; type D allows a
/// negative last coordinate.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ClassicalWeight(pub Vec<i64>);

impl fmt::Display for ClassicalWeight {
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

impl RootSystem {
    pub fn new(ty: RootType, rank: usize) -> Result<Self, FusionError> {
        let ok = match ty {
            RootType::A | RootType::B | RootType::C => rank >= 1,
            RootType::D => rank >= 2,
        };
        if ok {
            Ok(RootSystem { ty, rank })
        } else {
            Err(FusionError::BadRank { ty, rank })
        }
    }

    /// Length of ε-coordinate vectors for this system.
    pub fn coords(&self) -> usize {
        match self.ty {
            RootType::A => self.rank + 1,
            _ => self.rank,
        }
    }

    fn rho2(&self) -> Vec<i64> {
        let m = self.coords() as i64;
        match self.ty {
            RootType::A => (0..m).map(|i| 2 * (m - 1 - i)).collect(),
            RootType::B => (0..m).map(|i| 2 * (m - 1 - i) + 1).collect(),
            RootType::C => (0..m).map(|i| 2 * (m - i)).collect(),
            RootType::D => (0..m).map(|i| 2 * (m - 1 - i)).collect(),
        }
    }

    fn positive_roots2(&self) -> Vec<Vec<i64>> {
        let m = self.coords();
        let mut roots = Vec::new();
        let mut root = |entries: &[(usize, i64)]| {
            let mut v = vec![0i64; m];
            for &(i, c) in entries {
                v[i] = 2 * c;
            }
            roots.push(v);
        };
        for i in 0..m {
            for j in i + 1..m {
                root(&[(i, 1), (j, -1)]);
                if matches!(self.ty, RootType::B | RootType::C | RootType::D) {
                    root(&[(i, 1), (j, 1)]);
                }
            }
            match self.ty {
                RootType::B => root(&[(i, 1)]),
                RootType::C => root(&[(i, 2)]),
                _ => {}
            }
        }
        roots
    }

    fn simple_roots2(&self) -> Vec<Vec<i64>> {
        let m = self.coords();
        let mut roots = Vec::new();
        let mut root = |entries: &[(usize, i64)]| {
            let mut v = vec![0i64; m];
            for &(i, c) in entries {
                v[i] = 2 * c;
            }
            roots.push(v);
        };
        for i in 0..m - 1 {
            root(&[(i, 1), (i + 1, -1)]);
        }
        match self.ty {
            RootType::A => {}
            RootType::B => root(&[(m - 1, 1)]),
            RootType::C => root(&[(m - 1, 2)]),
            RootType::D => root(&[(m - 2, 1), (m - 1, 1)]),
        }
        roots
    }

    pub fn is_dominant(&self, w: &[i64]) -> bool {
        if w.len() != self.coords() {
            return false;
        }
        let dec = w.windows(2).all(|p| p[0] >= p[1]);
        match self.ty {
            RootType::A => dec,
            RootType::B | RootType::C => dec && *w.last().unwrap() >= 0,
            RootType::D => {
                let m = w.len();
                w[..m - 1].windows(2).all(|p| p[0] >= p[1]) && (m < 2 || w[m - 2] >= w[m - 1].abs())
            }
        }
    }

    fn check_dominant(&self, w: &ClassicalWeight) -> Result<(), FusionError> {
        if w.0.len() != self.coords() {
            return Err(FusionError::BadLength(w.0.clone()));
        }
        if !self.is_dominant(&w.0) {
            return Err(FusionError::NotDominant(w.0.clone()));
        }
        Ok(())
    }

    /// The dominant representative of the Weyl orbit of `v`.
    fn dominate(&self, v: &[i64]) -> Vec<i64> {
        let mut out: Vec<i64> = match self.ty {
            RootType::A => v.to_vec(),
            RootType::B | RootType::C => v.iter().map(|x| x.abs()).collect(),
            RootType::D => {
                let neg = v.iter().filter(|&&x| x < 0).count();
                let mut a: Vec<i64> = v.iter().map(|x| x.abs()).collect();
                a.sort_unstable_by(|x, y| y.cmp(x));
                if neg % 2 == 1 {
                    let last = a.len() - 1;
                    a[last] = -a[last];
                }
                return a;
            }
        };
        out.sort_unstable_by(|x, y| y.cmp(x));
        out
    }

    /// Move `v` to the interior of the dominant chamber if possible,
    /// returning the chamber representative and the determinant of the Weyl
    /// element used; `None` when `v` lies on a wall.
    fn reflect(&self, v: &[i64]) -> Option<(Vec<i64>, i32)> {
        let keys: Vec<i64> = match self.ty {
            RootType::A => v.to_vec(),
            _ => v.iter().map(|x| x.abs()).collect(),
        };
        // Walls: equal keys for the sorting order; for B and C also a zero
        // coordinate (the short/long root through it).
        let mut sorted_keys = keys.clone();
        sorted_keys.sort_unstable();
        if sorted_keys.windows(2).any(|p| p[0] == p[1]) {
            return None;
        }
        if matches!(self.ty, RootType::B | RootType::C) && keys.contains(&0) {
            return None;
        }
        let mut inversions = 0u32;
        for i in 0..keys.len() {
            for j in i + 1..keys.len() {
                if keys[i] < keys[j] {
                    inversions += 1;
                }
            }
        }
        let perm_sign = if inversions.is_multiple_of(2) { 1 } else { -1 };
        match self.ty {
            RootType::A => {
                let mut out = v.to_vec();
                out.sort_unstable_by(|x, y| y.cmp(x));
                Some((out, perm_sign))
            }
            RootType::B | RootType::C => {
                let neg = v.iter().filter(|&&x| x < 0).count();
                let flip_sign = if neg % 2 == 0 { 1 } else { -1 };
                let mut out: Vec<i64> = v.iter().map(|x| x.abs()).collect();
                out.sort_unstable_by(|x, y| y.cmp(x));
                Some((out, perm_sign * flip_sign))
            }
            RootType::D => {
                // Only evenly many sign changes are available, so the
                // chamber representative may keep a negative last entry;
                // the determinant is the permutation sign alone.
                let neg = v.iter().filter(|&&x| x < 0).count();
                let mut out: Vec<i64> = v.iter().map(|x| x.abs()).collect();
                out.sort_unstable_by(|x, y| y.cmp(x));
                if neg % 2 == 1 {
                    let last = out.len() - 1;
                    out[last] = -out[last];
                }
                Some((out, perm_sign))
            }
        }
    }
}

fn ip(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn double(w: &[i64]) -> Vec<i64> {
    w.iter().map(|&x| 2 * x).collect()
}

/// Exact dimension by the product-over-positive-roots formula.
pub fn weyl_dimension(g: RootSystem, w: &ClassicalWeight) -> Result<u128, FusionError> {
    g.check_dominant(w)?;
    let rho2 = g.rho2();
    let top: Vec<i64> = double(&w.0).iter().zip(&rho2).map(|(a, b)| a + b).collect();
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for alpha in g.positive_roots2() {
        num *= BigInt::from(ip(&top, &alpha));
        den *= BigInt::from(ip(&rho2, &alpha));
    }
    debug_assert!(!den.is_zero());
    let (q, r) = (num.clone() / &den, num % &den);
    assert!(r.is_zero(), "dimension formula must divide exactly");
    assert!(q.is_positive());
    q.to_u128().ok_or(FusionError::Overflow)
}

/// Weight multiplicities of the irreducible with highest weight `w`.
pub type WeightSystem = BTreeMap<Vec<i64>, u64>;

/// Full weight system via the dominant-weight recursion, then orbit
/// expansion. Multiplicities sum to the Weyl dimension.
pub fn weight_system(g: RootSystem, w: &ClassicalWeight) -> Result<WeightSystem, FusionError> {
    g.check_dominant(w)?;
    let lambda2 = double(&w.0);
    let rho2 = g.rho2();
    let simples = g.simple_roots2();
    let positives = g.positive_roots2();
    let norm_l = ip(&lambda2, &lambda2);

    // Dominant weights below λ, graded by the number of simple-root steps.
    let mut level: HashMap<Vec<i64>, u32> = HashMap::new();
    level.insert(lambda2.clone(), 0);
    let mut queue: VecDeque<Vec<i64>> = VecDeque::from([lambda2.clone()]);
    while let Some(v) = queue.pop_front() {
        let l = level[&v];
        for s in &simples {
            let next: Vec<i64> = v.iter().zip(s).map(|(a, b)| a - b).collect();
            if ip(&next, &next) <= norm_l && !level.contains_key(&next) {
                level.insert(next.clone(), l + 1);
                queue.push_back(next);
            }
        }
    }
    let mut dominants: Vec<(Vec<i64>, u32)> = level
        .into_iter()
        .filter(|(v, _)| g.is_dominant(&halve(v)))
        .collect();
    dominants.sort_by_key(|(_, l)| *l);

    let lp2: Vec<i64> = lambda2.iter().zip(&rho2).map(|(a, b)| a + b).collect();
    let norm_lp = ip(&lp2, &lp2);
    let mut mult: HashMap<Vec<i64>, u64> = HashMap::new();
    for (mu2, _) in &dominants {
        if *mu2 == lambda2 {
            mult.insert(mu2.clone(), 1);
            continue;
        }
        let mp2: Vec<i64> = mu2.iter().zip(&rho2).map(|(a, b)| a + b).collect();
        let den = norm_lp - ip(&mp2, &mp2);
        debug_assert!(den > 0);
        let mut num: i128 = 0;
        for alpha in &positives {
            let mut k = 1i64;
            loop {
                let shifted: Vec<i64> = mu2.iter().zip(alpha).map(|(a, b)| a + k * b).collect();
                let m = mult.get(&g.dominate2(&shifted)).copied().unwrap_or(0);
                if m == 0 {
                    break;
                }
                num += 2 * (m as i128) * (ip(&shifted, alpha) as i128);
                k += 1;
            }
        }
        assert!(num % den as i128 == 0, "multiplicity recursion must divide exactly");
        let m = (num / den as i128) as u64;
        if m > 0 {
            mult.insert(mu2.clone(), m);
        }
    }

    let mut out: WeightSystem = BTreeMap::new();
    for (mu2, m) in &mult {
        for v in g.orbit(&halve(mu2)) {
            out.insert(v, *m);
        }
    }
    debug_assert_eq!(
        out.values().map(|&m| m as u128).sum::<u128>(),
        weyl_dimension(g, w)?,
        "weight multiplicities must sum to the dimension"
    );
    Ok(out)
}

fn halve(v: &[i64]) -> Vec<i64> {
    debug_assert!(v.iter().all(|x| x % 2 == 0));
    v.iter().map(|x| x / 2).collect()
}

impl RootSystem {
    fn dominate2(&self, v2: &[i64]) -> Vec<i64> {
        self.dominate(v2)
    }

    /// Weyl orbit of a dominant weight in plain coordinates.
    fn orbit(&self, dom: &[i64]) -> Vec<Vec<i64>> {
        let mut perms: Vec<Vec<i64>> = Vec::new();
        let mut sorted = dom.to_vec();
        sorted.sort_unstable();
        distinct_permutations(&mut sorted, &mut perms);
        match self.ty {
            RootType::A => perms,
            RootType::B | RootType::C | RootType::D => {
                let m = dom.len();
                let mut out: BTreeSet<Vec<i64>> = BTreeSet::new();
                for p in &perms {
                    for mask in 0u32..(1 << m) {
                        if self.ty == RootType::D && mask.count_ones() % 2 == 1 {
                            continue;
                        }
                        let mut v = p.clone();
                        for (i, x) in v.iter_mut().enumerate() {
                            if mask & (1 << i) != 0 {
                                *x = -*x;
                            }
                        }
                        out.insert(v);
                    }
                }
                out.into_iter().collect()
            }
        }
    }
}

fn distinct_permutations(sorted: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
    // Heap-free multiset permutation generation.
    fn rec(remaining: &mut Vec<i64>, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if remaining.is_empty() {
            out.push(prefix.clone());
            return;
        }
        let mut last: Option<i64> = None;
        for i in 0..remaining.len() {
            let v = remaining[i];
            if last == Some(v) {
                continue;
            }
            last = Some(v);
            remaining.remove(i);
            prefix.push(v);
            rec(remaining, prefix, out);
            prefix.pop();
            remaining.insert(i, v);
        }
    }
    rec(sorted, &mut Vec::new(), out);
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct TensorTerm {
    pub weight: ClassicalWeight,
    pub multiplicity: u64,
    pub dimension: u128,
}

/// Decomposition of a classical tensor product; multiplicities times
/// dimensions add up to the product of the factor dimensions.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct TensorDecomposition {
    pub terms: Vec<TensorTerm>,
}

impl TensorDecomposition {
    pub fn total(&self) -> u128 {
        self.terms.iter().map(|t| t.multiplicity as u128 * t.dimension).sum()
    }
}

/// Signed-reflection tensor decomposition: reflect `a + β + ρ` into the
/// chamber for every weight β of the second factor, accumulating signs.
pub fn klimyk_tensor(
    g: RootSystem,
    a: &ClassicalWeight,
    b: &ClassicalWeight,
) -> Result<TensorDecomposition, FusionError> {
    let mut cache = FusionCache::in_memory();
    klimyk_tensor_cached(g, a, b, &mut cache)
}

pub fn klimyk_tensor_cached(
    g: RootSystem,
    a: &ClassicalWeight,
    b: &ClassicalWeight,
    cache: &mut FusionCache,
) -> Result<TensorDecomposition, FusionError> {
    g.check_dominant(a)?;
    g.check_dominant(b)?;
    let ws = cache.weight_system(g, b)?;
    let rho2 = g.rho2();
    let a2 = double(&a.0);
    let mut acc: BTreeMap<Vec<i64>, i64> = BTreeMap::new();
    for (beta, m) in ws.iter() {
        let v2: Vec<i64> = a2
            .iter()
            .zip(double(beta).iter())
            .zip(&rho2)
            .map(|((x, y), z)| x + y + z)
            .collect();
        if let Some((dom2, sign)) = g.reflect(&v2) {
            let mu2: Vec<i64> = dom2.iter().zip(&rho2).map(|(x, y)| x - y).collect();
            *acc.entry(halve(&mu2)).or_insert(0) += sign as i64 * *m as i64;
        }
    }
    let mut terms = Vec::new();
    for (mu, c) in acc {
        assert!(c >= 0, "net multiplicities are nonnegative");
        if c > 0 {
            let cw = ClassicalWeight(mu);
            let dimension = weyl_dimension(g, &cw)?;
            terms.push(TensorTerm { weight: cw, multiplicity: c as u64, dimension });
        }
    }
    terms.sort_by(|s, t| t.dimension.cmp(&s.dimension).then(t.weight.cmp(&s.weight)));
    let dec = TensorDecomposition { terms };
    let expect = weyl_dimension(g, a)?
        .checked_mul(weyl_dimension(g, b)?)
        .ok_or(FusionError::Overflow)?;
    assert_eq!(dec.total(), expect, "dimension conservation");
    Ok(dec)
}

/// Memoizing wrapper around [`weight_system`] with an optional on-disk
/// store. The disk records are advisory: any record that fails validation
/// is recomputed and rewritten.
pub struct FusionCache {
    mem: HashMap<(RootSystem, Vec<i64>), Arc<WeightSystem>>,
    dir: Option<PathBuf>,
}

#[derive(Serialize, Deserialize)]
struct CacheRecord {
    version: u32,
    ty: RootType,
    rank: usize,
    weight: Vec<i64>,
    mults: Vec<(Vec<i64>, u64)>,
}

const CACHE_VERSION: u32 = 1;

impl FusionCache {
    pub fn in_memory() -> Self {
        FusionCache { mem: HashMap::new(), dir: None }
    }

    pub fn with_dir(dir: PathBuf) -> Self {
        FusionCache { mem: HashMap::new(), dir: Some(dir) }
    }

    /// Reads `GLNN_CACHE_DIR`; unset means no on-disk store.
    pub fn from_env() -> Self {
        match std::env::var_os("GLNN_CACHE_DIR") {
            Some(d) if !d.is_empty() => FusionCache::with_dir(PathBuf::from(d)),
            _ => FusionCache::in_memory(),
        }
    }

    pub fn weight_system(&mut self, g: RootSystem, w: &ClassicalWeight) -> Result<Arc<WeightSystem>, FusionError> {
        let key = (g, w.0.clone());
        if let Some(ws) = self.mem.get(&key) {
            return Ok(ws.clone());
        }
        if let Some(ws) = self.read_disk(g, w) {
            let ws = Arc::new(ws);
            self.mem.insert(key, ws.clone());
            return Ok(ws);
        }
        let ws = Arc::new(weight_system(g, w)?);
        self.write_disk(g, w, &ws);
        self.mem.insert(key, ws.clone());
        Ok(ws)
    }

    fn path(&self, g: RootSystem, w: &ClassicalWeight) -> Option<PathBuf> {
        let dir = self.dir.as_ref()?;
        let coords: String = w
            .0
            .iter()
            .map(|c| if *c < 0 { format!("m{}", -c) } else { c.to_string() })
            .collect::<Vec<_>>()
            .join("_");
        Some(dir.join(format!("ws-{:?}{}-{}.json", g.ty, g.rank, coords)))
    }

    fn read_disk(&self, g: RootSystem, w: &ClassicalWeight) -> Option<WeightSystem> {
        let path = self.path(g, w)?;
        let data = std::fs::read(path).ok()?;
        let rec: CacheRecord = serde_json::from_slice(&data).ok()?;
        if rec.version != CACHE_VERSION || rec.ty != g.ty || rec.rank != g.rank || rec.weight != w.0 {
            return None;
        }
        let ws: WeightSystem = rec.mults.into_iter().collect();
        // Never trust a stored record: the multiplicity total must match.
        let total: u128 = ws.values().map(|&m| m as u128).sum();
        if weyl_dimension(g, w).ok()? != total {
            return None;
        }
        Some(ws)
    }

    fn write_disk(&self, g: RootSystem, w: &ClassicalWeight, ws: &WeightSystem) {
        let Some(path) = self.path(g, w) else { return };
        let rec = CacheRecord {
            version: CACHE_VERSION,
            ty: g.ty,
            rank: g.rank,
            weight: w.0.clone(),
            mults: ws.iter().map(|(k, v)| (k.clone(), *v)).collect(),
        };
        if let Some(parent) = path.parent() {
            let _ = std::fs::create_dir_all(parent);
        }
        if let Ok(data) = serde_json::to_vec(&rec) {
            let _ = std::fs::write(path, data);
        }
    }
}

/// One summand of a super tensor product modulo negligibles.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct SuperTerm {
    /// Highest weight for the derived group; `None` for the single term of
    /// an inequivalent pair (an external product over distinct factors).
    pub weight: Option<ClassicalWeight>,
    pub multiplicity: u64,
    pub superdim: u128,
    /// Bookkeeping share of the total determinant twist `ℓ(w1) + ℓ(w2)`.
    pub berezin_offset: i128,
}

/// Tensor product of two maximal atypical irreducibles modulo negligible
/// summands.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct SuperTensor {
    pub equivalent: bool,
    /// Group of the first factor when the factors are equivalent.
    pub group: Option<TannakaGroup>,
    pub system: Option<RootSystem>,
    pub terms: Vec<SuperTerm>,
}

impl SuperTensor {
    pub fn superdim_total(&self) -> u128 {
        self.terms.iter().map(|t| t.multiplicity as u128 * t.superdim).sum()
    }
}

fn derived_system(g: &TannakaGroup) -> Result<Option<RootSystem>, FusionError> {
    if g.dim > MAX_FUSION_DIM {
        return Err(FusionError::TooLarge(g.dim));
    }
    let d = usize::try_from(g.dim).map_err(|_| FusionError::Overflow)?;
    let sys = match g.family.derived() {
        GroupFamily::Torus => None,
        GroupFamily::Sl => Some(RootSystem::new(RootType::A, d - 1)?),
        GroupFamily::Sp => Some(RootSystem::new(RootType::C, d / 2)?),
        GroupFamily::So => Some(if d % 2 == 0 {
            RootSystem::new(RootType::D, d / 2)?
        } else {
            RootSystem::new(RootType::B, (d - 1) / 2)?
        }),
        _ => unreachable!("derived families only"),
    };
    Ok(sys)
}

fn standard_weight(g: RootSystem) -> ClassicalWeight {
    let mut v = vec![0i64; g.coords()];
    v[0] = 1;
    ClassicalWeight(v)
}

/// Decompose `X(w1) ⊗ X(w2)` modulo negligible summands.
///
/// Inequivalent factors produce a single indecomposable of superdimension
/// `|sdim(w1)| · |sdim(w2)|`. Equivalent factors both map to the standard
/// representation of the group of `w1` (Berezin twists only move
/// determinant characters), so the decomposition is the classical one for
/// `st ⊗ st` with superdimensions equal to classical dimensions. The total
/// determinant twist `ℓ(w1) + ℓ(w2)` is spread over the terms.
pub fn tensor_mod_negligible(
    w1: &Weight,
    w2: &Weight,
    cache: &mut FusionCache,
) -> Result<SuperTensor, FusionError> {
    if w1.rank() != w2.rank() {
        return Err(FusionError::RankMismatch(w1.rank(), w2.rank()));
    }
    let d1 = sdim(w1).dim();
    let d2 = sdim(w2).dim();
    if !are_equivalent(w1, w2) {
        let superdim = d1.checked_mul(d2).ok_or(FusionError::Overflow)?;
        return Ok(SuperTensor {
            equivalent: false,
            group: None,
            system: None,
            terms: vec![SuperTerm { weight: None, multiplicity: 1, superdim, berezin_offset: ell(w1) + ell(w2) }],
        });
    }
    let group = classify(w1);
    let ber_total = ell(w1) + ell(w2);
    let system = derived_system(&group)?;
    let mut terms = Vec::new();
    match system {
        None => {
            terms.push(SuperTerm { weight: None, multiplicity: 1, superdim: 1, berezin_offset: ber_total });
        }
        Some(sys) => {
            let st = standard_weight(sys);
            let dec = klimyk_tensor_cached(sys, &st, &st, cache)?;
            let k = dec.terms.len() as i128;
            let base = ber_total.div_euclid(k);
            let rem = ber_total.rem_euclid(k);
            for (i, t) in dec.terms.into_iter().enumerate() {
                let offset = base + if (i as i128) < rem { 1 } else { 0 };
                terms.push(SuperTerm {
                    weight: Some(t.weight),
                    multiplicity: t.multiplicity,
                    superdim: t.dimension,
                    berezin_offset: offset,
                });
            }
        }
    }
    let out = SuperTensor { equivalent: true, group: Some(group), system, terms };
    debug_assert_eq!(out.superdim_total(), d1 * d2);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cw(v: &[i64]) -> ClassicalWeight {
        ClassicalWeight(v.to_vec())
    }

    fn sys(ty: RootType, rank: usize) -> RootSystem {
        RootSystem::new(ty, rank).unwrap()
    }

    #[test]
    fn weyl_dimension_examples() {
        assert_eq!(weyl_dimension(sys(RootType::C, 3), &cw(&[1, 1, 0])).unwrap(), 14);
        assert_eq!(weyl_dimension(sys(RootType::C, 3), &cw(&[0, 0, 0])).unwrap(), 1);
        assert_eq!(weyl_dimension(sys(RootType::A, 3), &cw(&[1, 0, 0, 0])).unwrap(), 4);
        assert_eq!(weyl_dimension(sys(RootType::C, 3), &cw(&[2, 0, 0])).unwrap(), 21);
        assert_eq!(weyl_dimension(sys(RootType::B, 2), &cw(&[1, 0])).unwrap(), 5);
        assert_eq!(weyl_dimension(sys(RootType::D, 3), &cw(&[1, 0, 0])).unwrap(), 6);
        assert_eq!(weyl_dimension(sys(RootType::D, 12), &cw(&[1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0])).unwrap(), 276);
    }

    #[test]
    fn weyl_dimension_rejects_bad_input() {
        assert!(weyl_dimension(sys(RootType::C, 3), &cw(&[0, 1, 0])).is_err());
        assert!(weyl_dimension(sys(RootType::C, 3), &cw(&[1, 0])).is_err());
        assert!(RootSystem::new(RootType::D, 1).is_err());
    }

    #[test]
    fn weight_system_rank_one() {
        // Spin-1 of A1 in gl-style coordinates: (2,0), (1,1), (0,2).
        let ws = weight_system(sys(RootType::A, 1), &cw(&[2, 0])).unwrap();
        let expected: WeightSystem =
            [(vec![2, 0], 1), (vec![1, 1], 1), (vec![0, 2], 1)].into_iter().collect();
        assert_eq!(ws, expected);
    }

    #[test]
    fn weight_system_standard_rep() {
        let ws = weight_system(sys(RootType::C, 3), &cw(&[1, 0, 0])).unwrap();
        assert_eq!(ws.len(), 6);
        assert!(ws.values().all(|&m| m == 1));
        assert!(ws.contains_key(&vec![0, -1, 0]));
    }

    #[test]
    fn weight_system_trivial_and_adjointish() {
        let ws = weight_system(sys(RootType::B, 2), &cw(&[0, 0])).unwrap();
        assert_eq!(ws, [(vec![0, 0], 1)].into_iter().collect());
        // Sp(6): the 21-dimensional with zero-weight multiplicity 3.
        let ws = weight_system(sys(RootType::C, 3), &cw(&[2, 0, 0])).unwrap();
        assert_eq!(ws[&vec![0, 0, 0]], 3);
        assert_eq!(ws.values().map(|&m| m as u128).sum::<u128>(), 21);
    }

    #[test]
    fn adjoint_zero_weight_multiplicity_is_rank() {
        // gl-style coordinates for the A2 adjoint.
        let ws = weight_system(sys(RootType::A, 2), &cw(&[1, 0, -1])).unwrap();
        assert_eq!(ws.values().map(|&m| m as u128).sum::<u128>(), 8);
        assert_eq!(ws[&vec![0, 0, 0]], 2);
        let ws = weight_system(sys(RootType::B, 2), &cw(&[1, 1])).unwrap();
        assert_eq!(ws.values().map(|&m| m as u128).sum::<u128>(), 10);
        assert_eq!(ws[&vec![0, 0]], 2);
        let ws = weight_system(sys(RootType::C, 3), &cw(&[2, 0, 0])).unwrap();
        assert_eq!(ws[&vec![0, 0, 0]], 3);
        let ws = weight_system(sys(RootType::D, 4), &cw(&[1, 1, 0, 0])).unwrap();
        assert_eq!(ws.values().map(|&m| m as u128).sum::<u128>(), 28);
        assert_eq!(ws[&vec![0, 0, 0, 0]], 4);
    }

    #[test]
    fn klimyk_sl2() {
        let g = sys(RootType::A, 1);
        let dec = klimyk_tensor(g, &cw(&[1, 0]), &cw(&[1, 0])).unwrap();
        assert_eq!(dec.terms.len(), 2);
        assert_eq!(dec.terms[0].weight, cw(&[2, 0]));
        assert_eq!(dec.terms[0].dimension, 3);
        assert_eq!(dec.terms[1].weight, cw(&[1, 1]));
        assert_eq!(dec.terms[1].dimension, 1);
    }

    #[test]
    fn klimyk_tensor_with_trivial() {
        let g = sys(RootType::C, 3);
        let dec = klimyk_tensor(g, &cw(&[2, 1, 0]), &cw(&[0, 0, 0])).unwrap();
        assert_eq!(dec.terms.len(), 1);
        assert_eq!(dec.terms[0].weight, cw(&[2, 1, 0]));
        assert_eq!(dec.terms[0].multiplicity, 1);
    }

    #[test]
    fn klimyk_sp6_squares() {
        let g = sys(RootType::C, 3);
        let dec = klimyk_tensor(g, &cw(&[1, 0, 0]), &cw(&[1, 0, 0])).unwrap();
        let got: Vec<(Vec<i64>, u64, u128)> =
            dec.terms.iter().map(|t| (t.weight.0.clone(), t.multiplicity, t.dimension)).collect();
        assert_eq!(
            got,
            vec![(vec![2, 0, 0], 1, 21), (vec![1, 1, 0], 1, 14), (vec![0, 0, 0], 1, 1)]
        );

        let dec = klimyk_tensor(g, &cw(&[2, 0, 0]), &cw(&[2, 0, 0])).unwrap();
        let got: BTreeMap<Vec<i64>, (u64, u128)> =
            dec.terms.iter().map(|t| (t.weight.0.clone(), (t.multiplicity, t.dimension))).collect();
        let expected: BTreeMap<Vec<i64>, (u64, u128)> = [
            (vec![4, 0, 0], (1, 126)),
            (vec![3, 1, 0], (1, 189)),
            (vec![2, 2, 0], (1, 90)),
            (vec![2, 0, 0], (1, 21)),
            (vec![1, 1, 0], (1, 14)),
            (vec![0, 0, 0], (1, 1)),
        ]
        .into_iter()
        .collect();
        assert_eq!(got, expected);
        assert_eq!(dec.total(), 441);
    }

    #[test]
    fn klimyk_commutes() {
        let g = sys(RootType::B, 2);
        let a = cw(&[2, 1]);
        let b = cw(&[1, 1]);
        assert_eq!(klimyk_tensor(g, &a, &b).unwrap(), klimyk_tensor(g, &b, &a).unwrap());
        let g = sys(RootType::D, 3);
        let a = cw(&[2, 1, -1]);
        let b = cw(&[1, 1, 1]);
        assert_eq!(klimyk_tensor(g, &a, &b).unwrap(), klimyk_tensor(g, &b, &a).unwrap());
    }

    #[test]
    fn selfdual_types_closed_under_duality() {
        // For type D the dual of L(µ) flips the sign of the last coordinate;
        // selfdual factors must give a dual-closed term multiset.
        let g = sys(RootType::D, 3);
        let dec = klimyk_tensor(g, &cw(&[2, 0, 0]), &cw(&[1, 1, 0])).unwrap();
        for t in &dec.terms {
            let mut dualw = t.weight.0.clone();
            let m = dualw.len();
            dualw[m - 1] = -dualw[m - 1];
            let found = dec.terms.iter().find(|s| s.weight.0 == dualw).map(|s| s.multiplicity);
            assert_eq!(found, Some(t.multiplicity));
        }
    }

    #[test]
    fn super_tensor_inequivalent() {
        let w1 = Weight::parse("[4,0]").unwrap();
        let w2 = Weight::parse("[2,0]").unwrap();
        let mut cache = FusionCache::in_memory();
        let st = tensor_mod_negligible(&w1, &w2, &mut cache).unwrap();
        assert!(!st.equivalent);
        assert_eq!(st.terms.len(), 1);
        assert_eq!(st.terms[0].superdim, 4);
    }

    #[test]
    fn super_tensor_gl2() {
        let w1 = Weight::parse("[3,0]").unwrap();
        let mut cache = FusionCache::in_memory();
        let st = tensor_mod_negligible(&w1, &w1, &mut cache).unwrap();
        assert!(st.equivalent);
        let dims: Vec<u128> = st.terms.iter().map(|t| t.superdim).collect();
        assert_eq!(dims, vec![3, 1]);
        // Both terms carry the determinant exponent of one factor; the
        // superdimension-1 term is exactly that Berezin power.
        assert_eq!(st.terms[0].berezin_offset, 2);
        assert_eq!(st.terms[1].berezin_offset, 2);
    }

    #[test]
    fn super_tensor_sp6() {
        let w1 = Weight::parse("[2,1,0]").unwrap();
        let mut cache = FusionCache::in_memory();
        let st = tensor_mod_negligible(&w1, &w1, &mut cache).unwrap();
        assert!(st.equivalent);
        assert_eq!(st.group.unwrap().family, GroupFamily::Sp);
        let got: Vec<(Option<Vec<i64>>, u128)> =
            st.terms.iter().map(|t| (t.weight.clone().map(|w| w.0), t.superdim)).collect();
        assert_eq!(
            got,
            vec![
                (Some(vec![2, 0, 0]), 21),
                (Some(vec![1, 1, 0]), 14),
                (Some(vec![0, 0, 0]), 1),
            ]
        );
        assert_eq!(st.superdim_total(), 36);
        assert_eq!(st.terms.iter().map(|t| t.berezin_offset).sum::<i128>(), 0);
    }

    #[test]
    fn super_tensor_berezin_classes() {
        let a = Weight::parse("[2,2,2]").unwrap();
        let b = Weight::parse("[1,1,1]").unwrap();
        let mut cache = FusionCache::in_memory();
        let st = tensor_mod_negligible(&a, &b, &mut cache).unwrap();
        assert!(st.equivalent);
        assert_eq!(st.terms.len(), 1);
        assert_eq!(st.terms[0].superdim, 1);
        assert_eq!(st.terms[0].berezin_offset, 3);
    }

    proptest::proptest! {
        #[test]
        fn klimyk_commutes_and_conserves(
            ty in proptest::sample::select(vec![RootType::A, RootType::B, RootType::C, RootType::D]),
            raw_a in proptest::collection::vec(0i64..=2, 2),
            raw_b in proptest::collection::vec(0i64..=2, 2),
        ) {
            let g = RootSystem::new(ty, 2).unwrap();
            let mk = |mut v: Vec<i64>| {
                v.resize(g.coords(), 0);
                v.sort_unstable_by(|a, b| b.cmp(a));
                ClassicalWeight(v)
            };
            let a = mk(raw_a);
            let b = mk(raw_b);
            // klimyk_tensor asserts dimension conservation internally.
            let ab = klimyk_tensor(g, &a, &b).unwrap();
            let ba = klimyk_tensor(g, &b, &a).unwrap();
            proptest::prop_assert_eq!(ab, ba);
        }
    }

    #[test]
    fn cache_roundtrip_matches_uncached() {
        let dir = std::env::temp_dir().join(format!("glnn-cache-test-{}", std::process::id()));
        let _ = std::fs::remove_dir_all(&dir);
        let g = sys(RootType::C, 2);
        let w = cw(&[2, 1]);
        let plain = weight_system(g, &w).unwrap();
        {
            let mut cache = FusionCache::with_dir(dir.clone());
            assert_eq!(*cache.weight_system(g, &w).unwrap(), plain);
        }
        {
            // Fresh cache object reads the stored record.
            let mut cache = FusionCache::with_dir(dir.clone());
            assert_eq!(*cache.weight_system(g, &w).unwrap(), plain);
        }
        {
            // A corrupted record is discarded and recomputed.
            let mut cache = FusionCache::with_dir(dir.clone());
            let path = cache.path(g, &w).unwrap();
            std::fs::write(&path, b"{not json").unwrap();
            assert_eq!(*cache.weight_system(g, &w).unwrap(), plain);
        }
        let _ = std::fs::remove_dir_all(&dir);
    }
}
