//! Cup diagrams and their invariants: sectors, gaps, basic weights,
//! transposition, duality classes, the complement maps, depth, and the
//! projective-exclusion bound.
//!
//! Every ∨ of the weight diagram opens a cup that closes at the nearest free
//! non-∨ vertex to its right (balanced-parenthesis matching). The outermost
//! cups cut the diagram into sectors; the sector ranks, the gaps between
//! sectors, and the overall shift are a complete invariant of the weight.

use crate::weights::{Support, Weight};
use serde::Serialize;
use std::collections::BTreeSet;
use std::fmt;

/// Non-crossing matching of the support; one cup `(a,b)` per ∨, `a < b`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CupDiagram {
    /// Sorted by left endpoint.
    pub cups: Vec<(i64, i64)>,
}

/// An outer cup together with its interval and the ∨-positions inside.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Sector {
    pub start: i64,
    pub end: i64,
    /// ∨-positions in `[start, end]`, increasing; the first one is `start`.
    pub support: Vec<i64>,
}

impl Sector {
    pub fn rank(&self) -> usize {
        self.support.len()
    }

    /// The unique basic weight obtained by translating the sector so its
    /// leftmost ∨ sits at `1 − rank`.
    pub fn basic(&self) -> BasicWeight {
        let r = self.rank() as i64;
        let shift = (1 - r) - self.start;
        let pts: Vec<i64> = self.support.iter().map(|&x| x + shift).collect();
        BasicWeight::new(Weight::from_support(&pts)).expect("sector translates to a basic weight")
    }
}

/// The numeric invariants of the sector decomposition.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct SectorProfile {
    pub ranks: Vec<usize>,
    /// Distances between consecutive sectors, `d1..d(k-1)`, all ≥ 0.
    pub gaps: Vec<i64>,
    /// `d0 = λn`, the term entering the left-move count D.
    pub d0_shift: i64,
    /// `d0 = λn + n − 1`, the total shift factor of the diagram.
    pub d0_invariant: i64,
}

/// Balanced matching: scan left to right, open at each ∨, close at the next
/// free non-∨ vertex. Free stretches between ∨s are consumed in one batch,
/// so the cost is O(n log n) regardless of how far the support spreads.
pub fn cup_diagram(w: &Weight) -> CupDiagram {
    let sup = w.support().ascending();
    let mut cups = Vec::with_capacity(sup.len());
    let mut stack: Vec<i64> = Vec::new();
    for (i, &v) in sup.iter().enumerate() {
        stack.push(v);
        let stretch_end = sup.get(i + 1).map(|&next| next - 1).unwrap_or(i64::MAX);
        let mut x = v + 1;
        while x <= stretch_end {
            match stack.pop() {
                Some(a) => cups.push((a, x)),
                None => break,
            }
            x += 1;
        }
    }
    debug_assert!(stack.is_empty());
    cups.sort_unstable();
    CupDiagram { cups }
}

/// Mirror matching used by the inverse complement map: open at each ∨ and
/// close at the nearest free non-∨ vertex to its *left*.
fn anti_cup_diagram(w: &Weight) -> CupDiagram {
    let sup = w.support().ascending();
    let mut cups = Vec::with_capacity(sup.len());
    let mut stack: Vec<i64> = Vec::new();
    for (i, &v) in sup.iter().enumerate().rev() {
        stack.push(v);
        let stretch_end = if i > 0 { sup[i - 1] + 1 } else { i64::MIN };
        let mut x = v - 1;
        while x >= stretch_end {
            match stack.pop() {
                Some(b) => cups.push((x, b)),
                None => break,
            }
            x -= 1;
        }
    }
    debug_assert!(stack.is_empty());
    cups.sort_unstable();
    CupDiagram { cups }
}

fn sectors_of(cups: &CupDiagram, support: &Support) -> Vec<Sector> {
    let asc = support.ascending();
    let mut out: Vec<Sector> = Vec::new();
    let mut cur_end = i64::MIN;
    for &(a, b) in &cups.cups {
        if a > cur_end {
            out.push(Sector { start: a, end: b, support: Vec::new() });
            cur_end = b;
        }
    }
    for s in &mut out {
        s.support = asc.iter().copied().filter(|&x| s.start <= x && x <= s.end).collect();
        debug_assert_eq!((s.end - s.start + 1) as usize, 2 * s.rank());
    }
    out
}

/// The outer cups of `w`, left to right, with the gap/shift profile.
pub fn sectors(w: &Weight) -> (Vec<Sector>, SectorProfile) {
    let secs = sectors_of(&cup_diagram(w), &w.support());
    debug_assert!(secs.iter().all(|s| s.support.first() == Some(&s.start)));
    let ranks: Vec<usize> = secs.iter().map(|s| s.rank()).collect();
    debug_assert_eq!(ranks.iter().sum::<usize>(), w.rank());
    let gaps: Vec<i64> = secs.windows(2).map(|p| p[1].start - p[0].end - 1).collect();
    debug_assert!(gaps.iter().all(|&d| d >= 0));
    let last = w.entries().last().copied().unwrap_or(0);
    let profile = SectorProfile {
        ranks,
        gaps,
        d0_shift: last,
        d0_invariant: last + w.rank() as i64 - 1,
    };
    (secs, profile)
}

/// A maximal atypical weight with `λn = 0` and `λi ≤ n − i`; there are
/// Catalan-many of them in each rank.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct BasicWeight(Weight);

impl BasicWeight {
    pub fn new(w: Weight) -> Option<Self> {
        if is_basic(&w) {
            Some(BasicWeight(w))
        } else {
            None
        }
    }

    pub fn weight(&self) -> &Weight {
        &self.0
    }

    pub fn into_weight(self) -> Weight {
        self.0
    }
}

impl fmt::Display for BasicWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl fmt::Debug for BasicWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

pub fn is_basic(w: &Weight) -> bool {
    let n = w.rank() as i64;
    w.entries().last().is_none_or(|&l| l == 0)
        && w.entries().iter().enumerate().all(|(i, &l)| 0 <= l && l <= n - (i as i64 + 1))
}

/// The conjugate partition, re-padded with zeros to the same rank.
pub fn transpose_basic(b: &BasicWeight) -> BasicWeight {
    let n = b.weight().rank();
    let entries = b.weight().entries();
    let mut out = vec![0i64; n];
    for (k, slot) in out.iter_mut().enumerate() {
        *slot = entries.iter().filter(|&&l| l > k as i64).count() as i64;
    }
    BasicWeight::new(Weight::new(out).expect("conjugate is decreasing"))
        .expect("conjugate of a basic weight is basic")
}

/// Close all gaps between sectors and anchor the leftmost ∨ at `1 − n`.
pub fn associated_basic(w: &Weight) -> BasicWeight {
    let (secs, profile) = sectors(w);
    if secs.is_empty() {
        return BasicWeight(Weight::empty());
    }
    let mut pts = Vec::with_capacity(w.rank());
    let mut closed = 0i64;
    for (j, s) in secs.iter().enumerate() {
        if j > 0 {
            closed += profile.gaps[j - 1];
        }
        pts.extend(s.support.iter().map(|&x| x - closed));
    }
    let anchor = (1 - w.rank() as i64) - pts[0];
    let pts: Vec<i64> = pts.iter().map(|&x| x + anchor).collect();
    BasicWeight::new(Weight::from_support(&pts)).expect("gap closure yields a basic weight")
}

/// All basic weights of rank `n`, lexicographically; there are C(n) of them.
pub fn enumerate_basic(n: usize) -> Vec<BasicWeight> {
    fn rec(n: usize, i: usize, max: i64, prefix: &mut Vec<i64>, out: &mut Vec<BasicWeight>) {
        if i == n {
            out.push(BasicWeight(Weight::new(prefix.clone()).unwrap()));
            return;
        }
        let cap = max.min(n as i64 - (i as i64 + 1));
        for v in 0..=cap {
            prefix.push(v);
            rec(n, i + 1, v, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, 0, n as i64, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// A weight is weakly selfdual when its dual is a Berezin twist of itself:
/// sector basics pair up with their transposes under reversal and the
/// internal gaps form a palindrome.
pub fn is_weakly_selfdual(w: &Weight) -> bool {
    let (secs, profile) = sectors(w);
    let k = secs.len();
    let palindrome = (0..profile.gaps.len()).all(|i| profile.gaps[i] == profile.gaps[profile.gaps.len() - 1 - i]);
    palindrome
        && (0..k).all(|i| secs[i].basic() == transpose_basic(&secs[k - 1 - i].basic()))
}

/// Normalized representative of the dual: reversed sectors with transposed
/// basics and reversed gaps, then `λn = 0`. Pins the dual up to a Berezin
/// twist.
pub fn dual_class_rep(w: &Weight) -> Weight {
    let (secs, profile) = sectors(w);
    if secs.is_empty() {
        return Weight::empty();
    }
    let k = secs.len();
    let mut pts: Vec<i64> = Vec::with_capacity(w.rank());
    let mut cursor = 0i64;
    for j in 0..k {
        let b = transpose_basic(&secs[k - 1 - j].basic());
        let r = b.weight().rank() as i64;
        // A basic weight of rank r spans exactly [1-r, r].
        let offset = cursor - (1 - r);
        pts.extend(b.weight().support().ascending().iter().map(|&x| x + offset));
        cursor += 2 * r;
        if j + 1 < k {
            cursor += profile.gaps[k - 1 - (j + 1)];
        }
    }
    Weight::from_support(&pts).normalize().0
}

/// Canonical representative of the equivalence class generated by Berezin
/// twists and duality: the lexicographic minimum of the normalized weight
/// and its normalized dual.
pub fn class_key(w: &Weight) -> Weight {
    let a = w.normalize().0;
    let b = dual_class_rep(w);
    a.min(b)
}

pub fn are_equivalent(a: &Weight, b: &Weight) -> bool {
    a.rank() == b.rank() && class_key(a) == class_key(b)
}

/// Sector-wise complement: replace each sector's ∨-set K by `I \ K`.
pub fn lambda_c(w: &Weight) -> Weight {
    let (secs, _) = sectors(w);
    complement(&secs)
}

/// Inverse of [`lambda_c`]: the same complement taken along the mirror
/// (left-matched) sectors.
pub fn lambda_zero(w: &Weight) -> Weight {
    let secs = sectors_of(&anti_cup_diagram(w), &w.support());
    complement(&secs)
}

fn complement(secs: &[Sector]) -> Weight {
    let mut pts = Vec::new();
    for s in secs {
        let k: BTreeSet<i64> = s.support.iter().copied().collect();
        pts.extend((s.start..=s.end).filter(|x| !k.contains(x)));
    }
    Weight::from_support(&pts)
}

/// Spread of the even-part degrees: `2 · deg(associated_basic)`, between 0
/// and n(n−1).
pub fn depth(w: &Weight) -> i64 {
    2 * associated_basic(w).weight().degree()
}

/// Whether a projective summand in the tensor product is *not* excluded by
/// the degree bound `deg(b1) + deg(b2) ≥ n(n+1)/2` on the associated basics.
pub fn projective_possible(w1: &Weight, w2: &Weight) -> bool {
    assert_eq!(w1.rank(), w2.rank(), "projective_possible needs equal ranks");
    let n = w1.rank() as i64;
    let d = associated_basic(w1).weight().degree() + associated_basic(w2).weight().degree();
    d >= n * (n + 1) / 2
}

/// Width of the rendered vertex range, used by the CLI to refuse diagrams
/// that would not fit anything.
pub fn diagram_span(w: &Weight) -> i64 {
    let d = cup_diagram(w);
    match (d.cups.first(), d.cups.iter().map(|c| c.1).max()) {
        (Some(&(lo, _)), Some(hi)) => hi - lo + 1,
        _ => 0,
    }
}

/// Plain-text rendering: a coordinate header, a ∨/∧ marker line, then one
/// line per nesting depth with `\__/` arcs, two characters per vertex.
pub fn ascii_diagram(w: &Weight) -> String {
    let d = cup_diagram(w);
    if d.cups.is_empty() {
        return "(empty diagram)\n".to_string();
    }
    let sup: BTreeSet<i64> = w.support().ascending().into_iter().collect();
    let lo = d.cups.iter().map(|c| c.0).min().unwrap();
    let hi = d.cups.iter().map(|c| c.1).max().unwrap();
    let width = (2 * (hi - lo) + 1) as usize;
    let col = |x: i64| (2 * (x - lo)) as usize;

    let mut lines = Vec::new();
    lines.push(format!("{lo}..{hi}"));
    let mut markers = vec![' '; width];
    for x in lo..=hi {
        markers[col(x)] = if sup.contains(&x) { 'v' } else { '^' };
    }
    lines.push(markers.into_iter().collect());

    let nest = |c: &(i64, i64)| d.cups.iter().filter(|o| o.0 < c.0 && c.1 < o.1).count();
    let max_nest = d.cups.iter().map(&nest).max().unwrap_or(0);
    // Innermost arcs first so nesting reads downward and outward.
    for level in (0..=max_nest).rev() {
        let mut row = vec![' '; width];
        for c in d.cups.iter().filter(|c| nest(c) == level) {
            row[col(c.0)] = '\\';
            row[col(c.1)] = '/';
            for p in row.iter_mut().take(col(c.1)).skip(col(c.0) + 1) {
                *p = '_';
            }
        }
        lines.push(row.into_iter().collect());
    }
    let mut out: String = lines
        .into_iter()
        .map(|l| l.trim_end().to_string())
        .collect::<Vec<_>>()
        .join("\n");
    out.push('\n');
    out
}

/// Self-contained SVG with the number line on top and arcs bowing below it,
/// deterministic bytes for a fixed input.
pub fn svg_diagram(w: &Weight) -> String {
    let d = cup_diagram(w);
    let unit = 24i64;
    let (lo, hi) = if d.cups.is_empty() {
        (0, 1)
    } else {
        (
            d.cups.iter().map(|c| c.0).min().unwrap(),
            d.cups.iter().map(|c| c.1).max().unwrap(),
        )
    };
    let x = |v: i64| (v - lo + 1) * unit;
    let max_drop = d.cups.iter().map(|c| (c.1 - c.0) * unit).max().unwrap_or(unit);
    let width = x(hi) + unit;
    let height = max_drop + 2 * unit;
    let sup: BTreeSet<i64> = w.support().ascending().into_iter().collect();

    let mut s = String::new();
    s.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {width} {height}\" width=\"{width}\" height=\"{height}\">\n"
    ));
    s.push_str(&format!(
        "  <line x1=\"{}\" y1=\"{unit}\" x2=\"{}\" y2=\"{unit}\" stroke=\"black\"/>\n",
        x(lo) - unit / 2,
        x(hi) + unit / 2
    ));
    for v in lo..=hi {
        let mark = if sup.contains(&v) { "\u{2228}" } else { "\u{2227}" };
        s.push_str(&format!(
            "  <text x=\"{}\" y=\"{}\" font-size=\"10\" text-anchor=\"middle\">{mark}</text>\n",
            x(v),
            unit - 4
        ));
        s.push_str(&format!(
            "  <text x=\"{}\" y=\"{}\" font-size=\"8\" text-anchor=\"middle\">{v}</text>\n",
            x(v),
            unit / 2
        ));
    }
    for &(a, b) in &d.cups {
        // Semicircle below the line: sweep flag 0 bulges toward +y.
        let r = (x(b) - x(a)) / 2;
        s.push_str(&format!(
            "  <path d=\"M {} {unit} A {r} {r} 0 0 0 {} {unit}\" fill=\"none\" stroke=\"black\"/>\n",
            x(a),
            x(b)
        ));
    }
    s.push_str("</svg>\n");
    s
}
