//! Perfect matchings of the hypercube `Q_k`, the action of `Aut(Q_k)` on
//! them, and orbit classification.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::cube::{Pattern, PatternSet};
use crate::error::{Error, Result};

/// Largest dimension enumerated without an explicit opt-in.
pub const MAX_DEFAULT_K: usize = 4;
/// Largest dimension enumerated at all.
pub const MAX_ENUMERATION_K: usize = 5;
/// Largest dimension for which orbits are classified.
pub const MAX_CLASSIFY_K: usize = 4;

/// A perfect matching of `Q_k`, stored as its sorted weight-1 patterns.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PerfectMatching {
    k: usize,
    edges: Vec<Pattern>,
}

impl PerfectMatching {
    /// Validates that `edges` are `2^{k-1}` weight-1 patterns decomposing `Q_k`.
    pub fn new(k: usize, edges: Vec<Pattern>) -> Result<Self> {
        let set = PatternSet::from_patterns(k, edges)?;
        if set.len() != 1 << (k - 1) {
            return Err(Error::NotPerfectMatching(format!(
                "expected {} edges, found {}",
                1 << (k - 1),
                set.len()
            )));
        }
        if let Some(p) = set.iter().find(|p| p.weight() != 1) {
            return Err(Error::NotPerfectMatching(format!("{p} has weight {}", p.weight())));
        }
        if !set.is_decomposition() {
            return Err(Error::NotPerfectMatching(
                "edges overlap or leave a vertex uncovered".into(),
            ));
        }
        Ok(PerfectMatching {
            k,
            edges: set.as_slice().to_vec(),
        })
    }

    fn from_sorted_unchecked(k: usize, edges: Vec<Pattern>) -> Self {
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        PerfectMatching { k, edges }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn edges(&self) -> &[Pattern] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn position(&self, p: &Pattern) -> Option<usize> {
        self.edges.binary_search(p).ok()
    }

    pub fn contains(&self, p: &Pattern) -> bool {
        self.position(p).is_some()
    }

    pub fn to_pattern_set(&self) -> PatternSet {
        PatternSet::from_patterns(self.k, self.edges.iter().copied())
            .expect("matching edges share a dimension")
    }

    /// A coordinate `j` such that no edge runs in direction `j`, if any: the
    /// matching then splits into matchings of the two halves `x_j = 0, 1`.
    pub fn inductive_split_coordinate(&self) -> Option<usize> {
        let used = self.edges.iter().fold(0u32, |m, e| m | e.star_mask());
        (0..self.k).find(|&j| used >> j & 1 == 0)
    }

    pub fn is_inductively_decomposable(&self) -> bool {
        self.inductive_split_coordinate().is_some()
    }

    /// Matching file: `k` on the first line, then one pattern per line.
    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.k);
        for e in &self.edges {
            s.push_str(&e.to_string());
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (ln, first) = lines.next().ok_or(Error::Parse {
            line: 0,
            message: "empty matching file".into(),
        })?;
        let k: usize = first.parse().map_err(|_| Error::Parse {
            line: ln,
            message: format!("expected dimension, found {first:?}"),
        })?;
        let mut edges = Vec::new();
        for (ln, l) in lines {
            for tok in l.split_whitespace() {
                edges.push(tok.parse::<Pattern>().map_err(|e| Error::Parse {
                    line: ln,
                    message: e.to_string(),
                })?);
            }
        }
        PerfectMatching::new(k, edges)
    }
}

impl fmt::Display for PerfectMatching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.edges.iter().map(|e| e.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

impl Serialize for PerfectMatching {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.edges.iter())
    }
}

fn check_enum_k(k: usize, max: usize) -> Result<()> {
    if k == 0 || k > max {
        return Err(Error::DimensionOutOfRange { k, min: 1, max });
    }
    Ok(())
}

/// Calls `visit` on every perfect matching of `Q_k` in a fixed order.
///
/// Backtracking over vertices in increasing numeric order: the least
/// uncovered vertex is matched to each uncovered neighbour, trying
/// directions `0..k` in turn.
pub fn for_each_matching<F: FnMut(&PerfectMatching)>(
    k: usize,
    allow_large: bool,
    mut visit: F,
) -> Result<()> {
    let max = if allow_large {
        MAX_ENUMERATION_K
    } else {
        MAX_DEFAULT_K
    };
    check_enum_k(k, max)?;
    let n = 1usize << k;
    let mut covered = vec![false; n];
    let mut stack: Vec<Pattern> = Vec::with_capacity(n / 2);

    fn rec<F: FnMut(&PerfectMatching)>(
        k: usize,
        start: usize,
        covered: &mut [bool],
        stack: &mut Vec<Pattern>,
        visit: &mut F,
    ) {
        let n = covered.len();
        let Some(v) = (start..n).find(|&v| !covered[v]) else {
            let mut edges = stack.clone();
            edges.sort();
            visit(&PerfectMatching::from_sorted_unchecked(k, edges));
            return;
        };
        covered[v] = true;
        for j in 0..k {
            let u = v ^ (1 << j);
            if covered[u] {
                continue;
            }
            covered[u] = true;
            let star = 1u32 << j;
            let ones = (v as u32) & !star;
            stack.push(Pattern::from_masks(k, star, ones).expect("valid edge"));
            rec(k, v + 1, covered, stack, visit);
            stack.pop();
            covered[u] = false;
        }
        covered[v] = false;
    }

    rec(k, 0, &mut covered, &mut stack, &mut visit);
    Ok(())
}

/// All perfect matchings of `Q_k` for `1 <= k <= 4`, in enumeration order.
pub fn enumerate_matchings(k: usize) -> Result<Vec<PerfectMatching>> {
    let mut out = Vec::new();
    for_each_matching(k, false, |m| out.push(m.clone()))?;
    Ok(out)
}

/// Same as [`enumerate_matchings`] but also admits `k = 5`.
pub fn enumerate_matchings_large(k: usize) -> Result<Vec<PerfectMatching>> {
    let mut out = Vec::new();
    for_each_matching(k, true, |m| out.push(m.clone()))?;
    Ok(out)
}

/// Number of perfect matchings of `Q_k` without materialising them.
pub fn count_matchings(k: usize, allow_large: bool) -> Result<u64> {
    let mut count = 0u64;
    for_each_matching(k, allow_large, |_| count += 1)?;
    Ok(count)
}

/// An automorphism of `Q_k`: flip the coordinates in `flip`, then send
/// coordinate `i` to coordinate `perm[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CubeAutomorphism {
    perm: Vec<usize>,
    flip: u32,
}

impl CubeAutomorphism {
    pub fn new(perm: Vec<usize>, flip: u32) -> Result<Self> {
        let k = perm.len();
        let mut seen = vec![false; k];
        for &p in &perm {
            if p >= k || seen[p] {
                return Err(Error::InvalidArgument(format!(
                    "{perm:?} is not a permutation of 0..{k}"
                )));
            }
            seen[p] = true;
        }
        if k < 32 && flip >> k != 0 {
            return Err(Error::InvalidArgument(format!(
                "flip mask {flip:#b} exceeds dimension {k}"
            )));
        }
        Ok(CubeAutomorphism { perm, flip })
    }

    pub fn identity(k: usize) -> Self {
        CubeAutomorphism {
            perm: (0..k).collect(),
            flip: 0,
        }
    }

    pub fn k(&self) -> usize {
        self.perm.len()
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn flip_mask(&self) -> u32 {
        self.flip
    }

    /// Image of a pattern (and hence of its subcube).
    pub fn apply_pattern(&self, p: &Pattern) -> Pattern {
        debug_assert_eq!(p.k(), self.k());
        let ones = (p.ones_mask() ^ self.flip) & p.fixed_mask();
        let mut star2 = 0u32;
        let mut ones2 = 0u32;
        for (i, &t) in self.perm.iter().enumerate() {
            star2 |= (p.star_mask() >> i & 1) << t;
            ones2 |= (ones >> i & 1) << t;
        }
        Pattern::from_masks(p.k(), star2, ones2).expect("automorphism preserves dimension")
    }

    /// Image of a matching.
    pub fn apply(&self, m: &PerfectMatching) -> Result<PerfectMatching> {
        if m.k() != self.k() {
            return Err(Error::DimensionMismatch {
                left: self.k(),
                right: m.k(),
            });
        }
        let mut edges: Vec<Pattern> = m.edges.iter().map(|e| self.apply_pattern(e)).collect();
        edges.sort();
        Ok(PerfectMatching::from_sorted_unchecked(m.k, edges))
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &CubeAutomorphism) -> CubeAutomorphism {
        debug_assert_eq!(self.k(), other.k());
        let k = self.k();
        // other: flip by f2, then move i -> p2[i]; self: flip by f1, move j -> p1[j].
        // A bit at i ends up at p1[p2[i]], flipped by f2[i] xor f1[p2[i]].
        let perm: Vec<usize> = (0..k).map(|i| self.perm[other.perm[i]]).collect();
        let mut flip = other.flip;
        for i in 0..k {
            flip ^= (self.flip >> other.perm[i] & 1) << i;
        }
        CubeAutomorphism { perm, flip }
    }

    /// Every one of the `k! 2^k` automorphisms.
    pub fn all(k: usize) -> Vec<CubeAutomorphism> {
        let mut perms = Vec::new();
        let mut cur: Vec<usize> = (0..k).collect();
        permutations(&mut cur, 0, &mut perms);
        perms.sort();
        let mut out = Vec::with_capacity(perms.len() << k);
        for p in perms {
            for flip in 0..(1u32 << k) {
                out.push(CubeAutomorphism {
                    perm: p.clone(),
                    flip,
                });
            }
        }
        out
    }
}

fn permutations(cur: &mut Vec<usize>, i: usize, out: &mut Vec<Vec<usize>>) {
    if i == cur.len() {
        out.push(cur.clone());
        return;
    }
    for j in i..cur.len() {
        cur.swap(i, j);
        permutations(cur, i + 1, out);
        cur.swap(i, j);
    }
}

/// Canonical representative of the orbit of `m`: the image whose sorted
/// edge list is lexicographically least.
pub fn canonical_form(m: &PerfectMatching) -> Result<PerfectMatching> {
    check_enum_k(m.k(), MAX_CLASSIFY_K)?;
    Ok(canonical_with(m, &CubeAutomorphism::all(m.k())))
}

fn canonical_with(m: &PerfectMatching, group: &[CubeAutomorphism]) -> PerfectMatching {
    group
        .iter()
        .map(|g| g.apply(m).expect("same dimension"))
        .min()
        .expect("group is non-empty")
}

/// One orbit of `Aut(Q_k)` on perfect matchings.
#[derive(Debug, Clone, Serialize)]
pub struct MatchingClass {
    pub representative: PerfectMatching,
    pub orbit_size: usize,
    pub inductively_decomposable: bool,
}

/// Orbits of perfect matchings, ordered by canonical representative.
#[derive(Debug, Clone, Serialize)]
pub struct Classification {
    pub k: usize,
    pub total_matchings: usize,
    pub group_order: usize,
    pub classes: Vec<MatchingClass>,
}

pub fn classify(k: usize) -> Result<Classification> {
    check_enum_k(k, MAX_CLASSIFY_K)?;
    let group = CubeAutomorphism::all(k);
    let all = enumerate_matchings(k)?;
    let mut orbits: BTreeMap<PerfectMatching, usize> = BTreeMap::new();
    for m in &all {
        *orbits.entry(canonical_with(m, &group)).or_default() += 1;
    }
    let classes = orbits
        .into_iter()
        .map(|(rep, size)| MatchingClass {
            inductively_decomposable: rep.is_inductively_decomposable(),
            representative: rep,
            orbit_size: size,
        })
        .collect();
    Ok(Classification {
        k,
        total_matchings: all.len(),
        group_order: group.len(),
        classes,
    })
}

/// `f(k)`: the number of orbits of perfect matchings under `Aut(Q_k)`.
pub fn count_classes(k: usize) -> Result<usize> {
    Ok(classify(k)?.classes.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pm(k: usize, s: &[&str]) -> PerfectMatching {
        PerfectMatching::new(k, s.iter().map(|x| x.parse().unwrap()).collect()).unwrap()
    }

    #[test]
    fn counts_for_small_k() {
        assert_eq!(enumerate_matchings(1).unwrap().len(), 1);
        assert_eq!(enumerate_matchings(2).unwrap().len(), 2);
        assert_eq!(enumerate_matchings(3).unwrap().len(), 9);
    }

    #[test]
    fn k2_matchings_are_the_two_expected() {
        let all = enumerate_matchings(2).unwrap();
        let mut got: Vec<String> = all.iter().map(|m| m.to_string()).collect();
        got.sort();
        assert_eq!(got, vec!["{*0, *1}", "{0*, 1*}"]);
    }

    #[test]
    fn range_guard() {
        assert!(enumerate_matchings(0).is_err());
        assert!(enumerate_matchings(5).is_err());
        assert!(count_classes(5).is_err());
    }

    #[test]
    fn rejects_non_matchings() {
        let bad = PerfectMatching::new(2, vec!["*0".parse().unwrap(), "0*".parse().unwrap()]);
        assert!(bad.is_err());
        let short = PerfectMatching::new(2, vec!["*0".parse().unwrap()]);
        assert!(short.is_err());
        let heavy = PerfectMatching::new(2, vec!["**".parse().unwrap()]);
        assert!(heavy.is_err());
    }

    #[test]
    fn automorphism_examples() {
        let m = pm(2, &["*0", "*1"]);
        assert_eq!(CubeAutomorphism::identity(2).apply(&m).unwrap(), m);
        let flip0 = CubeAutomorphism::new(vec![0, 1], 0b01).unwrap();
        assert_eq!(flip0.apply(&m).unwrap(), m);
        let swap = CubeAutomorphism::new(vec![1, 0], 0).unwrap();
        assert_eq!(swap.apply(&m).unwrap(), pm(2, &["0*", "1*"]));
    }

    #[test]
    fn composition_is_an_action() {
        let group = CubeAutomorphism::all(3);
        assert_eq!(group.len(), 48);
        let ms = enumerate_matchings(3).unwrap();
        for (i, g) in group.iter().enumerate().step_by(5) {
            let h = &group[(i * 7 + 3) % group.len()];
            for m in &ms {
                let lhs = g.compose(h).apply(m).unwrap();
                let rhs = g.apply(&h.apply(m).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn f_values() {
        assert_eq!(count_classes(2).unwrap(), 1);
        assert_eq!(count_classes(3).unwrap(), 2);
    }

    #[test]
    fn inductive_split() {
        let m = pm(2, &["*0", "*1"]);
        assert_eq!(m.inductive_split_coordinate(), Some(1));
        assert!(m.is_inductively_decomposable());
    }

    #[test]
    fn matching_text_roundtrip() {
        let m = pm(3, &["*00", "*10", "0*1", "1*1"]);
        assert_eq!(PerfectMatching::from_text(&m.to_text()).unwrap(), m);
    }
}
