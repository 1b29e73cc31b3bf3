//! Patterns over `{0, 1, *}^k` and the subcubes of `Q_k` they describe.
//!
//! A [`Pattern`] is stored as two bit-planes: `star` marks the `*`
//! coordinates and `ones` marks the fixed coordinates equal to 1. Every
//! predicate on pairs of patterns is then a handful of word operations.
//!
//! Coordinates are 0-based throughout the API. Text forms write the
//! coordinates left to right, so `"0**"` has coordinate 0 fixed to 0.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest dimension a [`Pattern`] can carry.
pub const MAX_K: usize = 16;

/// One coordinate of a pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Trit {
    Zero,
    One,
    Star,
}

impl Trit {
    pub fn to_char(self) -> char {
        match self {
            Trit::Zero => '0',
            Trit::One => '1',
            Trit::Star => '*',
        }
    }

    fn digit(self) -> usize {
        match self {
            Trit::Zero => 0,
            Trit::One => 1,
            Trit::Star => 2,
        }
    }
}

/// An element of `{0, 1, *}^k`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Pattern {
    k: u8,
    star: u32,
    ones: u32,
}

#[inline]
fn full_mask(k: usize) -> u32 {
    if k >= 32 {
        u32::MAX
    } else {
        (1u32 << k) - 1
    }
}

fn check_k(k: usize) -> Result<()> {
    if k == 0 || k > MAX_K {
        return Err(Error::DimensionOutOfRange {
            k,
            min: 1,
            max: MAX_K,
        });
    }
    Ok(())
}

impl Pattern {
    /// Builds a pattern from its two bit-planes. Bits of `ones` under `star`
    /// are cleared.
    pub fn from_masks(k: usize, star: u32, ones: u32) -> Result<Self> {
        check_k(k)?;
        let mask = full_mask(k);
        if star & !mask != 0 || ones & !mask != 0 {
            return Err(Error::InvalidArgument(format!(
                "mask bits set beyond dimension {k}"
            )));
        }
        Ok(Pattern {
            k: k as u8,
            star,
            ones: ones & !star,
        })
    }

    pub fn from_trits(trits: &[Trit]) -> Result<Self> {
        check_k(trits.len())?;
        let mut star = 0;
        let mut ones = 0;
        for (j, t) in trits.iter().enumerate() {
            match t {
                Trit::Zero => {}
                Trit::One => ones |= 1 << j,
                Trit::Star => star |= 1 << j,
            }
        }
        Ok(Pattern {
            k: trits.len() as u8,
            star,
            ones,
        })
    }

    /// The weight-0 pattern for a vertex of `Q_k` (bit `j` is coordinate `j`).
    pub fn vertex(k: usize, bits: u32) -> Result<Self> {
        Self::from_masks(k, 0, bits)
    }

    /// The full cube `(*, ..., *)`.
    pub fn full(k: usize) -> Result<Self> {
        check_k(k)?;
        Ok(Pattern {
            k: k as u8,
            star: full_mask(k),
            ones: 0,
        })
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k as usize
    }

    #[inline]
    pub fn star_mask(&self) -> u32 {
        self.star
    }

    #[inline]
    pub fn ones_mask(&self) -> u32 {
        self.ones
    }

    #[inline]
    pub fn fixed_mask(&self) -> u32 {
        !self.star & full_mask(self.k())
    }

    pub fn trit(&self, j: usize) -> Trit {
        debug_assert!(j < self.k());
        if self.star >> j & 1 == 1 {
            Trit::Star
        } else if self.ones >> j & 1 == 1 {
            Trit::One
        } else {
            Trit::Zero
        }
    }

    pub fn trits(&self) -> impl Iterator<Item = Trit> + '_ {
        (0..self.k()).map(move |j| self.trit(j))
    }

    /// Number of `*` coordinates; the dimension of the subcube.
    #[inline]
    pub fn weight(&self) -> usize {
        self.star.count_ones() as usize
    }

    /// The unique `*` coordinate of a weight-1 pattern (the colour an edge of
    /// `Q_k` carries in a hypercube colouring).
    pub fn star_coordinate(&self) -> Option<usize> {
        (self.weight() == 1).then(|| self.star.trailing_zeros() as usize)
    }

    /// Position of this pattern in the lexicographic order of `{0,1,*}^k`
    /// with `0 < 1 < *`; ranges over `0..3^k`.
    pub fn index(&self) -> usize {
        self.trits().fold(0, |acc, t| acc * 3 + t.digit())
    }

    /// Inverse of [`Pattern::index`].
    pub fn from_index(k: usize, mut index: usize) -> Result<Self> {
        check_k(k)?;
        if index >= 3usize.pow(k as u32) {
            return Err(Error::InvalidArgument(format!(
                "pattern index {index} out of range for k = {k}"
            )));
        }
        let mut star = 0;
        let mut ones = 0;
        for j in (0..k).rev() {
            match index % 3 {
                1 => ones |= 1 << j,
                2 => star |= 1 << j,
                _ => {}
            }
            index /= 3;
        }
        Ok(Pattern {
            k: k as u8,
            star,
            ones,
        })
    }

    /// All `3^k` patterns in lexicographic order.
    pub fn all(k: usize) -> Result<Vec<Pattern>> {
        check_k(k)?;
        (0..3usize.pow(k as u32))
            .map(|i| Pattern::from_index(k, i))
            .collect()
    }

    fn same_k(&self, other: &Pattern) -> Result<()> {
        if self.k != other.k {
            return Err(Error::DimensionMismatch {
                left: self.k(),
                right: other.k(),
            });
        }
        Ok(())
    }

    /// Bit mask of `Δ(σ, τ)`: coordinates where one pattern is 0 and the other 1.
    #[inline]
    pub fn delta_mask(&self, other: &Pattern) -> u32 {
        (self.fixed_mask() & other.fixed_mask()) & (self.ones ^ other.ones)
    }

    /// `Δ(σ, τ)` as a sorted list of 0-based coordinates.
    pub fn delta_set(&self, other: &Pattern) -> Result<Vec<usize>> {
        self.same_k(other)?;
        Ok(bits(self.delta_mask(other)).collect())
    }

    /// `|Δ(σ, τ)|`.
    pub fn distance(&self, other: &Pattern) -> Result<usize> {
        self.same_k(other)?;
        Ok(self.delta_mask(other).count_ones() as usize)
    }

    pub fn distinguishable(&self, other: &Pattern) -> Result<bool> {
        self.same_k(other)?;
        Ok(self.is_distinguishable_from(other))
    }

    pub fn compatible(&self, other: &Pattern) -> Result<bool> {
        self.same_k(other)?;
        Ok(self.is_compatible_with(other))
    }

    /// Unchecked form of [`Pattern::distinguishable`] for inner loops.
    #[inline]
    pub fn is_distinguishable_from(&self, other: &Pattern) -> bool {
        self.delta_mask(other) != 0
    }

    /// Unchecked form of [`Pattern::compatible`] for inner loops.
    #[inline]
    pub fn is_compatible_with(&self, other: &Pattern) -> bool {
        self.is_distinguishable_from(other) || self.star & other.star != 0
    }

    /// Whether the binary vertex `bits` lies in `Q(τ)`.
    #[inline]
    pub fn contains_vertex(&self, bits: u32) -> bool {
        (bits ^ self.ones) & self.fixed_mask() == 0
    }

    /// `Q(σ) ⊆ Q(τ)`.
    pub fn is_subcube_of(&self, other: &Pattern) -> bool {
        self.k == other.k
            && self.star & !other.star == 0
            && (self.ones ^ other.ones) & other.fixed_mask() == 0
    }

    /// The vertices of `Q(τ)` as bit vectors, in increasing numeric order.
    pub fn vertex_bits(&self) -> Vec<u32> {
        let mut out: Vec<u32> = subsets(self.star).map(|s| self.ones | s).collect();
        out.sort_unstable();
        out
    }

    pub fn subcube(&self) -> Subcube {
        Subcube {
            k: self.k(),
            vertices: self.vertex_bits(),
        }
    }

    /// `τ^j`: the pattern with fixed coordinate `j` flipped.
    pub fn flip(&self, j: usize) -> Result<Pattern> {
        if j >= self.k() {
            return Err(Error::CoordinateOutOfRange {
                coord: j,
                k: self.k(),
            });
        }
        if self.star >> j & 1 == 1 {
            return Err(Error::FlipOnStar { coord: j });
        }
        Ok(Pattern {
            ones: self.ones ^ (1 << j),
            ..*self
        })
    }

    /// `Q(σ; S)`: splits `Q(σ)` into parallel subcubes keeping `*` exactly on
    /// `S` and filling the other `*` coordinates in every way.
    pub fn parallel_subcubes(&self, keep: &[usize]) -> Result<PatternSet> {
        let mut keep_mask = 0u32;
        for &j in keep {
            if j >= self.k() {
                return Err(Error::CoordinateOutOfRange {
                    coord: j,
                    k: self.k(),
                });
            }
            if self.star >> j & 1 == 0 {
                return Err(Error::NotStarCoordinate {
                    coord: j,
                    pattern: self.to_string(),
                });
            }
            keep_mask |= 1 << j;
        }
        let fill = self.star & !keep_mask;
        let members = subsets(fill).map(|s| Pattern {
            k: self.k,
            star: keep_mask,
            ones: self.ones | s,
        });
        PatternSet::from_patterns(self.k(), members)
    }
}

/// Iterates the set bits of `mask` as coordinates.
pub(crate) fn bits(mask: u32) -> impl Iterator<Item = usize> {
    let mut m = mask;
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let j = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(j)
        }
    })
}

/// Iterates every submask of `mask`, starting from the empty one.
pub(crate) fn subsets(mask: u32) -> impl Iterator<Item = u32> {
    let mut next = Some(0u32);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == mask {
            None
        } else {
            Some((cur.wrapping_sub(mask)) & mask)
        };
        Some(cur)
    })
}

impl Ord for Pattern {
    fn cmp(&self, other: &Self) -> Ordering {
        self.k
            .cmp(&other.k)
            .then_with(|| self.trits().cmp(other.trits()))
    }
}

impl PartialOrd for Pattern {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in self.trits() {
            write!(f, "{}", t.to_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Pattern({self})")
    }
}

impl FromStr for Pattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let trits = s
            .trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(Trit::Zero),
                '1' => Ok(Trit::One),
                '*' => Ok(Trit::Star),
                _ => Err(Error::InvalidPattern(s.to_string())),
            })
            .collect::<Result<Vec<_>>>()?;
        Pattern::from_trits(&trits).map_err(|_| Error::InvalidPattern(s.to_string()))
    }
}

impl serde::Serialize for Pattern {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Pattern {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The vertex set of a subcube `Q(τ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subcube {
    pub k: usize,
    /// Binary vectors, bit `j` holding coordinate `j`, sorted ascending.
    pub vertices: Vec<u32>,
}

impl Subcube {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains(&self, bits: u32) -> bool {
        self.vertices.binary_search(&bits).is_ok()
    }

    /// Vertices rendered as `0`/`1` strings.
    pub fn vertex_strings(&self) -> Vec<String> {
        self.vertices
            .iter()
            .map(|&b| (0..self.k).map(|j| if b >> j & 1 == 1 { '1' } else { '0' }).collect())
            .collect()
    }
}

/// A set of patterns of a common dimension, kept in canonical order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PatternSet {
    k: usize,
    members: Vec<Pattern>,
}

impl PatternSet {
    pub fn new(k: usize) -> Result<Self> {
        check_k(k)?;
        Ok(PatternSet {
            k,
            members: Vec::new(),
        })
    }

    pub fn from_patterns<I: IntoIterator<Item = Pattern>>(k: usize, it: I) -> Result<Self> {
        check_k(k)?;
        let set: BTreeSet<Pattern> = it.into_iter().collect();
        if let Some(p) = set.iter().find(|p| p.k() != k) {
            return Err(Error::DimensionMismatch {
                left: k,
                right: p.k(),
            });
        }
        Ok(PatternSet {
            k,
            members: set.into_iter().collect(),
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Pattern> {
        self.members.iter()
    }

    pub fn as_slice(&self) -> &[Pattern] {
        &self.members
    }

    pub fn contains(&self, p: &Pattern) -> bool {
        self.members.binary_search(p).is_ok()
    }

    /// Pairwise distinguishable and every member of weight at least 1.
    pub fn is_distinguishable(&self) -> bool {
        self.members.iter().all(|p| p.weight() >= 1)
            && self.members.iter().enumerate().all(|(i, a)| {
                self.members[i + 1..]
                    .iter()
                    .all(|b| a.is_distinguishable_from(b))
            })
    }

    /// A distinguishable set whose subcubes cover `{0,1}^k`.
    pub fn is_decomposition(&self) -> bool {
        self.is_distinguishable() && self.covers_cube()
    }

    /// Whether the union of the member subcubes is the whole cube.
    pub fn covers_cube(&self) -> bool {
        let n = 1usize << self.k;
        let mut covered = vec![false; n];
        for p in &self.members {
            for v in subsets(p.star) {
                covered[(p.ones | v) as usize] = true;
            }
        }
        covered.into_iter().all(|c| c)
    }

    /// One pattern per line.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for p in &self.members {
            s.push_str(&p.to_string());
            s.push('\n');
        }
        s
    }

    /// Parses one pattern per line; blank lines and `#` comments are skipped.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut pats = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            pats.push(line.parse::<Pattern>().map_err(|e| Error::Parse {
                line: i + 1,
                message: e.to_string(),
            })?);
        }
        let k = pats.first().map(|p| p.k()).ok_or(Error::Parse {
            line: 0,
            message: "empty pattern set".into(),
        })?;
        PatternSet::from_patterns(k, pats)
    }
}

impl<'a> IntoIterator for &'a PatternSet {
    type Item = &'a Pattern;
    type IntoIter = std::slice::Iter<'a, Pattern>;

    fn into_iter(self) -> Self::IntoIter {
        self.members.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Pattern {
        s.parse().unwrap()
    }

    fn vset(k: usize, strs: &[&str]) -> Vec<u32> {
        let mut v: Vec<u32> = strs
            .iter()
            .map(|s| {
                assert_eq!(s.len(), k);
                s.chars()
                    .enumerate()
                    .fold(0, |acc, (j, c)| acc | ((c == '1') as u32) << j)
            })
            .collect();
        v.sort_unstable();
        v
    }

    #[test]
    fn weight_examples() {
        assert_eq!(p("0**").weight(), 2);
        assert_eq!(p("010").weight(), 0);
        assert_eq!(p("***").weight(), 3);
    }

    #[test]
    fn subcube_examples() {
        assert_eq!(
            p("0**").vertex_bits(),
            vset(3, &["000", "001", "010", "011"])
        );
        assert_eq!(p("11").vertex_bits(), vset(2, &["11"]));
        assert_eq!(p("*0").vertex_bits(), vset(2, &["00", "10"]));
        assert_eq!(p("0**").subcube().len(), 1 << p("0**").weight());
    }

    #[test]
    fn distinguishable_examples() {
        assert!(p("0*").distinguishable(&p("1*")).unwrap());
        assert!(!p("*0").distinguishable(&p("0*")).unwrap());
        assert!(p("00*").distinguishable(&p("01*")).unwrap());
        assert_eq!(
            p("0*").distinguishable(&p("0**")),
            Err(Error::DimensionMismatch { left: 2, right: 3 })
        );
    }

    #[test]
    fn compatible_examples() {
        assert!(!p("*0").compatible(&p("0*")).unwrap());
        assert!(!p("01").compatible(&p("01")).unwrap());
        assert!(p("*0").compatible(&p("*1")).unwrap());
    }

    #[test]
    fn delta_examples() {
        assert_eq!(p("0*0").delta_set(&p("1*1")).unwrap(), vec![0, 2]);
        assert_eq!(p("0*0").distance(&p("1*1")).unwrap(), 2);
        assert_eq!(p("0*1").delta_set(&p("0*1")).unwrap(), Vec::<usize>::new());
        assert_eq!(p("*0").delta_set(&p("*1")).unwrap(), vec![1]);
        assert_eq!(p("*0").distance(&p("*1")).unwrap(), 1);
    }

    #[test]
    fn set_examples() {
        let a = PatternSet::from_patterns(2, [p("*0"), p("*1")]).unwrap();
        assert!(a.is_distinguishable());
        assert!(a.is_decomposition());
        let b = PatternSet::from_patterns(2, [p("*0")]).unwrap();
        assert!(b.is_distinguishable());
        assert!(!b.is_decomposition());
        let c = PatternSet::from_patterns(2, [p("*0"), p("0*")]).unwrap();
        assert!(!c.is_distinguishable());
        // weight-0 members are excluded from distinguishable sets
        let d = PatternSet::from_patterns(2, [p("00"), p("11")]).unwrap();
        assert!(!d.is_distinguishable());
    }

    #[test]
    fn parallel_subcube_examples() {
        let s = p("***").parallel_subcubes(&[0]).unwrap();
        let want: Vec<Pattern> = ["*00", "*01", "*10", "*11"].iter().map(|s| p(s)).collect();
        assert_eq!(s.as_slice(), want.as_slice());

        let s = p("0**").parallel_subcubes(&[1, 2]).unwrap();
        assert_eq!(s.as_slice(), &[p("0**")]);

        let s = p("0**").parallel_subcubes(&[]).unwrap();
        assert_eq!(s.len(), 4);
        assert!(s.iter().all(|q| q.weight() == 0));
        let mut verts: Vec<u32> = s.iter().map(|q| q.ones_mask()).collect();
        let mut want = p("0**").vertex_bits();
        verts.sort_unstable();
        want.sort_unstable();
        assert_eq!(verts, want);

        assert!(matches!(
            p("0**").parallel_subcubes(&[0]),
            Err(Error::NotStarCoordinate { coord: 0, .. })
        ));
    }

    #[test]
    fn flip_examples() {
        assert_eq!(p("0*1").flip(0).unwrap(), p("1*1"));
        assert_eq!(p("0*1").flip(2).unwrap(), p("0*0"));
        assert_eq!(p("0*1").flip(1), Err(Error::FlipOnStar { coord: 1 }));
    }

    #[test]
    fn ordering_is_zero_one_star() {
        let all = Pattern::all(2).unwrap();
        let text: Vec<String> = all.iter().map(|p| p.to_string()).collect();
        assert_eq!(
            text,
            ["00", "01", "0*", "10", "11", "1*", "*0", "*1", "**"]
        );
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(sorted, all);
        for (i, q) in all.iter().enumerate() {
            assert_eq!(q.index(), i);
        }
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!("0x*".parse::<Pattern>().is_err());
        assert!("".parse::<Pattern>().is_err());
    }

    #[test]
    fn pattern_set_text() {
        let s = PatternSet::from_text("*1\n\n*0\n").unwrap();
        assert_eq!(s.to_text(), "*0\n*1\n");
    }
}
