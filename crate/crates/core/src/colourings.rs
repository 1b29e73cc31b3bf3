//! Edge-coloured graphs, hypercube colourings, profile partitions and edit
//! distance.
//!
//! Colours are 0-based in the API (colour `j` pairs with coordinate `j` of a
//! pattern); the text format writes them 1-based.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cube::{Pattern, Trit};
use crate::error::{Error, Result};
use crate::graph::{Component, SimpleGraph};
use crate::matchings::PerfectMatching;

/// A graph on `0..n` whose edges carry colours in `0..k`. Pairs without a
/// colour are non-edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KColouredGraph {
    k: usize,
    n: usize,
    // 0 = non-edge, c + 1 = colour c; stored for both orientations.
    cells: Vec<u8>,
}

impl KColouredGraph {
    pub fn new(k: usize, n: usize) -> Result<Self> {
        if k == 0 || k > crate::cube::MAX_K {
            return Err(Error::DimensionOutOfRange {
                k,
                min: 1,
                max: crate::cube::MAX_K,
            });
        }
        if n == 0 {
            return Err(Error::InvalidGraph("graph needs at least one vertex".into()));
        }
        Ok(KColouredGraph {
            k,
            n,
            cells: vec![0; n * n],
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    fn check_pair(&self, u: usize, v: usize) -> Result<()> {
        if u >= self.n || v >= self.n {
            return Err(Error::InvalidGraph(format!(
                "pair ({u}, {v}) outside vertex range 0..{}",
                self.n
            )));
        }
        if u == v {
            return Err(Error::InvalidGraph(format!("self-loop at {u}")));
        }
        Ok(())
    }

    /// Colours `{u, v}` with `colour`, replacing any previous colour.
    pub fn set_edge(&mut self, u: usize, v: usize, colour: usize) -> Result<()> {
        self.check_pair(u, v)?;
        if colour >= self.k {
            return Err(Error::InvalidGraph(format!(
                "colour {colour} outside 0..{}",
                self.k
            )));
        }
        self.cells[u * self.n + v] = colour as u8 + 1;
        self.cells[v * self.n + u] = colour as u8 + 1;
        Ok(())
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> Result<()> {
        self.check_pair(u, v)?;
        self.cells[u * self.n + v] = 0;
        self.cells[v * self.n + u] = 0;
        Ok(())
    }

    #[inline]
    pub fn colour(&self, u: usize, v: usize) -> Option<usize> {
        if u >= self.n || v >= self.n {
            return None;
        }
        match self.cells[u * self.n + v] {
            0 => None,
            c => Some(c as usize - 1),
        }
    }

    /// Edges `(u, v, colour)` with `u < v` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            (u + 1..self.n).filter_map(move |v| self.colour(u, v).map(|c| (u, v, c)))
        })
    }

    pub fn edge_count(&self) -> usize {
        self.cells.iter().filter(|&&c| c != 0).count() / 2
    }

    /// `e(G) / C(n, 2)`; a single vertex counts as fully dense.
    pub fn density(&self) -> f64 {
        if self.n < 2 {
            return 1.0;
        }
        let pairs = self.n * (self.n - 1) / 2;
        self.edge_count() as f64 / pairs as f64
    }

    /// Whether `e(G) >= alpha * C(n, 2)`.
    pub fn is_dense(&self, alpha: f64) -> bool {
        let pairs = (self.n * self.n.saturating_sub(1) / 2) as f64;
        self.edge_count() as f64 >= alpha * pairs
    }

    pub fn is_complete(&self) -> bool {
        self.edge_count() == self.n * (self.n - 1) / 2
    }

    /// Number of edges of each colour.
    pub fn colour_counts(&self) -> Vec<usize> {
        let mut out = vec![0; self.k];
        for (_, _, c) in self.edges() {
            out[c] += 1;
        }
        out
    }

    /// `G_i` as a graph on all `n` vertices.
    pub fn colour_class(&self, colour: usize) -> SimpleGraph {
        SimpleGraph::from_edges(
            self.n,
            self.edges().filter(|e| e.2 == colour).map(|(u, v, _)| (u, v)),
        )
        .expect("edges of a valid graph")
    }

    /// The uncoloured underlying graph.
    pub fn underlying(&self) -> SimpleGraph {
        SimpleGraph::from_edges(self.n, self.edges().map(|(u, v, _)| (u, v)))
            .expect("edges of a valid graph")
    }

    /// Graph file: `k N` on the first line, then `u v c` per edge with
    /// 0-based vertices and 1-based colours.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.k, self.n);
        for (u, v, c) in self.edges() {
            s.push_str(&format!("{u} {v} {}\n", c + 1));
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (ln, header) = lines.next().ok_or(Error::Parse {
            line: 0,
            message: "empty graph file".into(),
        })?;
        let nums = parse_usizes(header, ln)?;
        if nums.len() != 2 {
            return Err(Error::Parse {
                line: ln,
                message: "header must be `k N`".into(),
            });
        }
        let mut g = KColouredGraph::new(nums[0], nums[1])?;
        for (ln, l) in lines {
            let f = parse_usizes(l, ln)?;
            if f.len() != 3 || f[2] == 0 {
                return Err(Error::Parse {
                    line: ln,
                    message: "edge lines are `u v c` with colour c >= 1".into(),
                });
            }
            if g.colour(f[0], f[1]).is_some() {
                return Err(Error::Parse {
                    line: ln,
                    message: format!("pair ({}, {}) listed twice", f[0], f[1]),
                });
            }
            g.set_edge(f[0], f[1], f[2] - 1).map_err(|e| Error::Parse {
                line: ln,
                message: e.to_string(),
            })?;
        }
        Ok(g)
    }
}

fn parse_usizes(line: &str, ln: usize) -> Result<Vec<usize>> {
    line.split_whitespace()
        .map(|t| {
            t.parse::<usize>().map_err(|_| Error::Parse {
                line: ln,
                message: format!("expected a non-negative integer, found {t:?}"),
            })
        })
        .collect()
}

/// How cross edges of a hypercube colouring pick their colour from `Δ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CrossChoice {
    /// The least coordinate of `Δ(τ, σ)`.
    LeastInDelta,
    /// A uniformly random coordinate of `Δ(τ, σ)`, per edge.
    Seeded(u64),
}

/// A hypercube colouring together with the class of every vertex.
#[derive(Debug, Clone)]
pub struct HypercubeColouring {
    pub graph: KColouredGraph,
    pub matching: PerfectMatching,
    pub clique_size: usize,
    /// `class_of[v]` is the matching edge whose clique holds `v`.
    pub class_of: Vec<Pattern>,
}

impl HypercubeColouring {
    /// The hypercube colouring on `matching` with cliques of size
    /// `clique_size`. Vertices of the `i`-th edge (in sorted order) are
    /// `i * clique_size .. (i + 1) * clique_size`.
    pub fn build(matching: &PerfectMatching, clique_size: usize, choice: CrossChoice) -> Result<Self> {
        match choice {
            CrossChoice::LeastInDelta => Self::build_with(matching, clique_size, |_, _, _, delta| {
                delta.trailing_zeros() as usize
            }),
            CrossChoice::Seeded(seed) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                Self::build_with(matching, clique_size, move |_, _, _, delta| {
                    let options: Vec<usize> = crate::cube::bits(delta).collect();
                    options[rng.gen_range(0..options.len())]
                })
            }
        }
    }

    /// Builds with an arbitrary rule `choose(u, v, (τ, σ), Δ-mask)` for the
    /// colour of each cross edge `{u, v}`; fails if a chosen colour is not in
    /// `Δ(τ, σ)`.
    pub fn build_with<F>(matching: &PerfectMatching, clique_size: usize, mut choose: F) -> Result<Self>
    where
        F: FnMut(usize, usize, (&Pattern, &Pattern), u32) -> usize,
    {
        if clique_size == 0 {
            return Err(Error::InvalidArgument("clique size must be at least 1".into()));
        }
        let k = matching.k();
        let edges = matching.edges();
        let n = edges.len() * clique_size;
        let mut g = KColouredGraph::new(k, n)?;
        let class_of: Vec<Pattern> = (0..n).map(|v| edges[v / clique_size]).collect();
        for u in 0..n {
            for v in u + 1..n {
                let (a, b) = (&class_of[u], &class_of[v]);
                let colour = if u / clique_size == v / clique_size {
                    a.star_coordinate().expect("matching edges have weight 1")
                } else {
                    let delta = a.delta_mask(b);
                    let c = choose(u, v, (a, b), delta);
                    if c >= k || delta >> c & 1 == 0 {
                        return Err(Error::ColourOutsideDelta {
                            colour: c,
                            left: a.to_string(),
                            right: b.to_string(),
                        });
                    }
                    c
                };
                g.set_edge(u, v, colour)?;
            }
        }
        Ok(HypercubeColouring {
            graph: g,
            matching: matching.clone(),
            clique_size,
            class_of,
        })
    }
}

/// `G_i = G_i' ∪ G_i''`: the bipartite and non-bipartite components of one
/// colour class.
#[derive(Debug, Clone)]
pub struct ColourClassSplit {
    pub colour: usize,
    pub bipartite_part: SimpleGraph,
    pub non_bipartite_part: SimpleGraph,
    /// All components of `G_i` on the full vertex set, by least vertex.
    pub components: Vec<Component>,
}

pub fn colour_class_split(g: &KColouredGraph, colour: usize) -> Result<ColourClassSplit> {
    if colour >= g.k() {
        return Err(Error::InvalidArgument(format!(
            "colour {colour} outside 0..{}",
            g.k()
        )));
    }
    let class = g.colour_class(colour);
    let components = class.components();
    let mut comp_bipartite = vec![true; g.vertex_count()];
    for c in &components {
        for &v in &c.vertices {
            comp_bipartite[v] = c.is_bipartite();
        }
    }
    let mut bip = SimpleGraph::new(g.vertex_count());
    let mut non = SimpleGraph::new(g.vertex_count());
    for (u, v) in class.edges() {
        if comp_bipartite[u] {
            bip.add_edge(u, v)?;
        } else {
            non.add_edge(u, v)?;
        }
    }
    Ok(ColourClassSplit {
        colour,
        bipartite_part: bip,
        non_bipartite_part: non,
        components,
    })
}

/// Orientation of the bipartite components when forming a profile
/// partition. Components are indexed per colour by least vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BipartitionChoice {
    /// The least vertex of every bipartite component goes to side 0.
    LowestVertexSideZero,
    /// Each bipartite component is flipped by an independent fair coin.
    Seeded(u64),
    /// `flips[i][c]` flips the `c`-th component of colour `i` (non-bipartite
    /// components ignore their entry). Missing entries mean no flip.
    Explicit(Vec<Vec<bool>>),
    /// Orients each component so its least vertex `v` is on side
    /// `reference[v]_i` when that coordinate is fixed.
    AlignedTo(Vec<Pattern>),
}

/// A profile partition: every vertex is assigned the pattern of its class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfilePartition {
    k: usize,
    class_of: Vec<Pattern>,
}

impl ProfilePartition {
    pub fn compute(g: &KColouredGraph, choice: &BipartitionChoice) -> Result<Self> {
        let (k, n) = (g.k(), g.vertex_count());
        if let BipartitionChoice::AlignedTo(r) = choice {
            if r.len() != n || r.iter().any(|p| p.k() != k) {
                return Err(Error::InvalidArgument(
                    "reference labelling must give a k-pattern for every vertex".into(),
                ));
            }
        }
        let mut rng = match choice {
            BipartitionChoice::Seeded(s) => Some(ChaCha8Rng::seed_from_u64(*s)),
            _ => None,
        };
        let mut trits = vec![vec![Trit::Zero; k]; n];
        for colour in 0..k {
            let comps = g.colour_class(colour).components();
            for (ci, comp) in comps.iter().enumerate() {
                let Some(sides) = &comp.sides else {
                    for &v in &comp.vertices {
                        trits[v][colour] = Trit::Star;
                    }
                    continue;
                };
                let flip = match choice {
                    BipartitionChoice::LowestVertexSideZero => false,
                    BipartitionChoice::Seeded(_) => rng.as_mut().expect("seeded").gen::<bool>(),
                    BipartitionChoice::Explicit(f) => f
                        .get(colour)
                        .and_then(|row| row.get(ci))
                        .copied()
                        .unwrap_or(false),
                    BipartitionChoice::AlignedTo(r) => r[comp.vertices[0]].trit(colour) == Trit::One,
                };
                for (&v, &s) in comp.vertices.iter().zip(sides) {
                    trits[v][colour] = if (s == 1) ^ flip { Trit::One } else { Trit::Zero };
                }
            }
        }
        let class_of = trits
            .iter()
            .map(|t| Pattern::from_trits(t))
            .collect::<Result<Vec<_>>>()?;
        Ok(ProfilePartition { k, class_of })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// The pattern `τ` with `v ∈ V_τ`.
    pub fn class_of(&self, v: usize) -> Pattern {
        self.class_of[v]
    }

    pub fn classes(&self) -> &[Pattern] {
        &self.class_of
    }

    /// `V_τ` in increasing vertex order.
    pub fn members(&self, tau: &Pattern) -> Vec<usize> {
        (0..self.class_of.len())
            .filter(|&v| self.class_of[v] == *tau)
            .collect()
    }

    pub fn profile(&self) -> Profile {
        let mut counts = vec![0u64; 3usize.pow(self.k as u32)];
        for p in &self.class_of {
            counts[p.index()] += 1;
        }
        Profile { k: self.k, counts }
    }

    /// Checks both observations edge by edge: a colour-`j` edge inside a
    /// bipartite component joins classes with `j`-coordinates 0 and 1; one
    /// inside a non-bipartite component joins classes with `*` at `j`.
    pub fn check_observations(&self, g: &KColouredGraph) -> std::result::Result<(), String> {
        for (u, v, j) in g.edges() {
            let (a, b) = (self.class_of[u].trit(j), self.class_of[v].trit(j));
            let ok = matches!(
                (a, b),
                (Trit::Zero, Trit::One) | (Trit::One, Trit::Zero) | (Trit::Star, Trit::Star)
            );
            if !ok {
                return Err(format!(
                    "edge ({u}, {v}) of colour {} joins classes {} and {}",
                    j + 1,
                    self.class_of[u],
                    self.class_of[v]
                ));
            }
        }
        Ok(())
    }
}

/// Class sizes `x_τ = |V_τ|`, indexed by [`Pattern::index`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Profile {
    k: usize,
    counts: Vec<u64>,
}

impl Profile {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn get(&self, tau: &Pattern) -> u64 {
        self.counts[tau.index()]
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Non-zero entries in pattern order.
    pub fn support(&self) -> Vec<(Pattern, u64)> {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, &c)| (Pattern::from_index(self.k, i).expect("index in range"), c))
            .collect()
    }

    /// `x / scale` as a real vector.
    pub fn scaled(&self, scale: f64) -> crate::optimizer::ProfileVector<f64> {
        let values = self.counts.iter().map(|&c| c as f64 / scale).collect();
        crate::optimizer::ProfileVector::from_values(self.k, values).expect("length is 3^k")
    }
}

/// Per-colour `|G_i △ H_i|` where `V(H) ⊆ V(G)` (vertices `0..v(H)`).
pub fn edit_distance(g: &KColouredGraph, h: &KColouredGraph) -> Result<Vec<u64>> {
    if h.vertex_count() > g.vertex_count() {
        return Err(Error::InvalidArgument(format!(
            "second graph has {} vertices, more than the first ({})",
            h.vertex_count(),
            g.vertex_count()
        )));
    }
    if g.k() != h.k() {
        return Err(Error::DimensionMismatch {
            left: g.k(),
            right: h.k(),
        });
    }
    let mut out = vec![0u64; g.k()];
    for u in 0..g.vertex_count() {
        for v in u + 1..g.vertex_count() {
            let a = g.colour(u, v);
            let b = h.colour(u, v);
            if a != b {
                if let Some(c) = a {
                    out[c] += 1;
                }
                if let Some(c) = b {
                    out[c] += 1;
                }
            }
        }
    }
    Ok(out)
}

/// Whether `|G_i △ H_i| <= ε v(G)^2` for every colour.
pub fn is_eps_close(g: &KColouredGraph, h: &KColouredGraph, eps: f64) -> Result<bool> {
    let bound = eps * (g.vertex_count() as f64).powi(2);
    Ok(edit_distance(g, h)?.iter().all(|&d| d as f64 <= bound))
}

/// Recolours `round(fraction * e(G))` distinct edges, each to a uniformly
/// random different colour.
pub fn recolour_random_edges(g: &KColouredGraph, fraction: f64, seed: u64) -> Result<KColouredGraph> {
    if !(0.0..=1.0).contains(&fraction) {
        return Err(Error::InvalidArgument(format!("fraction {fraction} outside [0, 1]")));
    }
    if g.k() < 2 {
        return Ok(g.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<(usize, usize, usize)> = g.edges().collect();
    let count = (fraction * edges.len() as f64).round() as usize;
    edges.shuffle(&mut rng);
    let mut out = g.clone();
    for &(u, v, c) in edges.iter().take(count) {
        let mut nc = rng.gen_range(0..g.k() - 1);
        if nc >= c {
            nc += 1;
        }
        out.set_edge(u, v, nc)?;
    }
    Ok(out)
}

/// Shape of one colour class in the structural certificate.
#[derive(Debug, Clone, Serialize)]
pub struct ColourStructure {
    /// 1-based colour.
    pub colour: usize,
    pub edges: usize,
    pub bipartite_components: usize,
    /// Sizes of the non-bipartite components (all must be cliques).
    pub clique_sizes: Vec<usize>,
    /// Non-bipartite components that are not complete or are too large.
    pub offending_components: Vec<Vec<usize>>,
    pub passes: bool,
}

/// Structural proof that no colour class contains `C_n` (odd `n`): every
/// colour class must be a bipartite graph plus disjoint cliques on fewer
/// than `n` vertices.
#[derive(Debug, Clone, Serialize)]
pub struct StructuralReport {
    pub cycle_length: usize,
    pub per_colour: Vec<ColourStructure>,
    pub passes: bool,
}

pub fn structural_no_odd_cycle(g: &KColouredGraph, cycle_length: usize) -> Result<StructuralReport> {
    if cycle_length < 3 || cycle_length.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "structural check needs an odd cycle length >= 3, got {cycle_length}"
        )));
    }
    let mut per_colour = Vec::with_capacity(g.k());
    for colour in 0..g.k() {
        let class = g.colour_class(colour);
        let comps = class.components();
        let mut clique_sizes = Vec::new();
        let mut offending = Vec::new();
        let mut bipartite = 0;
        for c in &comps {
            if c.is_bipartite() {
                bipartite += 1;
            } else {
                clique_sizes.push(c.len());
                if !c.is_complete() || c.len() >= cycle_length {
                    offending.push(c.vertices.clone());
                }
            }
        }
        per_colour.push(ColourStructure {
            colour: colour + 1,
            edges: class.edge_count(),
            bipartite_components: bipartite,
            passes: offending.is_empty(),
            clique_sizes,
            offending_components: offending,
        });
    }
    let passes = per_colour.iter().all(|c| c.passes);
    Ok(StructuralReport {
        cycle_length,
        per_colour,
        passes,
    })
}
