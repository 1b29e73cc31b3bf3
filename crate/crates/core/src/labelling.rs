//! Coloured multigraphs over a perfect matching, admissible labellings and
//! the recursion that repairs bad edges one at a time.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::colourings::KColouredGraph;
use crate::cube::{bits, Pattern, Trit};
use crate::error::{Error, Result};
use crate::graph::SimpleGraph;
use crate::matchings::{enumerate_matchings, PerfectMatching};

/// A `k`-coloured multigraph on the edges of a perfect matching. Vertices are
/// positions in the sorted matching; each pair carries a set of colours.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColouredMultigraph {
    matching: PerfectMatching,
    // (a, b, colour) with a < b, sorted and without repeats.
    edges: Vec<(usize, usize, usize)>,
}

impl ColouredMultigraph {
    pub fn new<I: IntoIterator<Item = (usize, usize, usize)>>(matching: PerfectMatching, edges: I) -> Result<Self> {
        let mut g = ColouredMultigraph {
            matching,
            edges: Vec::new(),
        };
        let mut set = BTreeSet::new();
        for (a, b, c) in edges {
            g.check_edge(a, b, c)?;
            set.insert((a.min(b), a.max(b), c));
        }
        g.edges = set.into_iter().collect();
        Ok(g)
    }

    pub fn empty(matching: PerfectMatching) -> Self {
        ColouredMultigraph {
            matching,
            edges: Vec::new(),
        }
    }

    fn check_edge(&self, a: usize, b: usize, c: usize) -> Result<()> {
        let m = self.matching.len();
        if a >= m || b >= m {
            return Err(Error::InvalidGraph(format!("edge ({a}, {b}) leaves the {m} vertices")));
        }
        if a == b {
            return Err(Error::InvalidGraph(format!("self-loop at {a}")));
        }
        if c >= self.matching.k() {
            return Err(Error::InvalidGraph(format!(
                "colour {} outside 1..={}",
                c + 1,
                self.matching.k()
            )));
        }
        Ok(())
    }

    /// Adds an edge; returns `false` if it was already present.
    pub fn add_edge(&mut self, a: usize, b: usize, colour: usize) -> Result<bool> {
        self.check_edge(a, b, colour)?;
        let e = (a.min(b), a.max(b), colour);
        match self.edges.binary_search(&e) {
            Ok(_) => Ok(false),
            Err(pos) => {
                self.edges.insert(pos, e);
                Ok(true)
            }
        }
    }

    pub fn matching(&self) -> &PerfectMatching {
        &self.matching
    }

    pub fn k(&self) -> usize {
        self.matching.k()
    }

    pub fn vertex_count(&self) -> usize {
        self.matching.len()
    }

    pub fn vertex(&self, i: usize) -> Pattern {
        self.matching.edges()[i]
    }

    pub fn edges(&self) -> &[(usize, usize, usize)] {
        &self.edges
    }

    /// Colours on the pair `{a, b}`.
    pub fn colours_between(&self, a: usize, b: usize) -> Vec<usize> {
        let (a, b) = (a.min(b), a.max(b));
        self.edges
            .iter()
            .filter(|e| e.0 == a && e.1 == b)
            .map(|e| e.2)
            .collect()
    }

    /// `Ψ_j`, the colour-`j` class as a simple graph.
    pub fn colour_graph(&self, j: usize) -> SimpleGraph {
        SimpleGraph::from_edges(
            self.vertex_count(),
            self.edges.iter().filter(|e| e.2 == j).map(|e| (e.0, e.1)),
        )
        .expect("endpoints validated")
    }

    /// Line 1 `k`, line 2 the matching, then `a b colour` with 1-based colours.
    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.k());
        let pats: Vec<String> = self.matching.edges().iter().map(Pattern::to_string).collect();
        s.push_str(&pats.join(" "));
        s.push('\n');
        for &(a, b, c) in &self.edges {
            s.push_str(&format!("{a} {b} {}\n", c + 1));
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
            message: "missing dimension line".into(),
        })?;
        let k: usize = first.parse().map_err(|_| Error::Parse {
            line: ln,
            message: format!("expected the dimension, found {first:?}"),
        })?;
        let (ln, second) = lines.next().ok_or(Error::Parse {
            line: ln,
            message: "missing matching line".into(),
        })?;
        let pats = second
            .split_whitespace()
            .map(|t| {
                t.parse::<Pattern>().map_err(|e| Error::Parse {
                    line: ln,
                    message: e.to_string(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let matching = PerfectMatching::new(k, pats).map_err(|e| Error::Parse {
            line: ln,
            message: e.to_string(),
        })?;
        let mut g = ColouredMultigraph::empty(matching);
        for (ln, line) in lines {
            let nums = line
                .split_whitespace()
                .map(|t| t.parse::<usize>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| Error::Parse {
                    line: ln,
                    message: format!("expected `a b colour`, found {line:?}"),
                })?;
            let [a, b, c] = nums[..] else {
                return Err(Error::Parse {
                    line: ln,
                    message: format!("expected `a b colour`, found {line:?}"),
                });
            };
            if c == 0 {
                return Err(Error::Parse {
                    line: ln,
                    message: "colours are numbered from 1".into(),
                });
            }
            g.add_edge(a, b, c - 1).map_err(|e| Error::Parse {
                line: ln,
                message: e.to_string(),
            })?;
        }
        Ok(g)
    }
}

/// `Γ` and `Γ*` of a coloured graph whose vertices are grouped into classes
/// indexed by the edges of `matching`. Edges inside a class are ignored.
pub fn build_gamma(
    g: &KColouredGraph,
    matching: &PerfectMatching,
    class_map: &[Pattern],
) -> Result<(ColouredMultigraph, ColouredMultigraph)> {
    if class_map.len() != g.vertex_count() {
        return Err(Error::InvalidArgument(format!(
            "class map has {} entries for {} vertices",
            class_map.len(),
            g.vertex_count()
        )));
    }
    if g.k() != matching.k() {
        return Err(Error::DimensionMismatch {
            left: g.k(),
            right: matching.k(),
        });
    }
    let pos = class_map
        .iter()
        .enumerate()
        .map(|(v, p)| {
            matching
                .position(p)
                .ok_or_else(|| Error::InvalidArgument(format!("vertex {v} is mapped to {p}, not a matching edge")))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut gamma = ColouredMultigraph::empty(matching.clone());
    for (u, v, c) in g.edges() {
        if pos[u] != pos[v] {
            gamma.add_edge(pos[u], pos[v], c)?;
        }
    }
    let mut star = ColouredMultigraph::empty(matching.clone());
    let e = &gamma.edges;
    let mut i = 0;
    while i < e.len() {
        let mut j = i;
        while j < e.len() && (e[j].0, e[j].1) == (e[i].0, e[i].1) {
            j += 1;
        }
        if j - i == 1 {
            star.edges.push(e[i]);
        }
        i = j;
    }
    Ok((gamma, star))
}

/// A matching `T_j ⊆ Γ*_j` covering every vertex outside `I_j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cover {
    pub colour: usize,
    pub matching: Vec<(Pattern, Pattern)>,
    /// `I_j = {τ : τ_j = *}`.
    pub isolated: Vec<Pattern>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CoverOutcome {
    Covered(Cover),
    Failed { colour: usize, witness: String },
}

/// Builds `H` (pairs whose `Δ` is exactly `{j}`), checks `H ⊆ Γ*_j` and that
/// `I_j` is isolated in `Γ*_j`, and takes alternate edges of each component
/// of `H` (a single edge or an even cycle) as `T_j`.
pub fn cover_check(gamma_star: &ColouredMultigraph, j: usize) -> Result<CoverOutcome> {
    let k = gamma_star.k();
    if j >= k {
        return Err(Error::CoordinateOutOfRange { coord: j, k });
    }
    let m = gamma_star.vertex_count();
    let pats = gamma_star.matching.edges();
    let fail = |witness: String| Ok(CoverOutcome::Failed { colour: j, witness });
    let isolated: Vec<usize> = (0..m).filter(|&i| pats[i].trit(j) == Trit::Star).collect();
    let gj = gamma_star.colour_graph(j);
    if let Some(&i) = isolated.iter().find(|&&i| gj.degree(i) > 0) {
        return fail(format!("{} has '*' at coordinate {} but an edge of that colour", pats[i], j + 1));
    }
    let mut h = SimpleGraph::new(m);
    for a in 0..m {
        for b in a + 1..m {
            if pats[a].delta_mask(&pats[b]) == 1 << j {
                if !gj.has_edge(a, b) {
                    return fail(format!(
                        "pair {} {} differs only at coordinate {} but has no unique edge of that colour",
                        pats[a],
                        pats[b],
                        j + 1
                    ));
                }
                h.add_edge(a, b)?;
            }
        }
    }
    let mut t = Vec::new();
    for comp in h.components() {
        let first = comp.vertices[0];
        if isolated.contains(&first) {
            if comp.len() > 1 {
                return fail(format!("{} is in I_j but lies on H", pats[first]));
            }
            continue;
        }
        match comp.len() {
            1 => return fail(format!("{} is not covered by H", pats[first])),
            2 => t.push((pats[comp.vertices[0]], pats[comp.vertices[1]])),
            len => {
                if len % 2 == 1 || comp.vertices.iter().any(|&v| h.degree(v) != 2) {
                    return fail(format!("the component of H at {} is not an even cycle", pats[first]));
                }
                let mut walk = vec![first];
                let mut prev = usize::MAX;
                let mut cur = first;
                loop {
                    let next = *h.neighbours(cur).iter().find(|&&x| x != prev).expect("degree 2");
                    if next == first {
                        break;
                    }
                    walk.push(next);
                    prev = cur;
                    cur = next;
                }
                for pair in walk.chunks(2) {
                    t.push((pats[pair[0]], pats[pair[1]]));
                }
            }
        }
    }
    t.sort_unstable();
    Ok(CoverOutcome::Covered(Cover {
        colour: j,
        matching: t,
        isolated: isolated.iter().map(|&i| pats[i]).collect(),
    }))
}

/// A colour-preserving map from the edges of `domain` to weight-1 patterns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labelling {
    domain: PerfectMatching,
    image: Vec<Pattern>,
}

impl Labelling {
    /// Requires `c(φ(τ)) = c(τ)` and that the image is a perfect matching.
    pub fn new(domain: PerfectMatching, image: Vec<Pattern>) -> Result<Self> {
        let l = Labelling { domain, image };
        l.validate()?;
        Ok(l)
    }

    pub fn identity(domain: &PerfectMatching) -> Self {
        Labelling {
            domain: domain.clone(),
            image: domain.edges().to_vec(),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.image.len() != self.domain.len() {
            return Err(Error::InvalidArgument(format!(
                "{} images for {} patterns",
                self.image.len(),
                self.domain.len()
            )));
        }
        for (t, p) in self.domain.edges().iter().zip(&self.image) {
            if p.k() != t.k() || p.weight() != 1 || p.star_coordinate() != t.star_coordinate() {
                return Err(Error::Precondition(format!("{t} ↦ {p} does not preserve the '*' coordinate")));
            }
        }
        PerfectMatching::new(self.domain.k(), self.image.clone()).map(|_| ())
    }

    pub fn domain(&self) -> &PerfectMatching {
        &self.domain
    }

    pub fn image(&self) -> &[Pattern] {
        &self.image
    }

    /// `φ(τ)` for the `i`-th domain pattern.
    pub fn apply(&self, i: usize) -> Pattern {
        self.image[i]
    }

    pub fn image_matching(&self) -> PerfectMatching {
        PerfectMatching::new(self.domain.k(), self.image.clone()).expect("validated")
    }
}

/// An edge whose colour lies outside `Δ(φσ, φτ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub left: Pattern,
    pub right: Pattern,
    pub colour: usize,
}

fn bad_under(image: &[Pattern], e: &(usize, usize, usize)) -> bool {
    image[e.0].delta_mask(&image[e.1]) >> e.2 & 1 == 0
}

/// The first edge of `Ψ` violating admissibility, if any.
pub fn is_admissible(phi: &Labelling, psi: &ColouredMultigraph) -> Result<Option<Violation>> {
    if phi.domain != psi.matching {
        return Err(Error::InvalidArgument("labelling and multigraph have different vertex sets".into()));
    }
    Ok(psi.edges.iter().find(|e| bad_under(&phi.image, e)).map(|&(a, b, c)| Violation {
        left: psi.vertex(a),
        right: psi.vertex(b),
        colour: c,
    }))
}

fn flip_image(image: &mut [Pattern], j: usize, component: &[usize]) -> Result<()> {
    for &i in component {
        image[i] = image[i].flip(j)?;
    }
    Ok(())
}

/// `φ'(τ) = φ(τ)^j` on `component` (domain positions), `φ` elsewhere.
pub fn component_flip(phi: &Labelling, j: usize, component: &[usize]) -> Result<Labelling> {
    if let Some(&i) = component.iter().find(|&&i| i >= phi.image.len()) {
        return Err(Error::InvalidArgument(format!("vertex {i} out of range")));
    }
    let mut image = phi.image.clone();
    flip_image(&mut image, j, component)?;
    Labelling::new(phi.domain.clone(), image)
}

/// An odd cycle in `Ψ_j`, as patterns, if one exists.
pub fn detect_mono_odd_cycle(psi: &ColouredMultigraph, j: usize) -> Option<Vec<Pattern>> {
    psi.colour_graph(j)
        .components()
        .into_iter()
        .find_map(|c| c.odd_cycle)
        .map(|cyc| cyc.into_iter().map(|i| psi.vertex(i)).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "failure", rename_all = "snake_case")]
pub enum LabellingFailure {
    /// No admissible labelling can exist.
    OddCycle { colour: usize, cycle: Vec<Pattern> },
    /// An edge has the colour of the '*' coordinate of an endpoint.
    ForbiddenColour { left: Pattern, right: Pattern, colour: usize },
    /// The repair argument broke down; this indicates a bug.
    Critical { message: String },
}

/// One reinstated bad edge and the component flipped to repair it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RepairStep {
    pub edge: (Pattern, Pattern, usize),
    pub flipped: Vec<Pattern>,
}

#[derive(Debug, Clone)]
pub struct LabellingOutcome {
    pub labelling: Labelling,
    pub bad_edges: usize,
    pub repairs: Vec<RepairStep>,
}

/// Starts from the identity, removes the edges that are bad for it and puts
/// them back last-first; whenever a returning edge `{σ, τ}` of colour `j` is
/// bad, flips coordinate `j` on the component of `τ` (the endpoint with the
/// larger pattern) in the colour-`j` graph of edges present so far.
pub fn find_admissible_labelling(phi: &ColouredMultigraph) -> std::result::Result<LabellingOutcome, LabellingFailure> {
    let k = phi.k();
    let pats = phi.matching.edges();
    for &(a, b, c) in &phi.edges {
        if pats[a].trit(c) == Trit::Star || pats[b].trit(c) == Trit::Star {
            return Err(LabellingFailure::ForbiddenColour {
                left: pats[a],
                right: pats[b],
                colour: c,
            });
        }
    }
    for j in 0..k {
        if let Some(cycle) = detect_mono_odd_cycle(phi, j) {
            return Err(LabellingFailure::OddCycle { colour: j, cycle });
        }
    }
    let mut image = pats.to_vec();
    let bad: Vec<(usize, usize, usize)> = phi.edges.iter().filter(|e| bad_under(&image, e)).copied().collect();
    let bad_set: BTreeSet<_> = bad.iter().copied().collect();
    let mut present: Vec<(usize, usize, usize)> = phi.edges.iter().filter(|e| !bad_set.contains(e)).copied().collect();
    let critical = |message: String| LabellingFailure::Critical { message };
    let mut repairs = Vec::new();
    for &e in bad.iter().rev() {
        let (a, b, j) = e;
        if bad_under(&image, &e) {
            let gj = SimpleGraph::from_edges(
                pats.len(),
                present.iter().filter(|f| f.2 == j).map(|f| (f.0, f.1)),
            )
            .expect("endpoints validated");
            let comps = gj.components();
            let comp = comps
                .iter()
                .find(|c| c.vertices.contains(&b))
                .expect("every vertex lies in a component");
            if comp.vertices.contains(&a) {
                return Err(critical(format!(
                    "endpoints {} and {} of a bad edge of colour {} share a component",
                    pats[a],
                    pats[b],
                    j + 1
                )));
            }
            flip_image(&mut image, j, &comp.vertices).map_err(|err| critical(err.to_string()))?;
            repairs.push(RepairStep {
                edge: (pats[a], pats[b], j),
                flipped: comp.vertices.iter().map(|&i| pats[i]).collect(),
            });
        }
        present.push(e);
        if let Some(f) = present.iter().find(|f| bad_under(&image, f)) {
            return Err(critical(format!(
                "edge {} {} of colour {} is bad after reinstating {} {}",
                pats[f.0],
                pats[f.1],
                f.2 + 1,
                pats[a],
                pats[b]
            )));
        }
    }
    let labelling = Labelling::new(phi.matching.clone(), image)
        .map_err(|err| critical(format!("final labelling is invalid: {err}")))?;
    Ok(LabellingOutcome {
        labelling,
        bad_edges: bad.len(),
        repairs,
    })
}

/// A multigraph admissible for a hidden labelling, with the labelling.
#[derive(Debug, Clone)]
pub struct GeneratedInstance {
    pub multigraph: ColouredMultigraph,
    pub hidden: Labelling,
}

/// Draws `ℳ`, a matching `ℳ'` with the same number of edges in each
/// direction and a colour-preserving bijection `φ*: ℳ → ℳ'`, then gives
/// every pair a random non-empty set of colours from `Δ(φ*σ, φ*τ)`.
pub fn generate_admissible_instance<R: Rng>(k: usize, rng: &mut R) -> Result<GeneratedInstance> {
    let all = enumerate_matchings(k)?;
    generate_from(&all, rng)
}

/// As [`generate_admissible_instance`] drawing from a precomputed list of
/// matchings of one dimension.
pub fn generate_from<R: Rng>(all: &[PerfectMatching], rng: &mut R) -> Result<GeneratedInstance> {
    let m = all
        .choose(rng)
        .ok_or_else(|| Error::InvalidArgument("no matchings to draw from".into()))?;
    let k = m.k();
    let counts = |p: &PerfectMatching| {
        let mut c = vec![0usize; k];
        p.edges().iter().for_each(|e| c[e.star_coordinate().expect("weight 1")] += 1);
        c
    };
    let target = counts(m);
    let same: Vec<&PerfectMatching> = all.iter().filter(|p| counts(p) == target).collect();
    let m2 = *same.choose(rng).expect("m itself qualifies");
    let mut image = vec![m.edges()[0]; m.len()];
    for j in 0..k {
        let src: Vec<usize> = (0..m.len()).filter(|&i| m.edges()[i].star_coordinate() == Some(j)).collect();
        let mut dst: Vec<Pattern> = m2.edges().iter().filter(|p| p.star_coordinate() == Some(j)).copied().collect();
        dst.shuffle(rng);
        for (i, p) in src.into_iter().zip(dst) {
            image[i] = p;
        }
    }
    let hidden = Labelling::new(m.clone(), image)?;
    let mut g = ColouredMultigraph::empty(m.clone());
    for a in 0..m.len() {
        for b in a + 1..m.len() {
            let options: Vec<usize> = bits(hidden.image[a].delta_mask(&hidden.image[b])).collect();
            let mask: u32 = rng.gen_range(1u32..(1 << options.len()));
            for (bit, &c) in options.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    g.add_edge(a, b, c)?;
                }
            }
        }
    }
    Ok(GeneratedInstance {
        multigraph: g,
        hidden,
    })
}
