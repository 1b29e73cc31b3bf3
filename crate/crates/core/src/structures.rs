//! Independent combinatorial searches: cycles of a given length, maximum
//! matchings in general graphs, odd connected matchings and the
//! Erdős–Gallai edge bound.

use std::collections::VecDeque;

use serde::Serialize;

use crate::colourings::KColouredGraph;
use crate::error::{Error, Result};
use crate::graph::SimpleGraph;

/// Default number of DFS expansions before a search gives up.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Environment variable overriding [`DEFAULT_BUDGET`].
pub const BUDGET_ENV: &str = "RAMSEY_CUBE_BUDGET";

/// [`DEFAULT_BUDGET`] unless overridden by `RAMSEY_CUBE_BUDGET`.
pub fn budget_from_env() -> u64 {
    std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

/// Result of an exhaustive search under a budget.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum CycleSearch {
    Found { cycle: Vec<usize> },
    Absent { expansions: u64 },
    Indefinite { budget: u64 },
}

impl CycleSearch {
    pub fn is_found(&self) -> bool {
        matches!(self, CycleSearch::Found { .. })
    }

    pub fn is_absent(&self) -> bool {
        matches!(self, CycleSearch::Absent { .. })
    }
}

/// Searches `g` for a cycle of exactly `length` vertices.
///
/// Each cycle is rooted at its least vertex `s` and grown as a path through
/// vertices larger than `s`; a branch is cut when the remaining steps cannot
/// return to `s`.
pub fn find_cycle_in(g: &SimpleGraph, length: usize, budget: u64) -> Result<CycleSearch> {
    if length < 3 {
        return Err(Error::InvalidArgument(format!(
            "cycle length must be at least 3, got {length}"
        )));
    }
    let n = g.vertex_count();
    let mut expansions = 0u64;
    let mut on_path = vec![false; n];
    let mut dist = vec![usize::MAX; n];
    for s in 0..n {
        if n - s < length {
            break;
        }
        distances_from(g, s, &mut dist);
        let mut path = vec![s];
        on_path[s] = true;
        let r = extend(g, length, s, &dist, &mut path, &mut on_path, &mut expansions, budget);
        on_path[s] = false;
        match r {
            Step::Found => return Ok(CycleSearch::Found { cycle: path }),
            Step::OutOfBudget => return Ok(CycleSearch::Indefinite { budget }),
            Step::Exhausted => {}
        }
    }
    Ok(CycleSearch::Absent { expansions })
}

enum Step {
    Found,
    Exhausted,
    OutOfBudget,
}

/// BFS distances from `s` using only vertices `>= s`.
fn distances_from(g: &SimpleGraph, s: usize, dist: &mut [usize]) {
    dist.fill(usize::MAX);
    dist[s] = 0;
    let mut q = VecDeque::from([s]);
    while let Some(u) = q.pop_front() {
        for &v in g.neighbours(u) {
            if v > s && dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                q.push_back(v);
            }
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn extend(
    g: &SimpleGraph,
    length: usize,
    s: usize,
    dist: &[usize],
    path: &mut Vec<usize>,
    on_path: &mut [bool],
    expansions: &mut u64,
    budget: u64,
) -> Step {
    let last = *path.last().expect("path starts at s");
    if path.len() == length {
        return if g.has_edge(last, s) {
            Step::Found
        } else {
            Step::Exhausted
        };
    }
    let remaining = length - path.len();
    for &v in g.neighbours(last) {
        if v <= s || on_path[v] || dist[v] > remaining {
            continue;
        }
        *expansions += 1;
        if *expansions > budget {
            return Step::OutOfBudget;
        }
        path.push(v);
        on_path[v] = true;
        match extend(g, length, s, dist, path, on_path, expansions, budget) {
            Step::Exhausted => {}
            other => return other,
        }
        on_path[v] = false;
        path.pop();
    }
    Step::Exhausted
}

/// Searches colour class `colour` of `g` for a cycle of `length` vertices.
pub fn find_cycle(g: &KColouredGraph, colour: usize, length: usize, budget: u64) -> Result<CycleSearch> {
    if colour >= g.k() {
        return Err(Error::InvalidArgument(format!(
            "colour {colour} outside 0..{}",
            g.k()
        )));
    }
    find_cycle_in(&g.colour_class(colour), length, budget)
}

/// Maximum matching of a general graph by Edmonds' blossom algorithm.
/// Returns `mate[v]` for every vertex.
pub fn maximum_matching(g: &SimpleGraph) -> Vec<Option<usize>> {
    let n = g.vertex_count();
    let mut mate: Vec<Option<usize>> = vec![None; n];
    // Greedy start keeps the number of augmentations small.
    for u in 0..n {
        if mate[u].is_none() {
            if let Some(&v) = g.neighbours(u).iter().find(|&&v| mate[v].is_none()) {
                mate[u] = Some(v);
                mate[v] = Some(u);
            }
        }
    }
    let mut b = Blossom::new(n);
    for root in 0..n {
        if mate[root].is_none() {
            if let Some(end) = b.find_path(g, &mate, root) {
                // Flip the alternating path ending at `end`.
                let mut v = Some(end);
                while let Some(x) = v {
                    let pv = b.parent[x].expect("path vertex has a parent");
                    let next = mate[pv];
                    mate[x] = Some(pv);
                    mate[pv] = Some(x);
                    v = next;
                }
            }
        }
    }
    mate
}

struct Blossom {
    parent: Vec<Option<usize>>,
    base: Vec<usize>,
    used: Vec<bool>,
    in_blossom: Vec<bool>,
    queue: VecDeque<usize>,
}

impl Blossom {
    fn new(n: usize) -> Self {
        Blossom {
            parent: vec![None; n],
            base: (0..n).collect(),
            used: vec![false; n],
            in_blossom: vec![false; n],
            queue: VecDeque::new(),
        }
    }

    fn lca(&self, mate: &[Option<usize>], mut a: usize, mut b: usize) -> usize {
        let mut seen = vec![false; self.base.len()];
        loop {
            a = self.base[a];
            seen[a] = true;
            match mate[a] {
                None => break,
                Some(m) => a = self.parent[m].expect("outer vertex has a parent"),
            }
        }
        loop {
            b = self.base[b];
            if seen[b] {
                return b;
            }
            b = self.parent[mate[b].expect("inner path")].expect("outer vertex has a parent");
        }
    }

    fn mark_path(&mut self, mate: &[Option<usize>], mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            let m = mate[v].expect("blossom path is matched");
            self.in_blossom[self.base[v]] = true;
            self.in_blossom[self.base[m]] = true;
            self.parent[v] = Some(child);
            child = m;
            v = self.parent[m].expect("outer vertex has a parent");
        }
    }

    fn find_path(&mut self, g: &SimpleGraph, mate: &[Option<usize>], root: usize) -> Option<usize> {
        let n = g.vertex_count();
        self.used.fill(false);
        self.parent.fill(None);
        for (i, b) in self.base.iter_mut().enumerate() {
            *b = i;
        }
        self.queue.clear();
        self.used[root] = true;
        self.queue.push_back(root);
        while let Some(v) = self.queue.pop_front() {
            for &to in g.neighbours(v) {
                if self.base[v] == self.base[to] || mate[v] == Some(to) {
                    continue;
                }
                if to == root || mate[to].is_some_and(|m| self.parent[m].is_some()) {
                    let cur = self.lca(mate, v, to);
                    self.in_blossom.fill(false);
                    self.mark_path(mate, v, cur, to);
                    self.mark_path(mate, to, cur, v);
                    for i in 0..n {
                        if self.in_blossom[self.base[i]] {
                            self.base[i] = cur;
                            if !self.used[i] {
                                self.used[i] = true;
                                self.queue.push_back(i);
                            }
                        }
                    }
                } else if self.parent[to].is_none() {
                    self.parent[to] = Some(v);
                    match mate[to] {
                        None => return Some(to),
                        Some(m) => {
                            self.used[m] = true;
                            self.queue.push_back(m);
                        }
                    }
                }
            }
        }
        None
    }
}

/// Number of edges in a maximum matching.
pub fn maximum_matching_size(g: &SimpleGraph) -> usize {
    maximum_matching(g).iter().filter(|m| m.is_some()).count() / 2
}

/// One component of a colour class.
#[derive(Debug, Clone, Serialize)]
pub struct ComponentMatching {
    pub vertices: usize,
    pub bipartite: bool,
    pub matching_size: usize,
    /// `2 * matching_size`.
    pub order: usize,
    /// The least vertex, identifying the component.
    pub least_vertex: usize,
}

/// Connected matchings of one colour class.
#[derive(Debug, Clone, Serialize)]
pub struct ConnectedMatchingReport {
    /// 0-based colour.
    pub colour: usize,
    /// Components with at least one edge, by least vertex.
    pub components: Vec<ComponentMatching>,
    /// Largest order over non-bipartite components; 0 if there are none.
    pub largest_odd_order: usize,
    /// Largest order over all components.
    pub largest_order: usize,
}

pub fn connected_matchings_in(g: &SimpleGraph, colour: usize) -> ConnectedMatchingReport {
    let mut components = Vec::new();
    for c in g.components() {
        if c.edge_count == 0 {
            continue;
        }
        let sub = g.induced(&c.vertices);
        let size = maximum_matching_size(&sub);
        components.push(ComponentMatching {
            vertices: c.len(),
            bipartite: c.is_bipartite(),
            matching_size: size,
            order: 2 * size,
            least_vertex: c.vertices[0],
        });
    }
    let largest_odd_order = components
        .iter()
        .filter(|c| !c.bipartite)
        .map(|c| c.order)
        .max()
        .unwrap_or(0);
    let largest_order = components.iter().map(|c| c.order).max().unwrap_or(0);
    ConnectedMatchingReport {
        colour,
        components,
        largest_odd_order,
        largest_order,
    }
}

/// Connected matchings of colour class `colour` of `g`.
pub fn largest_odd_connected_matching(g: &KColouredGraph, colour: usize) -> Result<ConnectedMatchingReport> {
    if colour >= g.k() {
        return Err(Error::InvalidArgument(format!(
            "colour {colour} outside 0..{}",
            g.k()
        )));
    }
    Ok(connected_matchings_in(&g.colour_class(colour), colour))
}

/// Longest cycle of `g`, by exhaustive search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Circumference {
    /// `length` is 0 for a forest.
    Exact { length: usize, cycle: Vec<usize> },
    Indefinite { budget: u64 },
}

pub fn circumference(g: &SimpleGraph, budget: u64) -> Circumference {
    let n = g.vertex_count();
    let mut best: Vec<usize> = Vec::new();
    let mut expansions = 0u64;
    let mut on_path = vec![false; n];
    for s in 0..n {
        if n - s <= best.len() {
            break;
        }
        let mut path = vec![s];
        on_path[s] = true;
        let ok = longest(g, s, &mut path, &mut on_path, &mut best, &mut expansions, budget);
        on_path[s] = false;
        if !ok {
            return Circumference::Indefinite { budget };
        }
    }
    Circumference::Exact {
        length: best.len(),
        cycle: best,
    }
}

fn longest(
    g: &SimpleGraph,
    s: usize,
    path: &mut Vec<usize>,
    on_path: &mut [bool],
    best: &mut Vec<usize>,
    expansions: &mut u64,
    budget: u64,
) -> bool {
    let last = *path.last().expect("non-empty path");
    if path.len() >= 3 && path.len() > best.len() && g.has_edge(last, s) {
        best.clone_from(path);
    }
    for &v in g.neighbours(last) {
        if v <= s || on_path[v] {
            continue;
        }
        *expansions += 1;
        if *expansions > budget {
            return false;
        }
        path.push(v);
        on_path[v] = true;
        let ok = longest(g, s, path, on_path, best, expansions, budget);
        on_path[v] = false;
        path.pop();
        if !ok {
            return false;
        }
    }
    true
}

/// Outcome of checking `e(G) <= m (v(G) - 1) / 2` against the circumference.
#[derive(Debug, Clone, Serialize)]
pub struct ErdosGallaiReport {
    pub m: usize,
    pub vertices: usize,
    pub edges: usize,
    pub circumference: usize,
    pub longest_cycle: Vec<usize>,
    /// Whether the circumference is at most `m`.
    pub applicable: bool,
    /// `e(G) <= m (v(G) - 1) / 2`; meaningful only when applicable.
    pub bound_holds: bool,
}

impl ErdosGallaiReport {
    /// True unless the circumference is at most `m` and the edge bound fails.
    pub fn consistent(&self) -> bool {
        !self.applicable || self.bound_holds
    }
}

pub fn erdos_gallai_check(g: &SimpleGraph, m: usize, budget: u64) -> Result<ErdosGallaiReport> {
    if m < 3 {
        return Err(Error::InvalidArgument(format!("m must be at least 3, got {m}")));
    }
    let (length, cycle) = match circumference(g, budget) {
        Circumference::Exact { length, cycle } => (length, cycle),
        Circumference::Indefinite { budget } => return Err(Error::BudgetExhausted { budget }),
    };
    let v = g.vertex_count();
    let e = g.edge_count();
    Ok(ErdosGallaiReport {
        m,
        vertices: v,
        edges: e,
        circumference: length,
        longest_cycle: cycle,
        applicable: length <= m,
        bound_holds: 2 * e <= m * v.saturating_sub(1),
    })
}
