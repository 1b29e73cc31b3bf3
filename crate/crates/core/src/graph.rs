//! Plain undirected graphs with the component and 2-colouring routines
//! shared by the colouring and search modules.

use std::collections::VecDeque;

use crate::error::{Error, Result};

/// A simple undirected graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    n: usize,
    adj: Vec<Vec<usize>>,
    matrix: Vec<bool>,
    m: usize,
}

/// One connected component together with its 2-colouring, if any.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    /// Vertices in increasing order.
    pub vertices: Vec<usize>,
    /// BFS side of each entry of `vertices`; the least vertex is on side 0.
    /// `None` when the component is not bipartite.
    pub sides: Option<Vec<u8>>,
    /// An odd cycle witnessing non-bipartiteness.
    pub odd_cycle: Option<Vec<usize>>,
    /// Number of edges inside the component.
    pub edge_count: usize,
}

impl Component {
    pub fn is_bipartite(&self) -> bool {
        self.sides.is_some()
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Whether every pair of vertices is adjacent.
    pub fn is_complete(&self) -> bool {
        let v = self.vertices.len();
        self.edge_count == v * v.saturating_sub(1) / 2
    }
}

impl SimpleGraph {
    pub fn new(n: usize) -> Self {
        SimpleGraph {
            n,
            adj: vec![Vec::new(); n],
            matrix: vec![false; n * n],
            m: 0,
        }
    }

    pub fn from_edges<I: IntoIterator<Item = (usize, usize)>>(n: usize, edges: I) -> Result<Self> {
        let mut g = SimpleGraph::new(n);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Adds `{u, v}`; returns `false` if it was already present.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<bool> {
        if u >= self.n || v >= self.n {
            return Err(Error::InvalidGraph(format!(
                "edge ({u}, {v}) outside vertex range 0..{}",
                self.n
            )));
        }
        if u == v {
            return Err(Error::InvalidGraph(format!("self-loop at {u}")));
        }
        if self.matrix[u * self.n + v] {
            return Ok(false);
        }
        self.matrix[u * self.n + v] = true;
        self.matrix[v * self.n + u] = true;
        insert_sorted(&mut self.adj[u], v);
        insert_sorted(&mut self.adj[v], u);
        self.m += 1;
        Ok(true)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.matrix[u * self.n + v]
    }

    /// Neighbours of `v` in increasing order.
    pub fn neighbours(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            self.adj[u]
                .iter()
                .copied()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    /// The subgraph induced on `vertices`, relabelled `0..vertices.len()`
    /// in the given order.
    pub fn induced(&self, vertices: &[usize]) -> SimpleGraph {
        let mut g = SimpleGraph::new(vertices.len());
        for (a, &u) in vertices.iter().enumerate() {
            for (b, &v) in vertices.iter().enumerate().skip(a + 1) {
                if self.has_edge(u, v) {
                    g.add_edge(a, b).expect("indices in range");
                }
            }
        }
        g
    }

    /// Whether `cycle` lists distinct vertices forming a closed walk.
    pub fn is_cycle(&self, cycle: &[usize]) -> bool {
        let l = cycle.len();
        if l < 3 {
            return false;
        }
        let mut seen = vec![false; self.n];
        for &v in cycle {
            if v >= self.n || seen[v] {
                return false;
            }
            seen[v] = true;
        }
        (0..l).all(|i| self.has_edge(cycle[i], cycle[(i + 1) % l]))
    }

    /// Connected components ordered by least vertex, each 2-coloured by BFS
    /// from its least vertex. Isolated vertices are bipartite components.
    pub fn components(&self) -> Vec<Component> {
        let mut comp_of = vec![usize::MAX; self.n];
        let mut side = vec![0u8; self.n];
        let mut parent = vec![usize::MAX; self.n];
        let mut depth = vec![0usize; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if comp_of[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut vertices = vec![s];
            let mut conflict: Option<(usize, usize)> = None;
            let mut twice_edges = 0;
            comp_of[s] = id;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &v in &self.adj[u] {
                    twice_edges += 1;
                    if comp_of[v] == usize::MAX {
                        comp_of[v] = id;
                        side[v] = side[u] ^ 1;
                        parent[v] = u;
                        depth[v] = depth[u] + 1;
                        vertices.push(v);
                        queue.push_back(v);
                    } else if side[v] == side[u] && conflict.is_none() {
                        conflict = Some((u, v));
                    }
                }
            }
            vertices.sort_unstable();
            let (sides, odd_cycle) = match conflict {
                None => (Some(vertices.iter().map(|&v| side[v]).collect()), None),
                Some((u, v)) => (None, Some(tree_cycle(u, v, &parent, &depth))),
            };
            out.push(Component {
                vertices,
                sides,
                odd_cycle,
                edge_count: twice_edges / 2,
            });
        }
        out
    }

    pub fn is_bipartite(&self) -> bool {
        self.components().iter().all(Component::is_bipartite)
    }
}

fn insert_sorted(list: &mut Vec<usize>, v: usize) {
    let pos = list.partition_point(|&x| x < v);
    list.insert(pos, v);
}

/// Closes the tree paths from `u` and `v` to their common ancestor with the
/// edge `{u, v}`.
fn tree_cycle(u: usize, v: usize, parent: &[usize], depth: &[usize]) -> Vec<usize> {
    let (mut a, mut b) = (u, v);
    let mut left = vec![a];
    let mut right = vec![b];
    while depth[a] > depth[b] {
        a = parent[a];
        left.push(a);
    }
    while depth[b] > depth[a] {
        b = parent[b];
        right.push(b);
    }
    while a != b {
        a = parent[a];
        b = parent[b];
        left.push(a);
        right.push(b);
    }
    right.pop();
    right.reverse();
    left.extend(right);
    left
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_plus_path() {
        let g = SimpleGraph::from_edges(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5)]).unwrap();
        let comps = g.components();
        assert_eq!(comps.len(), 2);
        assert!(!comps[0].is_bipartite());
        let cyc = comps[0].odd_cycle.clone().unwrap();
        assert_eq!(cyc.len() % 2, 1);
        assert!(g.is_cycle(&cyc));
        assert!(comps[0].is_complete());
        assert!(comps[1].is_bipartite());
        assert_eq!(comps[1].sides.as_deref(), Some(&[0, 1, 0][..]));
    }

    #[test]
    fn isolated_vertices_are_components() {
        let g = SimpleGraph::new(3);
        let comps = g.components();
        assert_eq!(comps.len(), 3);
        assert!(comps.iter().all(|c| c.is_bipartite() && c.len() == 1));
    }

    #[test]
    fn odd_cycle_extraction_on_c7() {
        let g = SimpleGraph::from_edges(7, (0..7).map(|i| (i, (i + 1) % 7))).unwrap();
        let c = &g.components()[0];
        let cyc = c.odd_cycle.as_ref().unwrap();
        assert_eq!(cyc.len(), 7);
        assert!(g.is_cycle(cyc));
    }

    #[test]
    fn rejects_loops_and_out_of_range() {
        let mut g = SimpleGraph::new(2);
        assert!(g.add_edge(0, 0).is_err());
        assert!(g.add_edge(0, 2).is_err());
        assert!(g.add_edge(0, 1).unwrap());
        assert!(!g.add_edge(1, 0).unwrap());
        assert_eq!(g.edge_count(), 1);
    }
}
