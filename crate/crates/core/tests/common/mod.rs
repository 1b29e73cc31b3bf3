#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use rand::Rng;
use ramsey_cube::graph::SimpleGraph;
use ramsey_cube::{KColouredGraph, Pattern};

/// Number of perfect matchings of `Q_k` by memoised recursion over the set
/// of still-uncovered vertices.
pub fn count_cube_matchings_dp(k: usize) -> u64 {
    fn go(mask: u64, k: usize, memo: &mut HashMap<u64, u64>) -> u64 {
        if mask == 0 {
            return 1;
        }
        if let Some(&v) = memo.get(&mask) {
            return v;
        }
        let v = mask.trailing_zeros();
        let mut total = 0;
        for j in 0..k {
            let u = v ^ (1 << j);
            if mask >> u & 1 == 1 {
                total += go(mask & !(1 << v) & !(1 << u), k, memo);
            }
        }
        memo.insert(mask, total);
        total
    }
    let n = 1u32 << k;
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    go(full, k, &mut HashMap::new())
}

/// Perfect matchings of `Q_k` as sets of vertex pairs, built by always
/// covering the highest uncovered vertex (the opposite order to the library).
pub fn cube_matchings_descending(k: usize) -> BTreeSet<Vec<(u32, u32)>> {
    fn go(k: usize, covered: &mut Vec<bool>, cur: &mut Vec<(u32, u32)>, out: &mut BTreeSet<Vec<(u32, u32)>>) {
        let Some(v) = (0..covered.len()).rev().find(|&v| !covered[v]) else {
            let mut m = cur.clone();
            m.sort_unstable();
            out.insert(m);
            return;
        };
        covered[v] = true;
        for j in (0..k).rev() {
            let u = v ^ (1 << j);
            if !covered[u] {
                covered[u] = true;
                cur.push((u.min(v) as u32, u.max(v) as u32));
                go(k, covered, cur, out);
                cur.pop();
                covered[u] = false;
            }
        }
        covered[v] = false;
    }
    let mut out = BTreeSet::new();
    go(k, &mut vec![false; 1 << k], &mut Vec::new(), &mut out);
    out
}

/// Vertex pairs of a weight-1 pattern, via its vertex list.
pub fn pattern_pair(p: &Pattern) -> (u32, u32) {
    let mut v = p.vertex_bits();
    v.sort_unstable();
    assert_eq!(v.len(), 2);
    (v[0], v[1])
}

/// Maximum matching size by trying every edge subset recursively.
pub fn brute_max_matching(g: &SimpleGraph) -> usize {
    fn go(edges: &[(usize, usize)], used: &mut Vec<bool>) -> usize {
        let Some((&(u, v), rest)) = edges.split_first() else {
            return 0;
        };
        let skip = go(rest, used);
        if used[u] || used[v] {
            return skip;
        }
        used[u] = true;
        used[v] = true;
        let take = 1 + go(rest, used);
        used[u] = false;
        used[v] = false;
        skip.max(take)
    }
    let edges: Vec<(usize, usize)> = g.edges().collect();
    go(&edges, &mut vec![false; g.vertex_count()])
}

/// Whether `g` has a cycle of exactly `len` vertices, by trying every
/// ordered vertex sequence.
pub fn brute_has_cycle(g: &SimpleGraph, len: usize) -> bool {
    fn extend(g: &SimpleGraph, path: &mut Vec<usize>, used: &mut Vec<bool>, len: usize) -> bool {
        let last = *path.last().unwrap();
        if path.len() == len {
            return g.has_edge(last, path[0]);
        }
        for v in 0..g.vertex_count() {
            if !used[v] && v > path[0] && g.has_edge(last, v) {
                used[v] = true;
                path.push(v);
                if extend(g, path, used, len) {
                    return true;
                }
                path.pop();
                used[v] = false;
            }
        }
        false
    }
    let n = g.vertex_count();
    (0..n).any(|s| {
        let mut used = vec![false; n];
        used[s] = true;
        extend(g, &mut vec![s], &mut used, len)
    })
}

/// Longest cycle length (0 if acyclic) by brute force.
pub fn brute_circumference(g: &SimpleGraph) -> usize {
    (3..=g.vertex_count()).rev().find(|&l| brute_has_cycle(g, l)).unwrap_or(0)
}

/// Whether `cycle` is a cycle of `g` with distinct vertices.
pub fn is_cycle_of(g: &SimpleGraph, cycle: &[usize]) -> bool {
    let distinct: BTreeSet<_> = cycle.iter().collect();
    cycle.len() >= 3
        && distinct.len() == cycle.len()
        && (0..cycle.len()).all(|i| g.has_edge(cycle[i], cycle[(i + 1) % cycle.len()]))
}

pub fn random_coloured_graph<R: Rng>(rng: &mut R, k: usize, n: usize, density: f64) -> KColouredGraph {
    let mut g = KColouredGraph::new(k, n).unwrap();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(density) {
                g.set_edge(u, v, rng.gen_range(0..k)).unwrap();
            }
        }
    }
    g
}

pub fn random_simple_graph<R: Rng>(rng: &mut R, n: usize, p: f64) -> SimpleGraph {
    let mut g = SimpleGraph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g
}

/// The simple graph on `0..n` whose edges are the set bits of `code` in
/// the order `(0,1), (0,2), ..., (n-2,n-1)`.
pub fn graph_from_code(n: usize, code: u32) -> SimpleGraph {
    let mut g = SimpleGraph::new(n);
    let mut bit = 0;
    for u in 0..n {
        for v in u + 1..n {
            if code >> bit & 1 == 1 {
                g.add_edge(u, v).unwrap();
            }
            bit += 1;
        }
    }
    g
}

/// Largest `Σ x_i` subject to `Σ (x_i^2 - α_i x_i) <= 0` and `x_i <= 1` for
/// `i < ell`, by trying every set `S` of caps held at 1: the free variables
/// then maximise a linear function over a ball, and the candidate counts
/// only if it respects the remaining caps.
pub fn kkt_active_set_max(alpha: &[i64], ell: usize) -> (f64, Vec<f64>) {
    let m = alpha.len();
    let mut best = (f64::NEG_INFINITY, Vec::new());
    for s in 0u32..1 << ell {
        let free: Vec<usize> = (0..m).filter(|&i| i >= ell || s >> i & 1 == 0).collect();
        let sq: f64 = free.iter().map(|&i| (alpha[i] * alpha[i]) as f64).sum();
        let step = if free.is_empty() { 0.0 } else { 0.5 * (sq / free.len() as f64).sqrt() };
        let mut x = vec![1.0; m];
        for &i in &free {
            x[i] = 0.5 * alpha[i] as f64 + step;
        }
        if (0..ell).any(|i| x[i] > 1.0 + 1e-12) {
            continue;
        }
        let total: f64 = x.iter().sum();
        if total > best.0 {
            best = (total, x);
        }
    }
    best
}

/// Random `(α, ell)` with `m <= 6`, `α_i <= 5` and `α_i = 1` for `i < ell`.
pub fn random_kkt_alpha<R: Rng>(rng: &mut R) -> (Vec<i64>, usize) {
    let m = rng.gen_range(1..=6);
    let ell = rng.gen_range(0..=m);
    let alpha = (0..m)
        .map(|i| if i < ell { 1 } else { rng.gen_range(-3..=5) })
        .collect();
    (alpha, ell)
}

/// `(holds, equality)` for `Σα + sqrt(m Σα²) <= Σ 2^α` in integers: with
/// `D = Σ 2^α - Σα >= 0` the inequality reads `m Σα² <= D²`.
pub fn shift_oracle(alpha: &[u32]) -> (bool, bool) {
    let m = alpha.len() as i128;
    let sum: i128 = alpha.iter().map(|&a| a as i128).sum();
    let sq: i128 = alpha.iter().map(|&a| (a as i128).pow(2)).sum();
    let pow: i128 = alpha.iter().map(|&a| 1i128 << a).sum();
    let d = pow - sum;
    if d < 0 {
        return (false, false);
    }
    (m * sq <= d * d, m * sq == d * d)
}

/// Number of partitions of `{0,1}^k` into subcubes of dimension between 1
/// and `max_weight`, covering the highest uncovered vertex first.
pub fn count_decompositions_desc(k: usize, max_weight: usize) -> usize {
    fn go(k: usize, max_weight: usize, covered: &mut Vec<bool>) -> usize {
        let Some(v) = (0..covered.len()).rev().find(|&v| !covered[v]) else {
            return 1;
        };
        let mut total = 0;
        for stars in 1u32..1 << k {
            if stars.count_ones() as usize > max_weight {
                continue;
            }
            let verts: Vec<usize> = (0..1usize << k)
                .filter(|&u| (u ^ v) as u32 & !stars == 0)
                .collect();
            if verts.iter().all(|&u| !covered[u]) {
                verts.iter().for_each(|&u| covered[u] = true);
                total += go(k, max_weight, covered);
                verts.iter().for_each(|&u| covered[u] = false);
            }
        }
        total
    }
    go(k, max_weight, &mut vec![false; 1 << k])
}

/// A random member of `X(γ)`: a random pairwise-compatible support of
/// patterns of weight at least 1, random directions, scaled by a random
/// fraction of the largest feasible factor (found by bisection).
pub fn random_member<R: Rng>(rng: &mut R, k: usize, gamma: f64) -> ramsey_cube::ProfileVector<f64> {
    use ramsey_cube::optimizer::is_member;
    use ramsey_cube::ProfileVector;
    let mut pats: Vec<Pattern> = Pattern::all(k).unwrap().into_iter().filter(|p| p.weight() >= 1).collect();
    for i in (1..pats.len()).rev() {
        pats.swap(i, rng.gen_range(0..=i));
    }
    let want = rng.gen_range(1..=pats.len().min(2 * (1 << k)));
    let mut chosen: Vec<Pattern> = Vec::new();
    for p in pats {
        if chosen.len() < want && chosen.iter().all(|q| q.is_compatible_with(&p)) {
            chosen.push(p);
        }
    }
    let dir = ProfileVector::from_entries(k, chosen.iter().map(|p| (*p, rng.gen_range(0.05..1.0)))).unwrap();
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while is_member(&dir.scale(&hi), &gamma) {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if is_member(&dir.scale(&mid), &gamma) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    dir.scale(&(lo * rng.gen_range(0.3..=1.0)))
}
