mod common;

use std::collections::VecDeque;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ramsey_cube::colourings::{edit_distance, is_eps_close, recolour_random_edges, structural_no_odd_cycle};
use ramsey_cube::matchings::enumerate_matchings;
use ramsey_cube::{
    BipartitionChoice, CrossChoice, HypercubeColouring, KColouredGraph, Pattern, ProfilePartition, Trit,
};

use common::{brute_has_cycle, random_coloured_graph};

/// Per colour: for every vertex, `Some(parity)` inside a bipartite
/// component of that colour, `None` inside a non-bipartite one, plus the
/// component label.
fn two_colourings(g: &KColouredGraph) -> Vec<Vec<(Option<u8>, usize)>> {
    let n = g.vertex_count();
    (0..g.k())
        .map(|c| {
            let mut adj = vec![Vec::new(); n];
            for (u, v, col) in g.edges() {
                if col == c {
                    adj[u].push(v);
                    adj[v].push(u);
                }
            }
            let mut side = vec![u8::MAX; n];
            let mut comp = vec![usize::MAX; n];
            let mut out = vec![(None, 0); n];
            for s in 0..n {
                if comp[s] != usize::MAX {
                    continue;
                }
                let mut members = vec![s];
                let mut odd = false;
                side[s] = 0;
                comp[s] = s;
                let mut queue = VecDeque::from([s]);
                while let Some(u) = queue.pop_front() {
                    for &w in &adj[u] {
                        if comp[w] == usize::MAX {
                            comp[w] = s;
                            side[w] = 1 - side[u];
                            members.push(w);
                            queue.push_back(w);
                        } else if side[w] == side[u] {
                            odd = true;
                        }
                    }
                }
                for &v in &members {
                    out[v] = (if odd { None } else { Some(side[v]) }, s);
                }
            }
            out
        })
        .collect()
}

fn check_partition(g: &KColouredGraph, p: &ProfilePartition, lowest_side_zero: bool) {
    let oracle = two_colourings(g);
    for (c, per_vertex) in oracle.iter().enumerate() {
        for u in 0..g.vertex_count() {
            let (side_u, comp_u) = per_vertex[u];
            let t = p.class_of(u).trit(c);
            assert_eq!(t == Trit::Star, side_u.is_none());
            if lowest_side_zero && comp_u == u && side_u.is_some() {
                assert_eq!(t, Trit::Zero);
            }
            for v in u + 1..g.vertex_count() {
                let (side_v, comp_v) = per_vertex[v];
                if comp_u == comp_v {
                    if let (Some(a), Some(b)) = (side_u, side_v) {
                        assert_eq!(a == b, t == p.class_of(v).trit(c));
                    }
                }
            }
        }
    }
    p.check_observations(g).unwrap();
    assert_eq!(p.profile().total(), g.vertex_count() as u64);
    assert_eq!(p.profile().counts().iter().sum::<u64>(), g.vertex_count() as u64);
}

#[test]
fn partition_matches_bfs_oracle_on_random_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for t in 0..200u64 {
        let k = 1 + (t % 4) as usize;
        let n = 2 + (t % 17) as usize;
        let density = [0.2, 0.5, 0.9, 1.0][(t % 4) as usize];
        let g = random_coloured_graph(&mut rng, k, n, density);
        let lowest = ProfilePartition::compute(&g, &BipartitionChoice::LowestVertexSideZero).unwrap();
        check_partition(&g, &lowest, true);
        let seeded = ProfilePartition::compute(&g, &BipartitionChoice::Seeded(t)).unwrap();
        check_partition(&g, &seeded, false);
        for v in 0..n {
            assert_eq!(lowest.class_of(v).star_mask(), seeded.class_of(v).star_mask());
        }
    }
}

#[test]
fn hypercube_colouring_shape() {
    for k in 2..=3 {
        for m in enumerate_matchings(k).unwrap() {
            for choice in [CrossChoice::LeastInDelta, CrossChoice::Seeded(3)] {
                let h = HypercubeColouring::build(&m, 4, choice).unwrap();
                let g = &h.graph;
                assert_eq!(g.vertex_count(), (1 << (k - 1)) * 4);
                assert!(g.is_complete());
                for (u, v, c) in g.edges() {
                    let (a, b) = (h.class_of[u], h.class_of[v]);
                    if a == b {
                        assert_eq!(a.star_coordinate(), Some(c));
                    } else {
                        assert!(a.delta_mask(&b) >> c & 1 == 1);
                    }
                }
                let aligned = ProfilePartition::compute(g, &BipartitionChoice::AlignedTo(h.class_of.clone())).unwrap();
                let profile = aligned.profile();
                for p in Pattern::all(k).unwrap() {
                    let expected = if m.contains(&p) { 4 } else { 0 };
                    assert_eq!(profile.get(&p), expected, "{p}");
                }
            }
        }
    }
}

#[test]
fn hypercube_colourings_avoid_c5_by_search() {
    for k in 2..=3 {
        for m in enumerate_matchings(k).unwrap() {
            let h = HypercubeColouring::build(&m, 4, CrossChoice::Seeded(k as u64)).unwrap();
            for c in 0..k {
                assert!(!brute_has_cycle(&h.graph.colour_class(c), 5));
            }
        }
    }
}

#[test]
fn structural_check_for_every_class() {
    for k in 2..=4 {
        for m in enumerate_matchings(k).unwrap() {
            for choice in [CrossChoice::LeastInDelta, CrossChoice::Seeded(9)] {
                let h = HypercubeColouring::build(&m, 4, choice).unwrap();
                assert!(structural_no_odd_cycle(&h.graph, 5).unwrap().passes);
                assert!(!structural_no_odd_cycle(&h.graph, 3).unwrap().passes);
            }
        }
    }
}

#[test]
fn edit_distance_examples() {
    let mut g = KColouredGraph::new(2, 3).unwrap();
    g.set_edge(0, 1, 0).unwrap();
    g.set_edge(1, 2, 1).unwrap();
    let mut h = g.clone();
    h.set_edge(0, 1, 1).unwrap();
    h.remove_edge(1, 2).unwrap();
    assert_eq!(edit_distance(&g, &h).unwrap(), vec![1, 2]);
    assert!(is_eps_close(&g, &h, 2.0 / 9.0).unwrap());
    assert!(!is_eps_close(&g, &h, 1.9 / 9.0).unwrap());
    let small = KColouredGraph::new(2, 2).unwrap();
    assert_eq!(edit_distance(&g, &small).unwrap(), vec![1, 1]);
    assert!(edit_distance(&small, &g).is_err());
}

proptest! {
    #[test]
    fn recolouring_moves_each_edge_once(seed in 0u64..1000, frac in 0.0f64..=1.0, k in 2usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_coloured_graph(&mut rng, k, 12, 0.7);
        let h = recolour_random_edges(&g, frac, seed).unwrap();
        let expected = (frac * g.edge_count() as f64).round() as u64;
        prop_assert_eq!(edit_distance(&g, &h).unwrap().iter().sum::<u64>(), 2 * expected);
        prop_assert_eq!(h.edge_count(), g.edge_count());
    }

    #[test]
    fn profile_sums_to_vertex_count(seed in 0u64..1000, k in 1usize..=4, n in 1usize..=20) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_coloured_graph(&mut rng, k, n, 0.6);
        let p = ProfilePartition::compute(&g, &BipartitionChoice::Seeded(seed)).unwrap();
        prop_assert_eq!(p.profile().total(), n as u64);
        prop_assert!(p.check_observations(&g).is_ok());
    }
}
