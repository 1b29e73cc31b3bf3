use std::collections::BTreeSet;

use proptest::prelude::*;
use ramsey_cube::{Pattern, PatternSet};

fn vertex_set(p: &Pattern) -> BTreeSet<u32> {
    (0..1u32 << p.k()).filter(|&v| p.contains_vertex(v)).collect()
}

fn arb_pattern(k: usize) -> impl Strategy<Value = Pattern> {
    (0..3usize.pow(k as u32)).prop_map(move |i| Pattern::from_index(k, i).unwrap())
}

fn arb_pair() -> impl Strategy<Value = (Pattern, Pattern)> {
    (1..=6usize).prop_flat_map(|k| (arb_pattern(k), arb_pattern(k)))
}

#[test]
fn all_patterns_are_sorted_and_indexed() {
    for k in 1..=5 {
        let all = Pattern::all(k).unwrap();
        assert_eq!(all.len(), 3usize.pow(k as u32));
        for (i, p) in all.iter().enumerate() {
            assert_eq!(p.index(), i);
            assert_eq!(Pattern::from_index(k, i).unwrap(), *p);
        }
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }
}

#[test]
fn subcube_relations_exhaustive_small_k() {
    for k in 1..=3 {
        let all = Pattern::all(k).unwrap();
        for s in &all {
            assert_eq!(vertex_set(s).len(), 1 << s.weight());
            for t in &all {
                let (a, b) = (vertex_set(s), vertex_set(t));
                let common = a.intersection(&b).count();
                assert_eq!(s.is_distinguishable_from(t), common == 0, "{s} {t}");
                if !s.is_distinguishable_from(t) {
                    let shared = (s.star_mask() & t.star_mask()).count_ones();
                    assert_eq!(common, 1 << shared, "{s} {t}");
                }
                assert_eq!(!s.is_compatible_with(t), common == 1, "{s} {t}");
                assert_eq!(s.is_subcube_of(t), a.is_subset(&b), "{s} {t}");
                let delta = s.delta_mask(t);
                let by_trits = (0..k)
                    .filter(|&j| {
                        use ramsey_cube::Trit::*;
                        matches!((s.trit(j), t.trit(j)), (Zero, One) | (One, Zero))
                    })
                    .fold(0u32, |m, j| m | 1 << j);
                assert_eq!(delta, by_trits, "{s} {t}");
            }
        }
    }
}

#[test]
fn decompositions_of_small_cubes() {
    let edges = PatternSet::from_text("00*\n01*\n1*0\n1*1").unwrap();
    assert!(edges.is_decomposition());
    let overlap = PatternSet::from_text("0**\n*00\n1*1\n110").unwrap();
    assert!(!overlap.is_decomposition());
    let gap = PatternSet::from_text("0**\n1*0").unwrap();
    assert!(!gap.is_decomposition());
}

proptest! {
    #[test]
    fn index_roundtrip(p in (1..=8usize).prop_flat_map(arb_pattern)) {
        prop_assert_eq!(Pattern::from_index(p.k(), p.index()).unwrap(), p);
        prop_assert_eq!(p.to_string().parse::<Pattern>().unwrap(), p);
    }

    #[test]
    fn relations_are_symmetric((s, t) in arb_pair()) {
        prop_assert_eq!(s.is_distinguishable_from(&t), t.is_distinguishable_from(&s));
        prop_assert_eq!(s.is_compatible_with(&t), t.is_compatible_with(&s));
        prop_assert_eq!(s.delta_mask(&t), t.delta_mask(&s));
    }

    #[test]
    fn compatible_means_distinguishable_or_shared_star((s, t) in arb_pair()) {
        let shared = s.star_mask() & t.star_mask() != 0;
        prop_assert_eq!(s.is_compatible_with(&t), s.is_distinguishable_from(&t) || shared);
    }

    #[test]
    fn distinguishable_means_disjoint((s, t) in arb_pair()) {
        let a = vertex_set(&s);
        let b = vertex_set(&t);
        prop_assert_eq!(s.is_distinguishable_from(&t), a.is_disjoint(&b));
        if !s.is_compatible_with(&t) {
            prop_assert_eq!(a.intersection(&b).count(), 1);
        }
    }

    #[test]
    fn lexicographic_order_matches_index((s, t) in arb_pair()) {
        prop_assert_eq!(s.cmp(&t), s.index().cmp(&t.index()));
        let key = |p: &Pattern| p.to_string().replace('*', "2");
        prop_assert_eq!(s.cmp(&t), key(&s).cmp(&key(&t)));
    }

    #[test]
    fn flip_is_an_involution(p in (1..=6usize).prop_flat_map(arb_pattern), j in 0..6usize) {
        if j < p.k() && p.star_mask() >> j & 1 == 0 {
            let q = p.flip(j).unwrap();
            prop_assert_ne!(q, p);
            prop_assert_eq!(q.flip(j).unwrap(), p);
            prop_assert!(q.is_distinguishable_from(&p));
        }
    }
}
