mod common;

use bigraphon::iso::{bigraphs_isomorphic, find_isomorphism};
use bigraphon::{io, Bigraph, Flag};
use common::build;
use proptest::prelude::*;
use proptest::sample::subsequence;

/// Rebuilds `g` with vertex order permuted within each side and fresh ids.
fn shuffled(g: &Bigraph, pl: &[usize], pr: &[usize]) -> Bigraph {
    build(g.v1(), g.v2(), g.edges().iter().map(|&(i, j)| (pl[i], pr[j])).collect::<Vec<_>>())
}

fn perm(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

fn with_perms() -> impl Strategy<Value = (Bigraph, Vec<usize>, Vec<usize>)> {
    common::bigraph(4).prop_flat_map(|g| {
        let (a, b) = (g.v1(), g.v2());
        (Just(g), perm(a), perm(b))
    })
}

#[test]
fn c4_is_k22() {
    assert!(bigraphs_isomorphic(&Bigraph::even_cycle(4).unwrap(), &Bigraph::complete_bipartite(2, 2).unwrap()));
    assert!(!bigraphs_isomorphic(&Bigraph::star(2).unwrap(), &Bigraph::star(2).unwrap().dual()));
}

#[test]
fn two_core_of_trees_is_edgeless() {
    for g in [Bigraph::path(6).unwrap(), Bigraph::star(4).unwrap()] {
        let core = Flag::unlabeled(g).two_core();
        assert_eq!(core.underlying().vertex_count(), 0);
    }
    let c6 = Bigraph::even_cycle(6).unwrap();
    let pendant = build(4, 3, [(0, 0), (1, 0), (1, 1), (2, 1), (2, 2), (0, 2), (3, 2)]);
    let core = Flag::unlabeled(pendant).two_core();
    assert!(bigraphs_isomorphic(core.underlying(), &c6));
}

#[test]
fn labels_survive_two_core() {
    let f = Flag::new(Bigraph::path(4).unwrap(), ["L0"]).unwrap();
    let core = f.two_core();
    assert_eq!(core.label_ids(), vec!["L0".to_string()]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn relabeling_gives_isomorphic_graph((g, pl, pr) in with_perms()) {
        let h = shuffled(&g, &pl, &pr);
        prop_assert!(bigraphs_isomorphic(&g, &h));
        prop_assert!(bigraphs_isomorphic(&h, &g));
        prop_assert!(bigraphs_isomorphic(&g, &g));
        let map = find_isomorphism(&g, &[], &h, &[]).unwrap();
        for &(i, j) in g.edges() {
            prop_assert!(h.has_edge(map[i], map[g.v1() + j]));
        }
    }

    #[test]
    fn isomorphism_is_transitive((g, pl, pr) in with_perms(), p2 in perm(4), p3 in perm(4)) {
        let h = shuffled(&g, &pl, &pr);
        let ql: Vec<usize> = p2.into_iter().filter(|&x| x < g.v1()).collect();
        let qr: Vec<usize> = p3.into_iter().filter(|&x| x < g.v2()).collect();
        let k = shuffled(&h, &ql, &qr);
        prop_assert!(bigraphs_isomorphic(&g, &k));
    }

    #[test]
    fn edge_count_separates(g in common::bigraph(4), h in common::bigraph(4)) {
        if g.edge_count() != h.edge_count() || g.v1() != h.v1() || g.v2() != h.v2() {
            prop_assert!(!bigraphs_isomorphic(&g, &h));
        }
    }

    #[test]
    fn dual_is_involution(g in common::bigraph(5)) {
        prop_assert_eq!(g.dual().dual(), g.clone());
        prop_assert_eq!(g.dual().v1(), g.v2());
        let f = Flag::new(g.clone(), [g.id(0)]).unwrap();
        prop_assert_eq!(f.dual().dual(), f);
    }

    #[test]
    fn two_core_is_idempotent_and_confluent(g in common::bigraph(5), picks in prop::collection::vec(any::<usize>(), 32)) {
        let f = Flag::new(g.clone(), [g.id(g.vertex_count() - 1)]).unwrap();
        let core = f.two_core();
        prop_assert_eq!(core.two_core(), core.clone());
        let mut it = picks.into_iter().cycle();
        let other = f.two_core_with(|c| it.next().unwrap() % c.len());
        prop_assert_eq!(other, core.clone());
        let h = core.underlying();
        for v in 0..h.vertex_count() {
            prop_assert!(h.degree(v) >= 2 || core.is_labeled(v));
        }
    }

    #[test]
    fn bigraph_json_round_trip(g in common::bigraph(5)) {
        prop_assert_eq!(io::parse_bigraph(&io::to_json(&g)).unwrap(), g.clone());
        let labels: Vec<String> = g.left_ids().iter().take(1).cloned().collect();
        let f = Flag::new(g, labels).unwrap();
        prop_assert_eq!(io::parse_flag(&io::to_json(&f)).unwrap(), f);
    }

    #[test]
    fn kernel_json_round_trip(w in common::kernel(5)) {
        prop_assert_eq!(io::parse_kernel(&io::to_json(&w)).unwrap(), w);
    }

    #[test]
    fn induced_subgraph_keeps_edges(g in common::bigraph(4), keep in subsequence((0..8).collect::<Vec<usize>>(), 0..8)) {
        let ids: Vec<String> = keep.iter().filter(|&&v| v < g.vertex_count()).map(|&v| g.id(v).to_owned()).collect();
        let h = g.induced(&ids).unwrap();
        prop_assert_eq!(h.vertex_count(), ids.len());
        let inside = g.global_edges().filter(|&(a, b)| ids.iter().any(|x| x == g.id(a)) && ids.iter().any(|x| x == g.id(b))).count();
        prop_assert_eq!(h.edge_count(), inside);
    }
}

#[test]
fn book_counts() {
    for k in 1..=8 {
        let b = Bigraph::book(k).unwrap();
        assert_eq!(b.edge_count(), 3 * k + 1);
        assert_eq!(b.vertex_count(), 2 * k + 2);
    }
}
