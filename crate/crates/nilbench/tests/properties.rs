//! Randomized structural properties over the map, graph and closure layers.

use proptest::prelude::*;

use nilbench::green::greens_structure;
use nilbench::pmap::{parse_orbits, PartialMap};
use nilbench::schutz::schutz_graphs;
use nilbench::semigroup::GeneratedSemigroup;
use nilbench::stallings::{
    based_isomorphic, fold, free_reduce, p_closure, tree_basis, word_inverse, Lit, SubgroupBasis,
};

fn partial_map_strategy(degree: usize) -> impl Strategy<Value = PartialMap> {
    proptest::collection::vec(proptest::option::of(0..degree), degree)
        .prop_map(move |images| PartialMap::from_images(degree, &images).unwrap())
}

fn word_strategy() -> impl Strategy<Value = Vec<Lit>> {
    proptest::collection::vec((0..2usize, any::<bool>()), 1..8)
}

fn basis_strategy() -> impl Strategy<Value = SubgroupBasis> {
    proptest::collection::vec(word_strategy(), 1..4).prop_map(|words| {
        words
            .into_iter()
            .filter(|w| !free_reduce(w).is_empty())
            .collect()
    })
}

proptest! {
    #[test]
    fn orbit_notation_round_trips(
        (degree, m) in (1..8usize).prop_flat_map(|d| (Just(d), partial_map_strategy(d)))
    ) {
        let rendered = format!("{m}");
        let parsed = parse_orbits(degree, &rendered).unwrap();
        prop_assert_eq!(parsed, m);
    }

    #[test]
    fn free_reduction_cancels_inverses(w in word_strategy()) {
        let mut doubled = w.clone();
        doubled.extend(word_inverse(&w));
        prop_assert!(free_reduce(&doubled).is_empty());
        let once = free_reduce(&w);
        prop_assert_eq!(free_reduce(&once), once.clone());
    }

    #[test]
    fn fold_is_order_independent(basis in basis_strategy()) {
        prop_assume!(!basis.is_empty());
        let forward = fold(&basis, 2).unwrap();
        let mut reversed = basis.clone();
        reversed.reverse();
        let backward = fold(&reversed, 2).unwrap();
        prop_assert!(based_isomorphic(&forward, &backward));
    }

    #[test]
    fn tree_basis_refolds_to_the_same_graph(basis in basis_strategy()) {
        prop_assume!(!basis.is_empty());
        let aut = fold(&basis, 2).unwrap();
        let refolded = fold(&tree_basis(&aut), 2).unwrap();
        prop_assert!(based_isomorphic(&aut, &refolded));
    }

    #[test]
    fn p_closure_is_idempotent(basis in basis_strategy()) {
        prop_assume!(!basis.is_empty());
        let aut = fold(&basis, 2).unwrap();
        prop_assume!(aut.n_vertices <= 10);
        for p in [2u64, 3] {
            let once = p_closure(&aut, p).unwrap();
            let twice = p_closure(&once.automaton, p).unwrap();
            prop_assert!(based_isomorphic(&once.automaton, &twice.automaton));
        }
    }

    #[test]
    fn schutz_graphs_flag_matches_edges(
        maps in proptest::collection::vec(partial_map_strategy(4), 1..3)
    ) {
        let Ok(s) = GeneratedSemigroup::close_generators(&maps, 5000) else {
            return Ok(());
        };
        let g = greens_structure(&s);
        for graph in schutz_graphs(&s, &g) {
            let all_injective = graph.edges.iter().all(|e| e.is_partial_injection());
            prop_assert_eq!(graph.is_inverse, all_injective);
            // Every edge stays inside the class vertex set.
            for e in &graph.edges {
                for v in e.domain() {
                    prop_assert!(e.apply(v).unwrap() < graph.vertices.len());
                }
            }
        }
    }
}
