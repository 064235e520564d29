mod common;

use cacose::decomposition::{
    caef_filter, core_numbers, decompose, edge_coreness, extract_subgraphs, scoped_support, triadic_support,
    DecompositionConfig, EdgeScoreMap, SupportScope,
};
use cacose::graph::{erdos_renyi, Graph};
use cacose::synthetic::toy_graph;
use cacose::Error;
use common::*;
use proptest::prelude::*;

fn config(delta: usize, scope: SupportScope) -> DecompositionConfig {
    DecompositionConfig { delta, scope }
}

#[test]
fn toy_decomposition_levels() {
    let g = toy_graph();
    let d = decompose(&g, DecompositionConfig::default()).unwrap();
    assert_eq!(d.cores.as_slice(), &[4, 4, 4, 4, 4, 2, 3, 3, 3, 3, 2, 2]);
    let id = g.edge_id(3, 6).unwrap();
    assert_eq!(d.demoted_edges(), vec![id]);
    assert_eq!((d.coreness.get(id), d.scores.get(id)), (3, 2));
    assert_eq!(d.family.ks(), vec![2, 3, 4]);
    assert_eq!(d.family.level(2).unwrap().nodes(), &[3, 5, 6, 7, 8, 10, 11]);
    assert_eq!(d.family.level(3).unwrap().nodes(), &[6, 7, 8, 9]);
    assert_eq!(d.family.level(4).unwrap().nodes(), &[0, 1, 2, 3, 4]);
    assert_eq!(d.family.levels_containing(3), vec![2, 4]);
    assert_eq!(d.family.levels_containing(6), vec![2, 3]);
}

#[test]
fn toy_full_graph_scope_keeps_the_bridge_edge() {
    // Node 5 is a common neighbor of (3, 6) but lies outside the 3-core.
    let g = toy_graph();
    let d = decompose(&g, config(3, SupportScope::FullGraph)).unwrap();
    assert!(d.demoted_edges().is_empty());
    assert_eq!(d.family.level(3).unwrap().nodes(), &[3, 6, 7, 8, 9]);
}

#[test]
fn delta_zero_is_rejected() {
    assert!(matches!(decompose(&toy_graph(), config(0, SupportScope::CoreSubgraph)), Err(Error::InvalidConfig(_))));
}

#[test]
fn delta_one_can_create_level_zero() {
    // A lone edge has coreness one and no triangle to support it.
    let g = path(2);
    let d = decompose(&g, config(1, SupportScope::CoreSubgraph)).unwrap();
    assert_eq!(d.family.ks(), vec![0]);
}

#[test]
fn empty_and_edgeless_graphs_have_no_levels() {
    for g in [Graph::empty(0), Graph::empty(4)] {
        let d = decompose(&g, DecompositionConfig::default()).unwrap();
        assert!(d.family.is_empty());
        assert_eq!(d.cores.k_max(), 0);
    }
}

#[test]
fn triadic_support_errors_on_non_edges() {
    let g = path(3);
    assert_eq!(triadic_support(&complete(4), 0, 1).unwrap(), 2);
    assert!(matches!(triadic_support(&g, 0, 2), Err(Error::NotAnEdge { u: 0, v: 2 })));
}

#[test]
fn core_nodes_match_definition() {
    for g in corpus(60, 40, 21) {
        let cores = core_numbers(&g);
        for k in 0..=cores.k_max() + 1 {
            let members = k_core_members(&g, k);
            let expected: Vec<usize> = (0..g.num_nodes()).filter(|&v| members[v]).collect();
            assert_eq!(cores.core_nodes(k), expected);
        }
    }
}

#[test]
fn structured_cores() {
    assert_eq!(core_numbers(&complete(6)).as_slice(), &[5; 6]);
    assert_eq!(core_numbers(&cycle(7)).as_slice(), &[2; 7]);
    assert_eq!(core_numbers(&path(4)).as_slice(), &[1; 4]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn decomposition_invariants(
        n in 1usize..40,
        p in 0.02f64..0.6,
        seed in any::<u64>(),
        delta in 1usize..5,
        full in any::<bool>(),
    ) {
        let g = erdos_renyi(n, p, seed).unwrap();
        let scope = if full { SupportScope::FullGraph } else { SupportScope::CoreSubgraph };
        let d = decompose(&g, config(delta, scope)).unwrap();
        prop_assert_eq!(d.cores.as_slice().to_vec(), core_oracle(&g));
        prop_assert_eq!(d.coreness.as_slice().to_vec(), edge_core_oracle(&g));

        let core = core_oracle(&g);
        let adj = adjacency(&g);
        for (id, &(u, v)) in g.edges().iter().enumerate() {
            let (pre, post) = (d.coreness.get(id), d.scores.get(id));
            let support = adj[u]
                .intersection(&adj[v])
                .filter(|&&w| full || core[w] >= pre)
                .count();
            prop_assert_eq!(support, scoped_support(&g, &d.cores, u, v, pre, scope));
            let expect = if pre >= delta && support == 0 { pre - 1 } else { pre };
            prop_assert_eq!(post, expect);
        }

        // The pass reads only the unfiltered scores, so it is idempotent on them.
        let again = caef_filter(&g, &d.cores, &d.coreness, delta, scope);
        prop_assert_eq!(&again, &d.scores);

        // Levels ascend, are nonempty and partition the edge set.
        let ks = d.family.ks();
        prop_assert!(ks.windows(2).all(|w| w[0] < w[1]));
        let mut seen = vec![false; g.num_edges()];
        for level in d.family.levels() {
            prop_assert!(!level.subgraph.edge_ids().is_empty());
            for (&id, &(a, b)) in level.subgraph.edge_ids().iter().zip(level.subgraph.global_edges().iter()) {
                prop_assert!(!seen[id]);
                seen[id] = true;
                prop_assert_eq!(g.edges()[id], (a, b));
                prop_assert_eq!(d.scores.get(id), level.k);
            }
            // Nodes are exactly the endpoints of the level's edges.
            let mut ends: Vec<usize> = level.subgraph.global_edges().iter().flat_map(|&(a, b)| [a, b]).collect();
            ends.sort_unstable();
            ends.dedup();
            prop_assert_eq!(level.subgraph.nodes(), ends.as_slice());
        }
        prop_assert!(seen.into_iter().all(|s| s));
        prop_assert_eq!(d.family.num_edges(), g.num_edges());
    }

    #[test]
    fn extraction_groups_by_score(n in 2usize..25, p in 0.05f64..0.5, seed in any::<u64>(), salt in any::<u64>()) {
        let g = erdos_renyi(n, p, seed).unwrap();
        let scores: Vec<usize> = (0..g.num_edges()).map(|e| ((e as u64).wrapping_mul(salt) >> 61) as usize).collect();
        let family = extract_subgraphs(&g, &EdgeScoreMap::from_vec(scores.clone()));
        let mut distinct = scores.clone();
        distinct.sort_unstable();
        distinct.dedup();
        prop_assert_eq!(family.ks(), distinct);
        for level in family.levels() {
            let expected: Vec<usize> = (0..g.num_edges()).filter(|&e| scores[e] == level.k).collect();
            prop_assert_eq!(level.subgraph.edge_ids(), expected.as_slice());
        }
    }

    #[test]
    fn edge_coreness_is_min_of_endpoints(n in 1usize..30, p in 0.0f64..0.7, seed in any::<u64>()) {
        let g = erdos_renyi(n, p, seed).unwrap();
        let cores = core_numbers(&g);
        let s = edge_coreness(&g, &cores);
        for (id, &(u, v)) in g.edges().iter().enumerate() {
            prop_assert_eq!(s.get(id), cores.get(u).min(cores.get(v)));
            prop_assert_eq!(s.of(&g, v, u), Some(s.get(id)));
        }
    }
}
