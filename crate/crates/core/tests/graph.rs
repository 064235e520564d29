mod common;

use std::path::Path;

use cacose::graph::format::{edge_list_text, parse_edge_list, read_edge_list, write_edge_list};
use cacose::graph::{bfs_distance, erdos_renyi, find_bridges, khop_neighborhood, Graph};
use cacose::Error;
use common::*;
use proptest::prelude::*;

#[test]
fn bridges_match_deletion_oracle() {
    for (i, g) in corpus(80, 40, 11).iter().enumerate() {
        let mut got = find_bridges(g);
        got.sort_unstable();
        assert_eq!(got, bridges_oracle(g), "graph {i}");
    }
}

#[test]
fn bfs_agrees_with_floyd_warshall() {
    for g in corpus(40, 30, 12) {
        let fw = floyd_warshall(&g);
        for s in 0..g.num_nodes() {
            assert_eq!(bfs_distance(&g, s).unwrap(), fw[s]);
        }
        // Triangle inequality over every reachable triple.
        for a in 0..g.num_nodes() {
            for b in 0..g.num_nodes() {
                for c in 0..g.num_nodes() {
                    if let (Some(x), Some(y), Some(z)) = (fw[a][b], fw[b][c], fw[a][c]) {
                        assert!(z <= x + y);
                    }
                }
            }
        }
    }
}

#[test]
fn khop_is_ball_of_radius() {
    let g = erdos_renyi(25, 0.12, 3).unwrap();
    let fw = floyd_warshall(&g);
    for v in 0..g.num_nodes() {
        for hops in 0..4 {
            let expected: Vec<usize> = (0..g.num_nodes()).filter(|&w| fw[v][w].is_some_and(|d| d <= hops)).collect();
            assert_eq!(khop_neighborhood(&g, v, hops).unwrap(), expected);
        }
    }
    assert!(matches!(khop_neighborhood(&g, 25, 1), Err(Error::NodeOutOfRange { .. })));
}

#[test]
fn erdos_renyi_is_reproducible_and_calibrated() {
    let a = erdos_renyi(200, 0.1, 9).unwrap();
    assert_eq!(a, erdos_renyi(200, 0.1, 9).unwrap());
    assert_ne!(a, erdos_renyi(200, 0.1, 10).unwrap());
    // 19900 pairs, mean 1990, standard deviation about 42.
    let m = a.num_edges() as f64;
    assert!((m - 1990.0).abs() < 6.0 * 42.3, "{m} edges");
    assert_eq!(erdos_renyi(7, 1.0, 0).unwrap(), complete(7));
    assert_eq!(erdos_renyi(7, 0.0, 0).unwrap().num_edges(), 0);
    assert!(matches!(erdos_renyi(7, 1.5, 0), Err(Error::InvalidProbability(_))));
}

#[test]
fn from_edges_canonicalizes() {
    let g = Graph::from_edges(4, [(2, 1), (1, 2), (3, 3), (0, 3)]).unwrap();
    assert_eq!(g.edges(), &[(0, 3), (1, 2)]);
    assert_eq!(g.neighbors(3), &[0]);
    assert!(matches!(Graph::from_edges(2, [(0, 2)]), Err(Error::EdgeOutOfRange { u: 0, v: 2, num_nodes: 2 })));
}

#[test]
fn edge_list_round_trip_on_disk() {
    let dir = tempfile::tempdir().unwrap();
    for (i, g) in corpus(20, 30, 13).into_iter().enumerate() {
        let p = dir.path().join(format!("g{i}.edges"));
        write_edge_list(&p, &g).unwrap();
        assert_eq!(read_edge_list(&p, g.num_nodes()).unwrap(), g);
    }
}

#[test]
fn parse_errors_carry_line_numbers() {
    let p = Path::new("in.edges");
    let text = "# header\n0 1\n\n1 x\n";
    match parse_edge_list(text, p) {
        Err(Error::Parse { line, message, .. }) => {
            assert_eq!(line, 4);
            assert!(message.contains("\"x\""), "{message}");
        }
        other => panic!("{other:?}"),
    }
    assert!(matches!(parse_edge_list("0 1 2\n", p), Err(Error::Parse { line: 1, .. })));
    assert!(matches!(parse_edge_list("0 1\n5\n", p), Err(Error::Parse { line: 2, .. })));
    assert_eq!(parse_edge_list("0 1 # comment\n", p).unwrap(), vec![(0, 1)]);
}

proptest! {
    #[test]
    fn adjacency_is_symmetric_without_self_loops(
        n in 1usize..30,
        pairs in prop::collection::vec((0usize..30, 0usize..30), 0..120),
    ) {
        let pairs: Vec<_> = pairs.into_iter().map(|(u, v)| (u % n, v % n)).collect();
        let g = Graph::from_edges(n, pairs.clone()).unwrap();
        for u in 0..n {
            prop_assert!(!g.has_edge(u, u));
            prop_assert!(g.neighbors(u).windows(2).all(|w| w[0] < w[1]));
            for &v in g.neighbors(u) {
                prop_assert!(g.neighbors(v).contains(&u));
            }
        }
        let distinct: std::collections::BTreeSet<_> =
            pairs.iter().filter(|(u, v)| u != v).map(|&(u, v)| (u.min(v), u.max(v))).collect();
        prop_assert_eq!(g.num_edges(), distinct.len());
        prop_assert_eq!(g.neighbors(0).len(), g.degree(0));
        let text = edge_list_text(&g);
        let back = Graph::from_edges(n, parse_edge_list(&text, Path::new("t")).unwrap()).unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn common_neighbors_counted_exactly(n in 2usize..25, p in 0.0f64..0.8, seed in any::<u64>()) {
        let g = erdos_renyi(n, p, seed).unwrap();
        let adj = adjacency(&g);
        for &(u, v) in g.edges() {
            prop_assert_eq!(g.common_neighbor_count(u, v), adj[u].intersection(&adj[v]).count());
        }
    }
}
