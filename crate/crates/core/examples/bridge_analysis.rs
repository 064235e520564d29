//! Class mix around bridges: two labelled communities joined by one edge.

use cacose::analysis::bridge_analysis;
use cacose::decomposition::{decompose, DecompositionConfig};
use cacose::graph::{Graph, NodeLabels};

fn main() -> cacose::Result<()> {
    // Two 4-cliques joined by the bridge (3, 4), plus a pendant node 8.
    let mut edges = vec![(3, 4), (7, 8)];
    for base in [0, 4] {
        for u in 0..4 {
            for v in u + 1..4 {
                edges.push((base + u, base + v));
            }
        }
    }
    let g = Graph::from_edges(9, edges)?;
    let labels = NodeLabels::new(vec![0, 0, 0, 0, 1, 1, 1, 1, 0]);
    let family = decompose(&g, DecompositionConfig::default())?.family;
    for r in bridge_analysis(&g, &labels, &family)? {
        println!(
            "bridge ({}, {}) in {:<9} 2-hop nodes {:?} classes {:?} homophily {:.3}",
            r.u, r.v, r.context, r.neighborhood, r.histogram, r.homophily
        );
    }
    Ok(())
}
