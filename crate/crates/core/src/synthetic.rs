//! Small deterministic fixtures used by the examples and tests.

use rand::Rng;

use crate::error::Result;
use crate::graph::{stochastic_block_model, Graph, NodeFeatures, NodeLabels};
use crate::model::train::GraphSample;
use crate::rng;

/// Degree cap of the one-hot features in [`triangles_vs_cliques`].
pub const GC_DEGREE_CAP: usize = 6;

/// Twelve-node toy with three coreness levels after filtration.
///
/// Node `i` is `v_{i+1}`: a 5-clique on `v1..v5`, a 4-clique on `v7..v10`,
/// the edge `(v4, v7)`, the wedge `v4 - v6 - v7` and the 2-core cycle
/// `v8 - v11 - v12 - v9`. `(v4, v7)` has coreness 3 but no common neighbor
/// inside the 3-core, so it is demoted to level 2.
pub fn toy_graph() -> Graph {
    let mut edges = Vec::new();
    for u in 0..5 {
        for v in u + 1..5 {
            edges.push((u, v));
        }
    }
    for u in 6..10 {
        for v in u + 1..10 {
            edges.push((u, v));
        }
    }
    edges.extend([(3, 6), (3, 5), (5, 6), (7, 10), (10, 11), (11, 8)]);
    Graph::from_edges(12, edges).expect("static toy graph")
}

/// Two equal planted blocks; labels are the block indices.
pub fn two_block_sbm(n: usize, p_in: f64, p_out: f64, seed: u64) -> Result<(Graph, NodeLabels)> {
    let (g, blocks) = stochastic_block_model(&[n / 2, n - n / 2], p_in, p_out, seed)?;
    Ok((g, NodeLabels::new(blocks)))
}

/// `count` chained triangles (label 0) or 6-cliques with a short tail
/// (label 1) per class. The classes differ in their maximum coreness (2 vs 5).
pub fn triangles_vs_cliques(per_class: usize, seed: u64) -> Vec<GraphSample> {
    let mut out = Vec::with_capacity(2 * per_class);
    for i in 0..per_class {
        let mut r = rng::indexed_stream(seed, rng::GENERATOR, i as u64);
        let triangles: usize = r.gen_range(2..=4);
        let mut edges = Vec::new();
        for t in 0..triangles {
            let b = 3 * t;
            edges.extend([(b, b + 1), (b + 1, b + 2), (b, b + 2)]);
            if t > 0 {
                edges.push((b - 1, b));
            }
        }
        out.push(sample(format!("triangles-{i}"), 3 * triangles, edges, 0));

        let tail: usize = r.gen_range(0..=3);
        let mut edges = Vec::new();
        for u in 0..6 {
            for v in u + 1..6 {
                edges.push((u, v));
            }
        }
        for t in 0..tail {
            edges.push((if t == 0 { 0 } else { 5 + t }, 6 + t));
        }
        out.push(sample(format!("clique-{i}"), 6 + tail, edges, 1));
    }
    out
}

fn sample(id: String, n: usize, edges: Vec<(usize, usize)>, label: usize) -> GraphSample {
    let graph = Graph::from_edges(n, edges).expect("generated edges are in range");
    let features = NodeFeatures::degree_one_hot(&graph, GC_DEGREE_CAP);
    GraphSample {
        id,
        graph,
        features,
        label,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::core_numbers;

    #[test]
    fn toy_shape() {
        let g = toy_graph();
        assert_eq!((g.num_nodes(), g.num_edges()), (12, 22));
    }

    #[test]
    fn gc_classes_separate_by_k_max() {
        for s in triangles_vs_cliques(5, 3) {
            let k = core_numbers(&s.graph).k_max();
            assert_eq!(k, if s.label == 0 { 2 } else { 5 }, "{}", s.id);
        }
    }
}
