//! Undirected simple graphs in CSR layout, plus the elementary traversals the
//! rest of the crate builds on.

mod bridges;
pub mod format;
mod generate;

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::autodiff::Matrix;
use crate::error::{Error, Result};

pub use bridges::find_bridges;
pub use generate::{erdos_renyi, stochastic_block_model};

/// Immutable undirected simple graph.
///
/// Edges are stored once as `(u, v)` with `u < v`, sorted lexicographically;
/// the position in that list is the edge id. Adjacency is CSR with each
/// neighbor list sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    num_nodes: usize,
    edges: Vec<(usize, usize)>,
    offsets: Vec<usize>,
    neighbors: Vec<usize>,
}

impl Graph {
    /// Builds a graph from an arbitrary pair list. Self-loops and duplicate
    /// (including reversed) pairs are dropped.
    pub fn from_edges<I>(num_nodes: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut edges = Vec::new();
        for (u, v) in pairs {
            if u >= num_nodes || v >= num_nodes {
                return Err(Error::EdgeOutOfRange { u, v, num_nodes });
            }
            if u != v {
                edges.push((u.min(v), u.max(v)));
            }
        }
        edges.sort_unstable();
        edges.dedup();
        Ok(Self::from_canonical_edges(num_nodes, edges))
    }

    /// `edges` must already be canonical: `u < v`, sorted, deduplicated.
    fn from_canonical_edges(num_nodes: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut degree = vec![0usize; num_nodes];
        for &(u, v) in &edges {
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut offsets = Vec::with_capacity(num_nodes + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut cursor = offsets[..num_nodes].to_vec();
        let mut neighbors = vec![0usize; 2 * edges.len()];
        for &(u, v) in &edges {
            neighbors[cursor[u]] = v;
            cursor[u] += 1;
            neighbors[cursor[v]] = u;
            cursor[v] += 1;
        }
        for u in 0..num_nodes {
            neighbors[offsets[u]..offsets[u + 1]].sort_unstable();
        }
        Graph {
            num_nodes,
            edges,
            offsets,
            neighbors,
        }
    }

    pub fn empty(num_nodes: usize) -> Self {
        Self::from_canonical_edges(num_nodes, Vec::new())
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Canonical edge list (`u < v`, sorted). Index = edge id.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.neighbors[self.offsets[u]..self.offsets[u + 1]]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.offsets[u + 1] - self.offsets[u]
    }

    pub fn max_degree(&self) -> usize {
        (0..self.num_nodes).map(|u| self.degree(u)).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.num_nodes && v < self.num_nodes && self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Edge id of `{u, v}`, if present.
    pub fn edge_id(&self, u: usize, v: usize) -> Option<usize> {
        let key = (u.min(v), u.max(v));
        self.edges.binary_search(&key).ok()
    }

    pub(crate) fn check_node(&self, node: usize) -> Result<()> {
        if node < self.num_nodes {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange {
                node,
                num_nodes: self.num_nodes,
            })
        }
    }

    /// Number of common neighbors of `u` and `v` (sorted-list merge).
    pub fn common_neighbor_count(&self, u: usize, v: usize) -> usize {
        let (a, b) = (self.neighbors(u), self.neighbors(v));
        let (mut i, mut j, mut count) = (0, 0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    count += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        count
    }

    /// Node-induced subgraph on `nodes` (any order, duplicates ignored).
    /// Returns the subgraph and its local-to-global node map, sorted ascending.
    pub fn induced_subgraph(&self, nodes: &[usize]) -> Result<(Graph, Vec<usize>)> {
        let mut map: Vec<usize> = nodes.to_vec();
        map.sort_unstable();
        map.dedup();
        for &v in &map {
            self.check_node(v)?;
        }
        let mut local = vec![usize::MAX; self.num_nodes];
        for (i, &v) in map.iter().enumerate() {
            local[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| local[u] != usize::MAX && local[v] != usize::MAX)
            .map(|&(u, v)| (local[u], local[v]))
            .collect::<Vec<_>>();
        // Local ids are monotone in global ids, so the list stays canonical.
        Ok((Graph::from_canonical_edges(map.len(), edges), map))
    }

    /// Same node set, only the edges accepted by `keep`.
    pub fn filter_edges(&self, mut keep: impl FnMut(usize, usize) -> bool) -> Graph {
        let edges = self.edges.iter().copied().filter(|&(u, v)| keep(u, v)).collect();
        Graph::from_canonical_edges(self.num_nodes, edges)
    }
}

/// Builds a graph from a pair list; see [`Graph::from_edges`].
pub fn build_graph(pairs: &[(usize, usize)], num_nodes: usize) -> Result<Graph> {
    Graph::from_edges(num_nodes, pairs.iter().copied())
}

/// Hop distances from `source`; `None` marks unreachable nodes.
pub fn bfs_distance(g: &Graph, source: usize) -> Result<Vec<Option<usize>>> {
    g.check_node(source)?;
    let mut dist = vec![None; g.num_nodes()];
    dist[source] = Some(0);
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].unwrap();
        for &w in g.neighbors(u) {
            if dist[w].is_none() {
                dist[w] = Some(du + 1);
                queue.push_back(w);
            }
        }
    }
    Ok(dist)
}

/// All nodes within `hops` of `v`, including `v`, sorted ascending.
pub fn khop_neighborhood(g: &Graph, v: usize, hops: usize) -> Result<Vec<usize>> {
    g.check_node(v)?;
    let mut dist = vec![usize::MAX; g.num_nodes()];
    dist[v] = 0;
    let mut out = vec![v];
    let mut queue = VecDeque::from([v]);
    while let Some(u) = queue.pop_front() {
        if dist[u] == hops {
            continue;
        }
        for &w in g.neighbors(u) {
            if dist[w] == usize::MAX {
                dist[w] = dist[u] + 1;
                out.push(w);
                queue.push_back(w);
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Per-node class index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeLabels {
    labels: Vec<usize>,
    num_classes: usize,
}

impl NodeLabels {
    /// `num_classes` is one past the largest label.
    pub fn new(labels: Vec<usize>) -> Self {
        let num_classes = labels.iter().max().map_or(0, |m| m + 1);
        NodeLabels {
            labels,
            num_classes,
        }
    }

    pub fn with_classes(labels: Vec<usize>, num_classes: usize) -> Result<Self> {
        if let Some(&bad) = labels.iter().find(|&&l| l >= num_classes) {
            return Err(Error::InvalidInput(format!(
                "label {bad} out of range for {num_classes} classes"
            )));
        }
        Ok(NodeLabels {
            labels,
            num_classes,
        })
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    pub fn get(&self, v: usize) -> usize {
        self.labels[v]
    }
}

/// `num_nodes × d` node feature matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeFeatures {
    matrix: Matrix,
}

impl NodeFeatures {
    pub fn new(matrix: Matrix) -> Result<Self> {
        if matrix.data().iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("node features contain non-finite values".into()));
        }
        Ok(NodeFeatures { matrix })
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn num_nodes(&self) -> usize {
        self.matrix.rows()
    }

    pub fn dim(&self) -> usize {
        self.matrix.cols()
    }

    /// One-hot degree encoding; degrees above `max_degree` share the last column.
    pub fn degree_one_hot(g: &Graph, max_degree: usize) -> Self {
        let mut m = Matrix::zeros(g.num_nodes(), max_degree + 1);
        for v in 0..g.num_nodes() {
            m.set(v, g.degree(v).min(max_degree), 1.0);
        }
        NodeFeatures { matrix: m }
    }

    /// One-hot node identity (`X = I`).
    pub fn identity(num_nodes: usize) -> Self {
        NodeFeatures {
            matrix: Matrix::identity(num_nodes),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn drops_duplicates_and_self_loops() {
        let g = build_graph(&[(0, 1), (1, 0), (2, 2)], 3).unwrap();
        assert_eq!(g.edges(), &[(0, 1)]);
        assert_eq!(g.degree(2), 0);
    }

    #[test]
    fn triangle_degrees() {
        let g = build_graph(&[(0, 1), (1, 2), (2, 0)], 3).unwrap();
        assert!((0..3).all(|v| g.degree(v) == 2));
    }

    #[test]
    fn out_of_range_pair_is_reported() {
        let err = build_graph(&[(0, 3)], 3).unwrap_err();
        assert!(matches!(err, Error::EdgeOutOfRange { u: 0, v: 3, .. }));
    }

    #[test]
    fn bfs_on_path_and_disjoint_edges() {
        let path = build_graph(&[(0, 1), (1, 2), (2, 3)], 4).unwrap();
        assert_eq!(bfs_distance(&path, 0).unwrap(), vec![Some(0), Some(1), Some(2), Some(3)]);
        let two = build_graph(&[(0, 1), (2, 3)], 4).unwrap();
        assert_eq!(bfs_distance(&two, 0).unwrap(), vec![Some(0), Some(1), None, None]);
    }

    #[test]
    fn khop_zero_and_star() {
        let star = build_graph(&[(0, 1), (0, 2), (0, 3), (0, 4)], 5).unwrap();
        assert_eq!(khop_neighborhood(&star, 3, 0).unwrap(), vec![3]);
        assert_eq!(khop_neighborhood(&star, 0, 1).unwrap(), vec![0, 1, 2, 3, 4]);
        assert_eq!(khop_neighborhood(&star, 1, 1).unwrap(), vec![0, 1]);
    }

    #[test]
    fn induced_subgraph_keeps_internal_edges() {
        let g = build_graph(&[(0, 1), (1, 2), (2, 3), (0, 3)], 4).unwrap();
        let (h, map) = g.induced_subgraph(&[3, 0, 1]).unwrap();
        assert_eq!(map, vec![0, 1, 3]);
        assert_eq!(h.edges(), &[(0, 1), (0, 2)]);
    }

    #[test]
    fn degree_one_hot_caps() {
        let star = build_graph(&[(0, 1), (0, 2), (0, 3)], 4).unwrap();
        let x = NodeFeatures::degree_one_hot(&star, 2);
        assert_eq!(x.matrix().row(0), &[0.0, 0.0, 1.0]);
        assert_eq!(x.matrix().row(1), &[0.0, 1.0, 0.0]);
    }
}
