//! k-core decomposition, edge coreness, closure-aware edge filtration and the
//! edge-partitioned subgraph family built from the final edge scores.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Per-node core number.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorenessMap {
    core: Vec<usize>,
}

impl CorenessMap {
    pub fn as_slice(&self) -> &[usize] {
        &self.core
    }

    pub fn get(&self, v: usize) -> usize {
        self.core[v]
    }

    /// Largest core number, 0 for an edgeless graph.
    pub fn k_max(&self) -> usize {
        self.core.iter().copied().max().unwrap_or(0)
    }

    /// Nodes of the k-core `G_k`, ascending.
    pub fn core_nodes(&self, k: usize) -> Vec<usize> {
        (0..self.core.len()).filter(|&v| self.core[v] >= k).collect()
    }
}

/// Core numbers by bucket-queue degree peeling, `O(V + E)`.
pub fn core_numbers(g: &Graph) -> CorenessMap {
    let n = g.num_nodes();
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let max_deg = deg.iter().copied().max().unwrap_or(0);

    // bin[d] = first position of degree-d nodes in `order`.
    let mut bin = vec![0usize; max_deg + 2];
    for &d in &deg {
        bin[d + 1] += 1;
    }
    for d in 1..bin.len() {
        bin[d] += bin[d - 1];
    }
    let mut pos = vec![0usize; n];
    let mut order = vec![0usize; n];
    {
        let mut next = bin.clone();
        for v in 0..n {
            pos[v] = next[deg[v]];
            order[pos[v]] = v;
            next[deg[v]] += 1;
        }
    }

    for i in 0..n {
        let v = order[i];
        for &u in g.neighbors(v) {
            if deg[u] > deg[v] {
                let du = deg[u];
                let pu = pos[u];
                let pw = bin[du];
                let w = order[pw];
                if u != w {
                    order.swap(pu, pw);
                    pos[u] = pw;
                    pos[w] = pu;
                }
                bin[du] += 1;
                deg[u] -= 1;
            }
        }
    }
    CorenessMap { core: deg }
}

/// Per-edge integer score, indexed by the graph's edge id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeScoreMap {
    score: Vec<usize>,
}

impl EdgeScoreMap {
    pub fn from_vec(score: Vec<usize>) -> Self {
        EdgeScoreMap { score }
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.score
    }

    pub fn get(&self, edge_id: usize) -> usize {
        self.score[edge_id]
    }

    pub fn len(&self) -> usize {
        self.score.len()
    }

    pub fn is_empty(&self) -> bool {
        self.score.is_empty()
    }

    /// Score of `{u, v}` in `g`, if it is an edge.
    pub fn of(&self, g: &Graph, u: usize, v: usize) -> Option<usize> {
        g.edge_id(u, v).map(|e| self.score[e])
    }
}

/// `C(u, v) = min(core(u), core(v))`, the largest k whose k-core holds the edge.
pub fn edge_coreness(g: &Graph, cores: &CorenessMap) -> EdgeScoreMap {
    EdgeScoreMap {
        score: g.edges().iter().map(|&(u, v)| cores.get(u).min(cores.get(v))).collect(),
    }
}

/// Number of common neighbors of the endpoints of edge `(u, v)`.
pub fn triadic_support(g: &Graph, u: usize, v: usize) -> Result<usize> {
    if !g.has_edge(u, v) {
        return Err(Error::NotAnEdge { u, v });
    }
    Ok(g.common_neighbor_count(u, v))
}

/// Where the neighbor sets of the support count are taken from.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SupportScope {
    /// Common neighbors inside the k-core hosting the edge (`core(w) ≥ k`).
    #[default]
    CoreSubgraph,
    /// Common neighbors anywhere in the graph.
    FullGraph,
}

impl std::str::FromStr for SupportScope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "core" | "core-subgraph" => Ok(SupportScope::CoreSubgraph),
            "full" | "full-graph" => Ok(SupportScope::FullGraph),
            other => Err(Error::InvalidConfig(format!("unknown support scope {other:?}"))),
        }
    }
}

/// Support of edge `(u, v)` with score `k` under `scope`.
pub fn scoped_support(g: &Graph, cores: &CorenessMap, u: usize, v: usize, k: usize, scope: SupportScope) -> usize {
    let (a, b) = (g.neighbors(u), g.neighbors(v));
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                if scope == SupportScope::FullGraph || cores.get(a[i]) >= k {
                    count += 1;
                }
                i += 1;
                j += 1;
            }
        }
    }
    count
}

/// Single-pass closure-aware edge filtration.
///
/// Every edge with pre-filtration score `k ≥ delta` and zero support (under
/// `scope`) is demoted to `k − 1`; all other scores are copied. `scores` must
/// be the unfiltered coreness values, so applying the pass to the same input
/// twice gives the same output.
pub fn caef_filter(
    g: &Graph,
    cores: &CorenessMap,
    scores: &EdgeScoreMap,
    delta: usize,
    scope: SupportScope,
) -> EdgeScoreMap {
    let score = g
        .edges()
        .par_iter()
        .zip(scores.score.par_iter())
        .map(|(&(u, v), &k)| {
            if k >= delta && scoped_support(g, cores, u, v, k, scope) == 0 {
                k - 1
            } else {
                k
            }
        })
        .collect();
    EdgeScoreMap { score }
}

/// Edge-induced subgraph with its local→global node map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subgraph {
    graph: Graph,
    nodes: Vec<usize>,
    edge_ids: Vec<usize>,
}

impl Subgraph {
    /// Local graph; node `i` is global node `nodes()[i]`.
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    /// Local→global node map, ascending in the global id.
    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    /// Global edge ids of this subgraph's edges, ascending.
    pub fn edge_ids(&self) -> &[usize] {
        &self.edge_ids
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn local_index(&self, global: usize) -> Option<usize> {
        self.nodes.binary_search(&global).ok()
    }

    pub fn contains_node(&self, global: usize) -> bool {
        self.local_index(global).is_some()
    }

    /// Edges translated back to global node ids.
    pub fn global_edges(&self) -> Vec<(usize, usize)> {
        self.graph
            .edges()
            .iter()
            .map(|&(a, b)| (self.nodes[a], self.nodes[b]))
            .collect()
    }

    /// Subgraph induced by a set of global edge ids of `g`.
    pub fn from_edge_ids(g: &Graph, edge_ids: Vec<usize>) -> Subgraph {
        let mut nodes: Vec<usize> = edge_ids
            .iter()
            .flat_map(|&e| {
                let (u, v) = g.edges()[e];
                [u, v]
            })
            .collect();
        nodes.sort_unstable();
        nodes.dedup();
        let local = |x: usize| nodes.binary_search(&x).unwrap();
        let pairs: Vec<(usize, usize)> = edge_ids
            .iter()
            .map(|&e| {
                let (u, v) = g.edges()[e];
                (local(u), local(v))
            })
            .collect();
        let graph = Graph::from_edges(nodes.len(), pairs).expect("local indices in range");
        Subgraph {
            graph,
            nodes,
            edge_ids,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Level {
    pub k: usize,
    pub subgraph: Subgraph,
}

/// `{S_k}`: one subgraph per distinct edge score, ascending in `k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgraphFamily {
    num_nodes: usize,
    num_edges: usize,
    levels: Vec<Level>,
}

impl SubgraphFamily {
    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// Node count of the graph the family was extracted from.
    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn num_edges(&self) -> usize {
        self.num_edges
    }

    pub fn level(&self, k: usize) -> Option<&Subgraph> {
        self.levels.iter().find(|l| l.k == k).map(|l| &l.subgraph)
    }

    pub fn ks(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.k).collect()
    }

    /// Levels whose subgraph contains global node `v`.
    pub fn levels_containing(&self, v: usize) -> Vec<usize> {
        self.levels.iter().filter(|l| l.subgraph.contains_node(v)).map(|l| l.k).collect()
    }
}

/// Groups edges by score: level `k` holds exactly the edges scored `k`.
pub fn extract_subgraphs(g: &Graph, scores: &EdgeScoreMap) -> SubgraphFamily {
    let mut by_k: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for (e, &k) in scores.score.iter().enumerate() {
        by_k.entry(k).or_default().push(e);
    }
    let levels = by_k
        .into_par_iter()
        .map(|(k, ids)| Level {
            k,
            subgraph: Subgraph::from_edge_ids(g, ids),
        })
        .collect();
    SubgraphFamily {
        num_nodes: g.num_nodes(),
        num_edges: g.num_edges(),
        levels,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionConfig {
    pub delta: usize,
    pub scope: SupportScope,
}

impl Default for DecompositionConfig {
    fn default() -> Self {
        DecompositionConfig {
            delta: 3,
            scope: SupportScope::CoreSubgraph,
        }
    }
}

/// Every intermediate of the decomposition pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub cores: CorenessMap,
    pub coreness: EdgeScoreMap,
    pub scores: EdgeScoreMap,
    pub family: SubgraphFamily,
}

impl Decomposition {
    /// Edge ids whose score was lowered by the filtration.
    pub fn demoted_edges(&self) -> Vec<usize> {
        (0..self.scores.len())
            .filter(|&e| self.scores.get(e) != self.coreness.get(e))
            .collect()
    }
}

/// Cores → coreness → CaEF → subgraph family.
pub fn decompose(g: &Graph, config: DecompositionConfig) -> Result<Decomposition> {
    if config.delta == 0 {
        return Err(Error::InvalidConfig("delta must be at least 1".into()));
    }
    let cores = core_numbers(g);
    let coreness = edge_coreness(g, &cores);
    let scores = caef_filter(g, &cores, &coreness, config.delta, config.scope);
    let family = extract_subgraphs(g, &scores);
    Ok(Decomposition {
        cores,
        coreness,
        scores,
        family,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;

    #[test]
    fn triangle_and_path_cores() {
        let tri = build_graph(&[(0, 1), (1, 2), (2, 0)], 3).unwrap();
        assert_eq!(core_numbers(&tri).as_slice(), &[2, 2, 2]);
        let path = build_graph(&[(0, 1), (1, 2), (2, 3), (3, 4)], 5).unwrap();
        assert_eq!(core_numbers(&path).as_slice(), &[1; 5]);
    }

    #[test]
    fn isolated_nodes_have_core_zero() {
        let g = build_graph(&[(0, 1)], 3).unwrap();
        assert_eq!(core_numbers(&g).as_slice(), &[1, 1, 0]);
    }

    #[test]
    fn k4_edges_score_three() {
        let pairs: Vec<_> = (0..4).flat_map(|u| (u + 1..4).map(move |v| (u, v))).collect();
        let g = build_graph(&pairs, 4).unwrap();
        let s = edge_coreness(&g, &core_numbers(&g));
        assert!(s.as_slice().iter().all(|&k| k == 3));
    }

    #[test]
    fn support_counts() {
        let tri = build_graph(&[(0, 1), (1, 2), (2, 0)], 3).unwrap();
        assert_eq!(triadic_support(&tri, 0, 1).unwrap(), 1);
        let path = build_graph(&[(0, 1), (1, 2)], 3).unwrap();
        assert_eq!(triadic_support(&path, 0, 1).unwrap(), 0);
        assert!(matches!(triadic_support(&path, 0, 2), Err(Error::NotAnEdge { .. })));
    }

    #[test]
    fn triangle_untouched_by_caef() {
        let tri = build_graph(&[(0, 1), (1, 2), (2, 0)], 3).unwrap();
        let d = decompose(&tri, DecompositionConfig::default()).unwrap();
        assert_eq!(d.scores, d.coreness);
    }

    #[test]
    fn path_is_one_level() {
        let path = build_graph(&[(0, 1), (1, 2), (2, 3)], 4).unwrap();
        let d = decompose(&path, DecompositionConfig::default()).unwrap();
        assert_eq!(d.family.ks(), vec![1]);
        assert_eq!(d.family.level(1).unwrap().global_edges(), path.edges());
    }

    #[test]
    fn zero_delta_rejected() {
        let g = build_graph(&[(0, 1)], 2).unwrap();
        let cfg = DecompositionConfig {
            delta: 0,
            ..Default::default()
        };
        assert!(decompose(&g, cfg).is_err());
    }
}
