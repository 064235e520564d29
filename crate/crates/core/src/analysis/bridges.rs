use serde::{Deserialize, Serialize};

use super::homophily::{check_labels, restrict_labels, same_label_edges};
use crate::decomposition::SubgraphFamily;
use crate::error::Result;
use crate::graph::{find_bridges, khop_neighborhood, Graph, NodeLabels};

/// Label statistics around one bridge, in the whole graph or in the level
/// subgraph that holds the edge. Nodes are global indices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BridgeRecord {
    pub u: usize,
    pub v: usize,
    /// `original` or `level-k`.
    pub context: String,
    pub level: Option<usize>,
    /// Union of both endpoints' 2-hop neighborhoods.
    pub neighborhood: Vec<usize>,
    /// Class counts over `neighborhood`.
    pub histogram: Vec<usize>,
    pub induced_edges: usize,
    pub same_label_edges: usize,
    /// `same_label_edges / induced_edges`; the bridge itself is always induced.
    pub homophily: f64,
}

/// One record per bridge of `g` for the whole graph, then one for the level
/// subgraph containing it.
pub fn bridge_analysis(g: &Graph, labels: &NodeLabels, family: &SubgraphFamily) -> Result<Vec<BridgeRecord>> {
    check_labels(g, labels)?;
    let mut out = Vec::new();
    for (u, v) in find_bridges(g) {
        out.push(record(g, labels, None, u, v, u, v, |i| i)?);
        let id = g.edge_id(u, v).expect("bridges are edges");
        for level in family.levels() {
            let sub = &level.subgraph;
            if !sub.edge_ids().contains(&id) {
                continue;
            }
            let (lu, lv) = (sub.local_index(u).unwrap(), sub.local_index(v).unwrap());
            let local_labels = restrict_labels(labels, sub.nodes());
            out.push(record(sub.graph(), &local_labels, Some(level.k), u, v, lu, lv, |i| sub.nodes()[i])?);
        }
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn record(
    g: &Graph,
    labels: &NodeLabels,
    level: Option<usize>,
    u: usize,
    v: usize,
    lu: usize,
    lv: usize,
    to_global: impl Fn(usize) -> usize,
) -> Result<BridgeRecord> {
    let mut hood = khop_neighborhood(g, lu, 2)?;
    hood.extend(khop_neighborhood(g, lv, 2)?);
    hood.sort_unstable();
    hood.dedup();
    let mut histogram = vec![0; labels.num_classes()];
    for &w in &hood {
        histogram[labels.get(w)] += 1;
    }
    let (induced, map) = g.induced_subgraph(&hood)?;
    let (same, total) = same_label_edges(&induced, &restrict_labels(labels, &map));
    Ok(BridgeRecord {
        u,
        v,
        context: level.map_or_else(|| "original".to_string(), |k| format!("level-{k}")),
        level,
        neighborhood: hood.into_iter().map(to_global).collect(),
        histogram,
        induced_edges: total,
        same_label_edges: same,
        homophily: same as f64 / total as f64,
    })
}
