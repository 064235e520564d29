use crate::error::{Error, Result};
use crate::graph::{Graph, NodeLabels};

/// Same node set, keeping only the edges whose endpoints share a label.
pub fn homophilic_subgraph(g: &Graph, labels: &NodeLabels) -> Result<Graph> {
    check_labels(g, labels)?;
    Ok(g.filter_edges(|u, v| labels.get(u) == labels.get(v)))
}

pub(crate) fn check_labels(g: &Graph, labels: &NodeLabels) -> Result<()> {
    if labels.len() != g.num_nodes() {
        return Err(Error::InvalidInput(format!(
            "{} labels for {} nodes",
            labels.len(),
            g.num_nodes()
        )));
    }
    Ok(())
}

/// Labels of `nodes`, in order, with the class count of `labels` kept.
pub(crate) fn restrict_labels(labels: &NodeLabels, nodes: &[usize]) -> NodeLabels {
    NodeLabels::with_classes(nodes.iter().map(|&v| labels.get(v)).collect(), labels.num_classes())
        .expect("restricted labels stay in range")
}

/// `(same-label edges, edges)` of `g`.
pub fn same_label_edges(g: &Graph, labels: &NodeLabels) -> (usize, usize) {
    let same = g.edges().iter().filter(|&&(u, v)| labels.get(u) == labels.get(v)).count();
    (same, g.num_edges())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keeps_only_same_label_edges() {
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        let h = homophilic_subgraph(&g, &NodeLabels::new(vec![0, 0, 1, 1])).unwrap();
        assert_eq!(h.edges(), &[(0, 1), (2, 3)]);
        let h2 = homophilic_subgraph(&h, &NodeLabels::new(vec![0, 0, 1, 1])).unwrap();
        assert_eq!(h, h2);
    }
}
