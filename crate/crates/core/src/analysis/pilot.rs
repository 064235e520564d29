use serde::{Deserialize, Serialize};

use super::homophily::{check_labels, restrict_labels};
use super::{anp_with, homophilic_subgraph, PathKind};
use crate::autodiff::{Matrix, ParamStore, Tape};
use crate::decomposition::decompose;
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeFeatures, NodeLabels};
use crate::layers::{normalize_adjacency, SagPool};
use crate::model::CacoseConfig;
use crate::rng;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnpRecord {
    pub graph_id: String,
    /// `original`, `core-k`, `pooled-k`, or one of those prefixed with
    /// `homophilic-`.
    pub variant: String,
    /// Coreness level, absent for the whole graph.
    pub level: Option<usize>,
    pub hops: usize,
    pub nodes: usize,
    pub edges: usize,
    pub anp: f64,
}

/// Homophilic-to-base ANP ratios at one level and hop length. A ratio is
/// absent when the base ANP is zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelRatio {
    pub level: usize,
    pub hops: usize,
    pub core_ratio: Option<f64>,
    pub pooled_ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PilotReport {
    pub graph_id: String,
    pub levels: Vec<usize>,
    pub records: Vec<AnpRecord>,
    pub original_ratio: Vec<(usize, Option<f64>)>,
    pub ratios: Vec<LevelRatio>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PilotConfig {
    pub top_m: usize,
    pub hops: Vec<usize>,
    pub path_kind: PathKind,
    pub model: CacoseConfig,
}

impl Default for PilotConfig {
    fn default() -> Self {
        PilotConfig {
            top_m: 3,
            hops: vec![4, 5],
            path_kind: PathKind::Paths,
            model: CacoseConfig::default(),
        }
    }
}

/// ANP of the graph, its `top_m` highest coreness levels and their pooled
/// subgraphs, each alongside its homophilic counterpart.
///
/// Pooling scores come from an untrained, seed-fixed SAGPool applied once
/// per level to the level's feature rows; the pooled subgraph is induced on
/// the selected nodes.
pub fn pilot_study(
    graph_id: &str,
    g: &Graph,
    labels: &NodeLabels,
    x: &NodeFeatures,
    config: &PilotConfig,
) -> Result<PilotReport> {
    check_labels(g, labels)?;
    if x.num_nodes() != g.num_nodes() {
        return Err(Error::InvalidInput(format!(
            "{} feature rows for {} nodes",
            x.num_nodes(),
            g.num_nodes()
        )));
    }
    if config.top_m == 0 || config.hops.is_empty() {
        return Err(Error::InvalidConfig("pilot study needs top_m ≥ 1 and at least one hop length".into()));
    }
    let model = &config.model;
    let family = decompose(g, model.decomposition())?.family;
    let mut warnings = Vec::new();
    let levels: Vec<_> = family.levels().iter().rev().take(config.top_m).collect();
    if levels.len() < config.top_m {
        warnings.push(format!(
            "requested {} levels but only {} are nonempty",
            config.top_m,
            levels.len()
        ));
    }

    let mut records = Vec::new();
    let mut push = |variant: String, level: Option<usize>, graph: &Graph| -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(config.hops.len());
        for &hops in &config.hops {
            let anp = anp_with(graph, hops, config.path_kind)?;
            records.push(AnpRecord {
                graph_id: graph_id.to_string(),
                variant: variant.clone(),
                level,
                hops,
                nodes: graph.num_nodes(),
                edges: graph.num_edges(),
                anp,
            });
            out.push(anp);
        }
        Ok(out)
    };
    let ratio = |h: &[f64], base: &[f64]| -> Vec<Option<f64>> {
        h.iter().zip(base).map(|(&a, &b)| (b > 0.0).then(|| a / b)).collect()
    };

    let base = push("original".into(), None, g)?;
    let homo = push("homophilic-original".into(), None, &homophilic_subgraph(g, labels)?)?;
    let original_ratio = config.hops.iter().copied().zip(ratio(&homo, &base)).collect();

    let mut ratios = Vec::new();
    for level in &levels {
        let k = level.k;
        let sub = &level.subgraph;
        let sub_labels = restrict_labels(labels, sub.nodes());
        let core = push(format!("core-{k}"), Some(k), sub.graph())?;
        let core_h = push(
            format!("homophilic-core-{k}"),
            Some(k),
            &homophilic_subgraph(sub.graph(), &sub_labels)?,
        )?;

        let selected = pilot_selection(sub.graph(), sub.nodes(), x, model, k)?;
        let (pooled, local) = sub.graph().induced_subgraph(&selected)?;
        let pooled_labels = restrict_labels(&sub_labels, &local);
        let pool = push(format!("pooled-{k}"), Some(k), &pooled)?;
        let pool_h = push(
            format!("homophilic-pooled-{k}"),
            Some(k),
            &homophilic_subgraph(&pooled, &pooled_labels)?,
        )?;

        for (i, (c, p)) in ratio(&core_h, &core).into_iter().zip(ratio(&pool_h, &pool)).enumerate() {
            ratios.push(LevelRatio {
                level: k,
                hops: config.hops[i],
                core_ratio: c,
                pooled_ratio: p,
            });
        }
    }

    Ok(PilotReport {
        graph_id: graph_id.to_string(),
        levels: levels.iter().map(|l| l.k).collect(),
        records,
        original_ratio,
        ratios,
        warnings,
    })
}

/// Local indices chosen by an untrained SAGPool on one level subgraph.
pub fn pilot_selection(
    sub: &Graph,
    global_nodes: &[usize],
    x: &NodeFeatures,
    config: &CacoseConfig,
    k: usize,
) -> Result<Vec<usize>> {
    let mut store = ParamStore::new();
    let pool = SagPool::new(
        &mut store,
        "pilot",
        x.dim(),
        config.pooling_ratio,
        config.score_activation,
        &mut rng::indexed_stream(config.seed, "init.pilot", k as u64),
    )?;
    let mut feats = Matrix::zeros(global_nodes.len(), x.dim());
    for (i, &v) in global_nodes.iter().enumerate() {
        feats.row_mut(i).copy_from_slice(x.matrix().row(v));
    }
    let mut tape = Tape::new();
    let a_hat = tape.constant(normalize_adjacency(sub))?;
    let h = tape.constant(feats)?;
    let mut selected = pool.forward(&mut tape, &store, a_hat, h)?.selected;
    selected.sort_unstable();
    Ok(selected)
}
