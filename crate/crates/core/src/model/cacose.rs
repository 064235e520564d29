use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{CacoseConfig, Task};
use crate::autodiff::{Matrix, ParamId, ParamStore, Tape, Var};
use crate::decomposition::{decompose, SubgraphFamily};
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeFeatures};
use crate::layers::{normalize_adjacency, Activation, CrossAttention, GcnLayer, MlpHead, SagPool};
use crate::rng;

/// GCN stack and pooling for one coreness level.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LevelEncoder {
    pub k: usize,
    pub gcn: Vec<GcnLayer>,
    pub pool: SagPool,
}

/// One level of a graph, ready for the forward pass.
#[derive(Debug, Clone)]
pub struct PreparedLevel {
    pub k: usize,
    /// Local → global node map.
    pub nodes: Vec<usize>,
    pub a_hat: Matrix,
    /// Rows of `X` for `nodes`.
    pub features: Matrix,
}

/// A graph with its subgraph family and per-level `Â` precomputed.
#[derive(Debug, Clone)]
pub struct PreparedGraph {
    pub num_nodes: usize,
    pub feature_dim: usize,
    pub levels: Vec<PreparedLevel>,
}

impl PreparedGraph {
    /// Pairs `family` with the rows of `x`. `family` must come from a graph
    /// with `x.num_nodes()` nodes.
    pub fn new(family: &SubgraphFamily, x: &NodeFeatures) -> Result<Self> {
        if family.num_nodes() != x.num_nodes() {
            return Err(Error::InvalidInput(format!(
                "subgraph family covers {} nodes but features have {} rows",
                family.num_nodes(),
                x.num_nodes()
            )));
        }
        let levels = family
            .levels()
            .iter()
            .map(|level| {
                let sub = &level.subgraph;
                let mut features = Matrix::zeros(sub.num_nodes(), x.dim());
                for (i, &v) in sub.nodes().iter().enumerate() {
                    features.row_mut(i).copy_from_slice(x.matrix().row(v));
                }
                PreparedLevel {
                    k: level.k,
                    nodes: sub.nodes().to_vec(),
                    a_hat: normalize_adjacency(sub.graph()),
                    features,
                }
            })
            .collect();
        Ok(PreparedGraph {
            num_nodes: x.num_nodes(),
            feature_dim: x.dim(),
            levels,
        })
    }

    /// Decomposes `g` with the config's threshold and prepares it.
    pub fn from_graph(g: &Graph, x: &NodeFeatures, config: &CacoseConfig) -> Result<Self> {
        if g.num_nodes() != x.num_nodes() {
            return Err(Error::InvalidInput(format!(
                "graph has {} nodes but features have {} rows",
                g.num_nodes(),
                x.num_nodes()
            )));
        }
        let d = decompose(g, config.decomposition())?;
        Self::new(&d.family, x)
    }

    pub fn ks(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.k).collect()
    }
}

/// Per-level intermediates of a forward pass, for inspection and tests.
#[derive(Debug)]
pub struct LevelTrace {
    pub k: usize,
    /// Final GCN embeddings `H_k`.
    pub h: Var,
    /// Pooled embedding `Z_k`.
    pub z: Var,
    pub selected: Vec<usize>,
    pub scores: Vec<f64>,
}

#[derive(Debug)]
pub struct ForwardOutput {
    /// `N_v × (h + d_S)`.
    pub z_v: Var,
    /// `1 × d_S`; `None` when the graph has no levels.
    pub z_g: Option<Var>,
    /// Cross-attended subgraph embeddings, one row per level.
    pub z_attn: Option<Var>,
    pub levels: Vec<LevelTrace>,
    pub attention_weights: Vec<Matrix>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CacoseModel {
    pub config: CacoseConfig,
    pub in_dim: usize,
    pub num_classes: usize,
    pub store: ParamStore,
    encoders: BTreeMap<usize, LevelEncoder>,
    attention: CrossAttention,
    pool_proj: Option<ParamId>,
    node_head: MlpHead,
    graph_head: MlpHead,
}

impl CacoseModel {
    /// Fresh model. Every parameter group draws from its own seeded stream, so
    /// the values do not depend on the order in which levels appear.
    pub fn new(config: CacoseConfig, in_dim: usize, num_classes: usize) -> Result<Self> {
        config.validate()?;
        if in_dim == 0 || num_classes == 0 {
            return Err(Error::InvalidConfig("input dim and class count must be positive".into()));
        }
        let seed = config.seed;
        let mut store = ParamStore::new();
        let (h, ds) = (config.hidden_dim, config.subgraph_dim);
        let attention = CrossAttention::new(
            &mut store,
            "attention",
            ds,
            config.heads,
            &mut rng::stream(seed, "init.attention"),
        )?;
        let pool_proj = if h != ds {
            Some(store.register_glorot("pool_proj", h, ds, &mut rng::stream(seed, "init.pool_proj"))?)
        } else {
            None
        };
        let node_head = MlpHead::new(
            &mut store,
            "node_head",
            h + ds,
            config.mlp_hidden,
            num_classes,
            &mut rng::stream(seed, "init.node_head"),
        )?;
        let graph_head = MlpHead::new(
            &mut store,
            "graph_head",
            ds,
            config.mlp_hidden,
            num_classes,
            &mut rng::stream(seed, "init.graph_head"),
        )?;
        Ok(CacoseModel {
            config,
            in_dim,
            num_classes,
            store,
            encoders: BTreeMap::new(),
            attention,
            pool_proj,
            node_head,
            graph_head,
        })
    }

    /// Creates encoders for any level in `ks` not seen before.
    pub fn ensure_levels(&mut self, ks: &[usize]) -> Result<()> {
        for &k in ks {
            if self.encoders.contains_key(&k) {
                continue;
            }
            let mut r = rng::indexed_stream(self.config.seed, "init.level", k as u64);
            let mut gcn = Vec::with_capacity(self.config.num_gcn_layers);
            for i in 0..self.config.num_gcn_layers {
                let in_dim = if i == 0 { self.in_dim } else { self.config.hidden_dim };
                gcn.push(GcnLayer::new(
                    &mut self.store,
                    &format!("level{k}.gcn{i}"),
                    in_dim,
                    self.config.hidden_dim,
                    Activation::Relu,
                    &mut r,
                )?);
            }
            let pool = SagPool::new(
                &mut self.store,
                &format!("level{k}.pool"),
                self.config.hidden_dim,
                self.config.pooling_ratio,
                self.config.score_activation,
                &mut r,
            )?;
            self.encoders.insert(k, LevelEncoder { k, gcn, pool });
        }
        Ok(())
    }

    pub fn encoder(&self, k: usize) -> Option<&LevelEncoder> {
        self.encoders.get(&k)
    }

    pub fn levels(&self) -> Vec<usize> {
        self.encoders.keys().copied().collect()
    }

    pub fn attention(&self) -> &CrossAttention {
        &self.attention
    }

    pub fn pool_projection(&self) -> Option<ParamId> {
        self.pool_proj
    }

    pub fn node_head(&self) -> &MlpHead {
        &self.node_head
    }

    pub fn graph_head(&self) -> &MlpHead {
        &self.graph_head
    }

    /// Width of a `Z_v` row.
    pub fn node_embedding_dim(&self) -> usize {
        self.config.hidden_dim + self.config.subgraph_dim
    }

    /// Runs the full pipeline with the model's own parameters.
    pub fn forward(&self, tape: &mut Tape, graph: &PreparedGraph) -> Result<ForwardOutput> {
        self.forward_with(tape, &self.store, graph)
    }

    /// Runs the full pipeline reading parameters from `store`, which must have
    /// this model's layout (e.g. a perturbed clone of `self.store`).
    pub fn forward_with(&self, tape: &mut Tape, store: &ParamStore, graph: &PreparedGraph) -> Result<ForwardOutput> {
        if graph.feature_dim != self.in_dim {
            return Err(Error::ShapeMismatch {
                op: "forward",
                lhs: (graph.num_nodes, graph.feature_dim),
                rhs: (graph.num_nodes, self.in_dim),
            });
        }
        let n = graph.num_nodes;
        let width = self.node_embedding_dim();
        if graph.levels.is_empty() {
            let z_v = tape.constant(Matrix::zeros(n, width))?;
            return Ok(ForwardOutput {
                z_v,
                z_g: None,
                z_attn: None,
                levels: Vec::new(),
                attention_weights: Vec::new(),
            });
        }

        let mut traces = Vec::with_capacity(graph.levels.len());
        for level in &graph.levels {
            let enc = self.encoders.get(&level.k).ok_or_else(|| {
                Error::InvalidInput(format!("no encoder for level {}; call ensure_levels first", level.k))
            })?;
            let a_hat = tape.constant(level.a_hat.clone())?;
            let mut h = tape.constant(level.features.clone())?;
            for layer in &enc.gcn {
                h = layer.forward(tape, store, a_hat, h)?;
            }
            let pooled = enc.pool.forward(tape, store, a_hat, h)?;
            traces.push(LevelTrace {
                k: level.k,
                h,
                z: pooled.z,
                selected: pooled.selected,
                scores: pooled.scores,
            });
        }

        let rows: Vec<Var> = traces.iter().map(|t| t.z).collect();
        let mut z_s = tape.concat_rows(&rows)?;
        if let Some(p) = self.pool_proj {
            let w = tape.param(store, p)?;
            z_s = tape.matmul(z_s, w)?;
        }
        let att = self.attention.forward(tape, store, z_s)?;
        let z_attn = att.out;
        let z_g = tape.mean_rows(z_attn)?;

        let mut z_v: Option<Var> = None;
        for (i, (trace, level)) in traces.iter().zip(&graph.levels).enumerate() {
            let row = tape.gather_rows(z_attn, &[i])?;
            let rep = tape.repeat_rows(row, level.nodes.len())?;
            let cat = tape.concat_cols(&[trace.h, rep])?;
            let placed = tape.scatter_rows(cat, &level.nodes, n)?;
            z_v = Some(match z_v {
                None => placed,
                Some(acc) => tape.add(acc, placed)?,
            });
        }

        Ok(ForwardOutput {
            z_v: z_v.expect("at least one level"),
            z_g: Some(z_g),
            z_attn: Some(z_attn),
            levels: traces,
            attention_weights: att.weights,
        })
    }

    pub fn predict_nodes(&self, tape: &mut Tape, z_v: Var) -> Result<Var> {
        self.node_head.forward(tape, &self.store, z_v)
    }

    pub fn predict_graph(&self, tape: &mut Tape, z_g: Var) -> Result<Var> {
        self.graph_head.forward(tape, &self.store, z_g)
    }

    /// Task head reading parameters from `store`; pairs with [`Self::forward_with`].
    pub fn head_with(&self, task: Task, tape: &mut Tape, store: &ParamStore, x: Var) -> Result<Var> {
        match task {
            Task::Node => self.node_head.forward(tape, store, x),
            Task::Graph => self.graph_head.forward(tape, store, x),
        }
    }

    /// Node-class logits as a plain matrix.
    pub fn node_logits(&self, graph: &PreparedGraph) -> Result<Matrix> {
        let mut tape = Tape::new();
        let out = self.forward(&mut tape, graph)?;
        let logits = self.predict_nodes(&mut tape, out.z_v)?;
        Ok(tape.value(logits).clone())
    }

    /// Graph-class logits (`1 × C`).
    pub fn graph_logits(&self, graph: &PreparedGraph) -> Result<Matrix> {
        let mut tape = Tape::new();
        let out = self.forward(&mut tape, graph)?;
        let z_g = out
            .z_g
            .ok_or_else(|| Error::InvalidInput("graph has no edges, so no graph embedding".into()))?;
        let logits = self.predict_graph(&mut tape, z_g)?;
        Ok(tape.value(logits).clone())
    }

    /// Restores derived indices after deserialization.
    pub fn after_load(&mut self) -> Result<()> {
        self.store.reindex()
    }
}
