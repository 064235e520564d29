use std::time::Instant;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::{CacoseConfig, CacoseModel, PreparedGraph, Task};
use crate::autodiff::{softmax_in_place, Adam, Matrix, Tape};
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeFeatures, NodeLabels};
use crate::io::split::{make_split, Partition, SplitAssignment};
use crate::rng;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpochRecord {
    pub epoch: usize,
    pub train_loss: f64,
    pub train_acc: f64,
    pub val_loss: f64,
    pub val_acc: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainReport {
    pub task: Task,
    pub seed: u64,
    pub epochs: Vec<EpochRecord>,
    pub best_epoch: usize,
    pub best_val_acc: f64,
    pub test_acc: f64,
    pub stopped_early: bool,
    pub num_params: usize,
    /// Excluded from the serialized report so reports are reproducible byte
    /// for byte; written separately by the CLI.
    #[serde(skip)]
    pub wall_clock_secs: f64,
}

impl TrainReport {
    pub fn epochs_run(&self) -> usize {
        self.epochs.len()
    }
}

/// Mean cross-entropy and accuracy of `logits` rows `idx` against `targets`.
pub fn loss_and_accuracy(logits: &Matrix, idx: &[usize], targets: &[usize]) -> (f64, f64) {
    if idx.is_empty() {
        return (0.0, 0.0);
    }
    let mut loss = 0.0;
    let mut correct = 0;
    for &i in idx {
        let mut p = logits.row(i).to_vec();
        softmax_in_place(&mut p);
        loss -= p[targets[i]].max(f64::MIN_POSITIVE).ln();
        if logits.argmax_row(i) == targets[i] {
            correct += 1;
        }
    }
    (loss / idx.len() as f64, correct as f64 / idx.len() as f64)
}

/// Fraction of rows `idx` whose argmax equals the target.
pub fn accuracy(logits: &Matrix, idx: &[usize], targets: &[usize]) -> f64 {
    loss_and_accuracy(logits, idx, targets).1
}

/// Early-stopping bookkeeping: an epoch improves on the best if its
/// validation accuracy is higher, or equal with a lower validation loss.
struct EarlyStop {
    patience: usize,
    best: Option<(f64, f64)>,
    best_epoch: usize,
    since_best: usize,
}

impl EarlyStop {
    fn new(patience: usize) -> Self {
        EarlyStop {
            patience,
            best: None,
            best_epoch: 0,
            since_best: 0,
        }
    }

    /// Returns whether `epoch` is the new best.
    fn observe(&mut self, epoch: usize, val_acc: f64, val_loss: f64) -> bool {
        let improved = match self.best {
            None => true,
            Some((acc, loss)) => val_acc > acc || (val_acc == acc && val_loss < loss),
        };
        if improved {
            self.best = Some((val_acc, val_loss));
            self.best_epoch = epoch;
            self.since_best = 0;
        } else {
            self.since_best += 1;
        }
        improved
    }

    fn exhausted(&self) -> bool {
        self.since_best >= self.patience
    }
}

/// Full-batch node classification.
///
/// Each epoch runs one forward pass; the metrics of epoch `e` describe the
/// parameters before that epoch's update, and the best-validation
/// parameters are kept as the returned model.
pub fn train_node_classifier(
    g: &Graph,
    x: &NodeFeatures,
    labels: &NodeLabels,
    config: &CacoseConfig,
) -> Result<(CacoseModel, TrainReport)> {
    if labels.len() != g.num_nodes() {
        return Err(Error::InvalidInput(format!(
            "{} labels for {} nodes",
            labels.len(),
            g.num_nodes()
        )));
    }
    let split = make_split(g.num_nodes(), config.split, config.seed)?;
    let prepared = PreparedGraph::from_graph(g, x, config)?;
    train_node_classifier_prepared(&prepared, labels, &split, config)
}

pub fn train_node_classifier_prepared(
    prepared: &PreparedGraph,
    labels: &NodeLabels,
    split: &SplitAssignment,
    config: &CacoseConfig,
) -> Result<(CacoseModel, TrainReport)> {
    let start = Instant::now();
    let targets = labels.as_slice();
    let num_classes = labels.num_classes().max(1);
    let mut model = CacoseModel::new(config.clone(), prepared.feature_dim, num_classes)?;
    model.ensure_levels(&prepared.ks())?;

    let train_targets: Vec<usize> = split.train.iter().map(|&i| targets[i]).collect();
    let mut adam = Adam::new(config.learning_rate, config.weight_decay);
    let mut stop = EarlyStop::new(config.patience);
    let mut best_store = model.store.clone();
    let mut test_acc = 0.0;
    let mut epochs = Vec::new();

    for epoch in 0..config.max_epochs {
        let mut tape = Tape::new();
        let out = model.forward(&mut tape, prepared)?;
        let logits = model.predict_nodes(&mut tape, out.z_v)?;
        let train_logits = tape.gather_rows(logits, &split.train)?;
        let loss = tape.cross_entropy(train_logits, &train_targets)?;
        let train_loss = tape.value(loss).get(0, 0);
        let logit_values = tape.value(logits).clone();
        let grads = tape.backward(loss)?;

        let train_acc = accuracy(&logit_values, &split.train, targets);
        let (val_loss, val_acc) = loss_and_accuracy(&logit_values, &split.val, targets);
        epochs.push(EpochRecord {
            epoch,
            train_loss,
            train_acc,
            val_loss,
            val_acc,
        });
        if stop.observe(epoch, val_acc, val_loss) {
            best_store = model.store.clone();
            test_acc = accuracy(&logit_values, &split.test, targets);
        }
        if stop.exhausted() {
            break;
        }
        adam.step(&mut model.store, grads.param_grads());
    }

    let stopped_early = epochs.len() < config.max_epochs;
    model.store = best_store;
    let report = TrainReport {
        task: Task::Node,
        seed: config.seed,
        best_epoch: stop.best_epoch,
        best_val_acc: stop.best.map_or(0.0, |b| b.0),
        test_acc,
        stopped_early,
        num_params: model.store.num_scalars(),
        epochs,
        wall_clock_secs: start.elapsed().as_secs_f64(),
    };
    Ok((model, report))
}

/// One labelled graph of a graph-classification dataset.
#[derive(Debug, Clone)]
pub struct GraphSample {
    pub id: String,
    pub graph: Graph,
    pub features: NodeFeatures,
    pub label: usize,
}

/// Decomposes every sample; graphs without edges are rejected by id.
pub fn prepare_graphs(samples: &[GraphSample], config: &CacoseConfig) -> Result<Vec<PreparedGraph>> {
    samples
        .iter()
        .map(|s| {
            if s.graph.num_edges() == 0 {
                return Err(Error::InvalidInput(format!("graph {:?} has no edges", s.id)));
            }
            PreparedGraph::from_graph(&s.graph, &s.features, config)
        })
        .collect()
}

/// Every class that occurs needs at least three graphs.
pub fn check_class_sizes(samples: &[GraphSample]) -> Result<()> {
    let mut counts = std::collections::BTreeMap::new();
    for s in samples {
        *counts.entry(s.label).or_insert(0usize) += 1;
    }
    match counts.iter().find(|&(_, &c)| c < 3) {
        Some((label, c)) => Err(Error::InvalidInput(format!("class {label} has {c} graphs, at least 3 needed"))),
        None => Ok(()),
    }
}

/// Per-graph episodes: forward, cross-entropy on the graph logits, backward
/// and an optimizer step for every training graph, in a seeded order.
pub fn train_graph_classifier(samples: &[GraphSample], config: &CacoseConfig) -> Result<(CacoseModel, TrainReport)> {
    if samples.is_empty() {
        return Err(Error::InvalidInput("empty graph dataset".into()));
    }
    check_class_sizes(samples)?;
    let prepared = prepare_graphs(samples, config)?;
    let split = make_split(samples.len(), config.split, config.seed)?;
    train_graph_classifier_prepared(samples, &prepared, &split, config)
}

pub fn train_graph_classifier_prepared(
    samples: &[GraphSample],
    prepared: &[PreparedGraph],
    split: &SplitAssignment,
    config: &CacoseConfig,
) -> Result<(CacoseModel, TrainReport)> {
    let start = Instant::now();
    let in_dim = samples[0].features.dim();
    let num_classes = samples.iter().map(|s| s.label).max().unwrap_or(0) + 1;
    let targets: Vec<usize> = samples.iter().map(|s| s.label).collect();

    let mut model = CacoseModel::new(config.clone(), in_dim, num_classes)?;
    for p in prepared {
        model.ensure_levels(&p.ks())?;
    }
    let mut adam = Adam::new(config.learning_rate, config.weight_decay);
    let mut stop = EarlyStop::new(config.patience);
    let mut best_store = model.store.clone();
    let mut test_acc = 0.0;
    let mut epochs = Vec::new();
    let mut order = split.train.clone();

    for epoch in 0..config.max_epochs {
        order.shuffle(&mut rng::indexed_stream(config.seed, "epoch-order", epoch as u64));
        let mut loss_sum = 0.0;
        for &i in &order {
            let mut tape = Tape::new();
            let out = model.forward(&mut tape, &prepared[i])?;
            let z_g = out.z_g.expect("prepared graphs have edges");
            let logits = model.predict_graph(&mut tape, z_g)?;
            let loss = tape.cross_entropy(logits, &[targets[i]])?;
            loss_sum += tape.value(loss).get(0, 0);
            let grads = tape.backward(loss)?;
            adam.step(&mut model.store, grads.param_grads());
        }

        let logits = graph_logit_matrix(&model, prepared)?;
        let train_acc = accuracy(&logits, &split.train, &targets);
        let (val_loss, val_acc) = loss_and_accuracy(&logits, &split.val, &targets);
        epochs.push(EpochRecord {
            epoch,
            train_loss: loss_sum / order.len().max(1) as f64,
            train_acc,
            val_loss,
            val_acc,
        });
        if stop.observe(epoch, val_acc, val_loss) {
            best_store = model.store.clone();
            test_acc = accuracy(&logits, &split.test, &targets);
        }
        if stop.exhausted() {
            break;
        }
    }

    let stopped_early = epochs.len() < config.max_epochs;
    model.store = best_store;
    let report = TrainReport {
        task: Task::Graph,
        seed: config.seed,
        best_epoch: stop.best_epoch,
        best_val_acc: stop.best.map_or(0.0, |b| b.0),
        test_acc,
        stopped_early,
        num_params: model.store.num_scalars(),
        epochs,
        wall_clock_secs: start.elapsed().as_secs_f64(),
    };
    Ok((model, report))
}

/// `len × C` matrix of graph logits, one row per prepared graph.
pub fn graph_logit_matrix(model: &CacoseModel, prepared: &[PreparedGraph]) -> Result<Matrix> {
    let rows = prepared
        .iter()
        .map(|p| model.graph_logits(p).map(|m| m.data().to_vec()))
        .collect::<Result<Vec<_>>>()?;
    Ok(Matrix::from_rows(&rows))
}

/// Node-classification accuracy of `model` on one partition.
pub fn evaluate_nodes(
    model: &CacoseModel,
    prepared: &PreparedGraph,
    labels: &NodeLabels,
    split: &SplitAssignment,
    part: Partition,
) -> Result<f64> {
    let logits = model.node_logits(prepared)?;
    Ok(accuracy(&logits, split.part(part), labels.as_slice()))
}

/// Graph-classification accuracy of `model` on one partition.
pub fn evaluate_graphs(
    model: &CacoseModel,
    prepared: &[PreparedGraph],
    targets: &[usize],
    split: &SplitAssignment,
    part: Partition,
) -> Result<f64> {
    let logits = graph_logit_matrix(model, prepared)?;
    Ok(accuracy(&logits, split.part(part), targets))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedResult {
    pub seed: u64,
    pub test_acc: f64,
    pub best_epoch: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiSeedSummary {
    pub runs: Vec<SeedResult>,
    pub mean_test_acc: f64,
    pub std_test_acc: f64,
}

impl MultiSeedSummary {
    pub fn from_reports(reports: &[TrainReport]) -> Self {
        let runs: Vec<SeedResult> = reports
            .iter()
            .map(|r| SeedResult {
                seed: r.seed,
                test_acc: r.test_acc,
                best_epoch: r.best_epoch,
            })
            .collect();
        let n = runs.len().max(1) as f64;
        let mean = runs.iter().map(|r| r.test_acc).sum::<f64>() / n;
        let var = runs.iter().map(|r| (r.test_acc - mean).powi(2)).sum::<f64>() / n;
        MultiSeedSummary {
            runs,
            mean_test_acc: mean,
            std_test_acc: var.sqrt(),
        }
    }
}

/// Repeats node classification per seed; each seed reshuffles the split and
/// reinitializes every parameter.
pub fn multi_seed_node_classification(
    g: &Graph,
    x: &NodeFeatures,
    labels: &NodeLabels,
    config: &CacoseConfig,
    seeds: &[u64],
) -> Result<(MultiSeedSummary, Vec<TrainReport>)> {
    let prepared = PreparedGraph::from_graph(g, x, config)?;
    let mut reports = Vec::with_capacity(seeds.len());
    for &seed in seeds {
        let cfg = CacoseConfig { seed, ..config.clone() };
        let split = make_split(g.num_nodes(), cfg.split, seed)?;
        reports.push(train_node_classifier_prepared(&prepared, labels, &split, &cfg)?.1);
    }
    Ok((MultiSeedSummary::from_reports(&reports), reports))
}

/// Graph-classification counterpart of [`multi_seed_node_classification`].
pub fn multi_seed_graph_classification(
    samples: &[GraphSample],
    config: &CacoseConfig,
    seeds: &[u64],
) -> Result<(MultiSeedSummary, Vec<TrainReport>)> {
    check_class_sizes(samples)?;
    let prepared = prepare_graphs(samples, config)?;
    let mut reports = Vec::with_capacity(seeds.len());
    for &seed in seeds {
        let cfg = CacoseConfig { seed, ..config.clone() };
        let split = make_split(samples.len(), cfg.split, seed)?;
        reports.push(train_graph_classifier_prepared(samples, &prepared, &split, &cfg)?.1);
    }
    Ok((MultiSeedSummary::from_reports(&reports), reports))
}
