//! Command-line entry point. Every subcommand writes its outputs into one
//! run directory; see `FORMATS.md` for the file layouts.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use super::{load_dataset, make_split, DataPaths, Partition, RunConfig, OUT_ENV};
use crate::analysis::{
    bridge_analysis, pilot_study, scalability_study, PathKind, PilotConfig, ScalabilityConfig,
};
use crate::curvature::{edge_curvatures, SIGN_TOLERANCE};
use crate::decomposition::{decompose, scoped_support, DecompositionConfig, SupportScope};
use crate::error::{Error, Result};
use crate::graph::format::write_edge_list;
use crate::model::train::{
    accuracy, graph_logit_matrix, prepare_graphs, train_graph_classifier, train_node_classifier, MultiSeedSummary,
    TrainReport,
};
use crate::model::{CacoseConfig, CacoseModel, PreparedGraph, Task};

#[derive(Debug, Parser)]
#[command(name = "cacose", version, about = "Cohesive subgraph decomposition and graph learning")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Core numbers, filtered edge scores and per-level subgraphs.
    ///
    /// Writes manifest.json, cores.csv (node,core), edges.csv
    /// (u,v,coreness,support,score) and level-K.edges / level-K.nodes.
    Decompose {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        decomposition: DecompArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Exact Ollivier-Ricci curvature; checks κ ≤ 0 wherever an edge has no
    /// common neighbor.
    ///
    /// Writes curvature.csv (u,v,support,w1,kappa) and report.json. Exits
    /// nonzero if the sign check fails.
    CurvatureCheck {
        #[command(flatten)]
        graph: GraphArgs,
        /// Which edges to evaluate.
        #[arg(long, value_enum, default_value = "all")]
        edges: EdgeSelection,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Average path counts of the graph, its top levels and their pooled
    /// subgraphs, with homophilic counterparts.
    ///
    /// Writes anp.csv (graph_id,variant,level,hops,nodes,edges,anp) and
    /// report.json.
    PilotStudy {
        #[command(flatten)]
        data: NodeDataArgs,
        /// Number of highest coreness levels to analyse.
        #[arg(long, default_value_t = 3)]
        top_m: usize,
        /// Comma-separated hop lengths.
        #[arg(long, value_delimiter = ',', default_value = "4,5")]
        hops: Vec<usize>,
        /// `paths` (vertex-distinct) or `walks`.
        #[arg(long, default_value = "paths")]
        path_kind: PathKind,
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Label statistics of 2-hop neighborhoods around every bridge.
    ///
    /// Writes bridges.csv (u,v,context,level,neighborhood_size,histogram,
    /// induced_edges,same_label_edges,homophily) and report.json.
    BridgeAnalysis {
        #[command(flatten)]
        data: NodeDataArgs,
        #[command(flatten)]
        decomposition: DecompArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Maximum coreness of Erdős–Rényi graphs over a size × density grid.
    ///
    /// Writes scalability.csv (n,p,seed,edges,max_degree,k_max,skipped),
    /// timing.csv (n,p,elapsed_secs) and report.json.
    Scalability {
        /// Comma-separated node counts.
        #[arg(long, value_delimiter = ',', default_value = "100,1000")]
        sizes: Vec<usize>,
        /// Comma-separated edge probabilities.
        #[arg(long, value_delimiter = ',', default_value = "0.01,0.05,0.1,0.25,0.5")]
        densities: Vec<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        delta: usize,
        /// Largest expected edge count attempted.
        #[arg(long, default_value_t = 5.0e7)]
        edge_budget: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Train a node classifier.
    ///
    /// Writes config.toml, metrics.csv, report.json, model.json and
    /// timing.json; with --seeds, one seed-S/ directory per seed plus
    /// summary.json.
    TrainNc(TrainArgs),
    /// Train a graph classifier; same outputs as train-nc.
    TrainGc(TrainArgs),
    /// Accuracy of a saved model on each split partition.
    ///
    /// Writes report.json and predictions.csv (index,partition,label,predicted).
    Eval {
        /// model.json written by a training run.
        #[arg(long)]
        model: PathBuf,
        /// Run config naming the dataset; data flags override it.
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        data: DataArgs,
        /// Split seed; defaults to the model's training seed.
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
enum EdgeSelection {
    All,
    ZeroSupport,
}

#[derive(Debug, Args)]
struct OutArgs {
    /// Output directory; defaults to $CACOSE_OUT/<subcommand>, or
    /// ./cacose-out/<subcommand> when the variable is unset.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct GraphArgs {
    /// Edge list file.
    #[arg(long)]
    input: PathBuf,
    /// Minimum node count, for trailing isolated nodes.
    #[arg(long, default_value_t = 0)]
    num_nodes: usize,
}

#[derive(Debug, Args)]
struct NodeDataArgs {
    /// Edge list file.
    #[arg(long)]
    input: PathBuf,
    /// Node label file.
    #[arg(long)]
    labels: PathBuf,
    /// Node feature file; degree one-hot features otherwise.
    #[arg(long)]
    features: Option<PathBuf>,
    #[arg(long)]
    degree_cap: Option<usize>,
}

#[derive(Debug, Args)]
struct DecompArgs {
    /// Filtration threshold δ (levels k ≥ δ are filtered).
    #[arg(long, default_value_t = 3)]
    delta: usize,
    /// Where triadic support is counted: `core-subgraph` or `full-graph`.
    #[arg(long, default_value = "core-subgraph")]
    scope: SupportScope,
}

#[derive(Debug, Args, Default)]
struct ModelArgs {
    /// Run config whose [model] table supplies the hyperparameters.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    delta: Option<usize>,
    #[arg(long)]
    pooling_ratio: Option<f64>,
    #[arg(long)]
    heads: Option<usize>,
    #[arg(long)]
    max_epochs: Option<usize>,
    #[arg(long)]
    patience: Option<usize>,
}

#[derive(Debug, Args)]
struct DataArgs {
    /// Edge list of a node dataset.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    labels: Option<PathBuf>,
    #[arg(long)]
    features: Option<PathBuf>,
    /// Graph dataset manifest (`<edge-file> <label> [<feature-file>]` lines).
    #[arg(long)]
    manifest: Option<PathBuf>,
    #[arg(long)]
    degree_cap: Option<usize>,
}

#[derive(Debug, Args)]
struct TrainArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    data: DataArgs,
    /// Comma-separated seeds; one run per seed, each with its own split and
    /// initialization.
    #[arg(long, value_delimiter = ',')]
    seeds: Option<Vec<u64>>,
    #[command(flatten)]
    out: OutArgs,
}

/// Parses `argv` (program name first), runs the subcommand and returns the
/// process exit code. Failures print one `error: <kind>: <message>` line.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    match run(cli.command) {
        Ok(()) => 0,
        Err(Failure::Error(e)) => {
            eprintln!("error: {}: {}", e.kind(), single_line(&e.to_string()));
            1
        }
        Err(Failure::Check(msg)) => {
            eprintln!("error: check-failed: {msg}");
            2
        }
    }
}

fn single_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

enum Failure {
    Error(Error),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

fn out_dir(args: &OutArgs, fallback: Option<&Path>, command: &str) -> Result<PathBuf> {
    let dir = match (&args.out, fallback) {
        (Some(d), _) => d.clone(),
        (None, Some(d)) => d.to_path_buf(),
        (None, None) => std::env::var_os(OUT_ENV)
            .map_or_else(|| PathBuf::from("cacose-out"), PathBuf::from)
            .join(command),
    };
    fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    Ok(dir)
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Decompose {
            graph,
            decomposition,
            out,
        } => cmd_decompose(&graph, &decomposition, &out_dir(&out, None, "decompose")?)?,
        Command::CurvatureCheck { graph, edges, out } => {
            cmd_curvature(&graph, edges, &out_dir(&out, None, "curvature-check")?)?
        }
        Command::PilotStudy {
            data,
            top_m,
            hops,
            path_kind,
            model,
            out,
        } => {
            let config = PilotConfig {
                top_m,
                hops,
                path_kind,
                model: model_config(&model, Task::Node)?,
            };
            cmd_pilot(&data, &config, &out_dir(&out, None, "pilot-study")?)?
        }
        Command::BridgeAnalysis {
            data,
            decomposition,
            out,
        } => cmd_bridges(&data, &decomposition, &out_dir(&out, None, "bridge-analysis")?)?,
        Command::Scalability {
            sizes,
            densities,
            seed,
            delta,
            edge_budget,
            out,
        } => {
            let config = ScalabilityConfig {
                sizes,
                densities,
                seed,
                delta,
                edge_budget,
            };
            cmd_scalability(&config, &out_dir(&out, None, "scalability")?)?
        }
        Command::TrainNc(args) => cmd_train(Task::Node, &args)?,
        Command::TrainGc(args) => cmd_train(Task::Graph, &args)?,
        Command::Eval {
            model,
            config,
            data,
            seed,
            out,
        } => cmd_eval(&model, config.as_deref(), &data, seed, &out)?,
    }
    Ok(())
}

fn load_graph(args: &GraphArgs) -> Result<crate::graph::Graph> {
    crate::graph::format::read_edge_list(&args.input, args.num_nodes)
}

#[derive(Serialize)]
struct LevelEntry {
    k: usize,
    nodes: usize,
    edges: usize,
    edges_file: String,
    nodes_file: String,
}

#[derive(Serialize)]
struct DecomposeManifest {
    input: PathBuf,
    num_nodes: usize,
    num_edges: usize,
    delta: usize,
    scope: SupportScope,
    k_max: usize,
    levels: Vec<LevelEntry>,
    demoted: Vec<(usize, usize)>,
}

#[derive(Serialize)]
struct EdgeRow {
    u: usize,
    v: usize,
    coreness: usize,
    support: usize,
    score: usize,
}

#[derive(Serialize)]
struct CoreRow {
    node: usize,
    core: usize,
}

fn cmd_decompose(args: &GraphArgs, d: &DecompArgs, dir: &Path) -> Result<()> {
    let g = load_graph(args)?;
    let cfg = DecompositionConfig {
        delta: d.delta,
        scope: d.scope,
    };
    let dec = decompose(&g, cfg)?;
    let mut levels = Vec::new();
    for level in dec.family.levels() {
        let sub = &level.subgraph;
        let edges_file = format!("level-{}.edges", level.k);
        let nodes_file = format!("level-{}.nodes", level.k);
        let global = crate::graph::Graph::from_edges(g.num_nodes(), sub.global_edges())?;
        write_edge_list(&dir.join(&edges_file), &global)?;
        let nodes: String = sub.nodes().iter().map(|v| format!("{v}\n")).collect();
        write_text(&dir.join(&nodes_file), &nodes)?;
        levels.push(LevelEntry {
            k: level.k,
            nodes: sub.num_nodes(),
            edges: sub.edge_ids().len(),
            edges_file,
            nodes_file,
        });
    }
    let rows: Vec<EdgeRow> = g
        .edges()
        .iter()
        .enumerate()
        .map(|(id, &(u, v))| {
            let coreness = dec.coreness.get(id);
            EdgeRow {
                u,
                v,
                coreness,
                support: scoped_support(&g, &dec.cores, u, v, coreness, cfg.scope),
                score: dec.scores.get(id),
            }
        })
        .collect();
    write_csv(&dir.join("edges.csv"), &rows)?;
    let cores: Vec<CoreRow> = (0..g.num_nodes())
        .map(|v| CoreRow {
            node: v,
            core: dec.cores.get(v),
        })
        .collect();
    write_csv(&dir.join("cores.csv"), &cores)?;
    let manifest = DecomposeManifest {
        input: args.input.clone(),
        num_nodes: g.num_nodes(),
        num_edges: g.num_edges(),
        delta: cfg.delta,
        scope: cfg.scope,
        k_max: dec.cores.k_max(),
        levels,
        demoted: dec.demoted_edges().iter().map(|&id| g.edges()[id]).collect(),
    };
    write_json(&dir.join("manifest.json"), &manifest)
}

#[derive(Serialize)]
struct CurvatureSummary {
    edges_checked: usize,
    zero_support_edges: usize,
    max_kappa_zero_support: Option<f64>,
    violations: Vec<(usize, usize, f64)>,
    holds: bool,
}

fn cmd_curvature(args: &GraphArgs, sel: EdgeSelection, dir: &Path) -> Result<(), Failure> {
    let g = load_graph(args)?;
    let mut results = edge_curvatures(&g)?;
    if matches!(sel, EdgeSelection::ZeroSupport) {
        results.retain(|r| r.support == 0);
    }
    write_csv(&dir.join("curvature.csv"), &results)?;
    let zero: Vec<_> = results.iter().filter(|r| r.support == 0).collect();
    let violations: Vec<_> = zero
        .iter()
        .filter(|r| r.kappa > SIGN_TOLERANCE)
        .map(|r| (r.u, r.v, r.kappa))
        .collect();
    let summary = CurvatureSummary {
        edges_checked: results.len(),
        zero_support_edges: zero.len(),
        max_kappa_zero_support: zero.iter().map(|r| r.kappa).reduce(f64::max),
        holds: violations.is_empty(),
        violations,
    };
    write_json(&dir.join("report.json"), &summary)?;
    if !summary.holds {
        return Err(Failure::Check(format!(
            "{} zero-support edges with positive curvature",
            summary.violations.len()
        )));
    }
    Ok(())
}

fn load_node_data(args: &NodeDataArgs) -> Result<(crate::graph::Graph, crate::graph::NodeFeatures, crate::graph::NodeLabels)> {
    let mut paths = DataPaths::node(&args.input, Some(args.labels.clone()), args.features.clone());
    paths.degree_cap = args.degree_cap;
    let bundle = load_dataset(&paths)?;
    let (g, x, y) = bundle.node_task()?;
    Ok((g.clone(), x, y.clone()))
}

fn cmd_pilot(data: &NodeDataArgs, config: &PilotConfig, dir: &Path) -> Result<()> {
    let (g, x, y) = load_node_data(data)?;
    let id = data
        .input
        .file_stem()
        .map_or_else(String::new, |s| s.to_string_lossy().into_owned());
    let report = pilot_study(&id, &g, &y, &x, config)?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    write_csv(&dir.join("anp.csv"), &report.records)?;
    write_json(&dir.join("report.json"), &report)
}

#[derive(Serialize)]
struct BridgeRow<'a> {
    u: usize,
    v: usize,
    context: &'a str,
    level: Option<usize>,
    neighborhood_size: usize,
    histogram: String,
    induced_edges: usize,
    same_label_edges: usize,
    homophily: f64,
}

fn cmd_bridges(data: &NodeDataArgs, d: &DecompArgs, dir: &Path) -> Result<()> {
    let (g, _, y) = load_node_data(data)?;
    let cfg = DecompositionConfig {
        delta: d.delta,
        scope: d.scope,
    };
    let family = decompose(&g, cfg)?.family;
    let records = bridge_analysis(&g, &y, &family)?;
    let rows: Vec<BridgeRow> = records
        .iter()
        .map(|r| BridgeRow {
            u: r.u,
            v: r.v,
            context: &r.context,
            level: r.level,
            neighborhood_size: r.neighborhood.len(),
            histogram: r.histogram.iter().map(usize::to_string).collect::<Vec<_>>().join(";"),
            induced_edges: r.induced_edges,
            same_label_edges: r.same_label_edges,
            homophily: r.homophily,
        })
        .collect();
    write_csv(&dir.join("bridges.csv"), &rows)?;
    write_json(&dir.join("report.json"), &records)
}

#[derive(Serialize)]
struct TimingRow {
    n: usize,
    p: f64,
    elapsed_secs: f64,
}

fn cmd_scalability(config: &ScalabilityConfig, dir: &Path) -> Result<()> {
    let records = scalability_study(config)?;
    write_csv(&dir.join("scalability.csv"), &records)?;
    let timing: Vec<TimingRow> = records
        .iter()
        .map(|r| TimingRow {
            n: r.n,
            p: r.p,
            elapsed_secs: r.elapsed_secs,
        })
        .collect();
    write_csv(&dir.join("timing.csv"), &timing)?;
    #[derive(Serialize)]
    struct Report<'a> {
        config: &'a ScalabilityConfig,
        records: &'a [crate::analysis::ScalabilityRecord],
    }
    write_json(&dir.join("report.json"), &Report { config, records: &records })
}

/// Hyperparameters from `--config` (or the task preset) with flag overrides.
fn model_config(args: &ModelArgs, task: Task) -> Result<CacoseConfig> {
    let mut cfg = match &args.config {
        Some(p) => RunConfig::load(p)?.model,
        None => CacoseConfig::for_task(task),
    };
    apply_overrides(&mut cfg, args);
    cfg.validate()?;
    Ok(cfg)
}

fn apply_overrides(cfg: &mut CacoseConfig, args: &ModelArgs) {
    if let Some(v) = args.seed {
        cfg.seed = v;
    }
    if let Some(v) = args.delta {
        cfg.delta = v;
    }
    if let Some(v) = args.pooling_ratio {
        cfg.pooling_ratio = v;
    }
    if let Some(v) = args.heads {
        cfg.heads = v;
    }
    if let Some(v) = args.max_epochs {
        cfg.max_epochs = v;
    }
    if let Some(v) = args.patience {
        cfg.patience = v;
    }
}

fn apply_data_overrides(paths: &mut DataPaths, args: &DataArgs) {
    let given = args.input.is_some() || args.manifest.is_some();
    if given {
        paths.edges = args.input.clone();
        paths.manifest = args.manifest.clone();
        paths.labels = None;
        paths.features = None;
    }
    if args.labels.is_some() {
        paths.labels = args.labels.clone();
    }
    if args.features.is_some() {
        paths.features = args.features.clone();
    }
    if args.degree_cap.is_some() {
        paths.degree_cap = args.degree_cap;
    }
}

#[derive(Serialize)]
struct MetricsRow {
    seed: u64,
    epoch: usize,
    train_loss: f64,
    train_acc: f64,
    val_loss: f64,
    val_acc: f64,
}

#[derive(Serialize)]
struct Timing {
    wall_clock_secs: f64,
}

fn cmd_train(task: Task, args: &TrainArgs) -> Result<()> {
    let mut run = match &args.model.config {
        Some(p) => {
            let run = RunConfig::load(p)?;
            if run.task != task {
                return Err(Error::InvalidConfig(format!(
                    "config task is {:?} but the subcommand trains {task:?}",
                    run.task
                )));
            }
            run
        }
        None => RunConfig::new(task, DataPaths::default()),
    };
    apply_overrides(&mut run.model, &args.model);
    apply_data_overrides(&mut run.data, &args.data);
    run.model.validate()?;
    let command = match task {
        Task::Node => "train-nc",
        Task::Graph => "train-gc",
    };
    let dir = out_dir(&args.out, run.out.as_deref(), command)?;
    let bundle = load_dataset(&run.data)?;

    let seeds = args.seeds.clone().unwrap_or_else(|| vec![run.model.seed]);
    let mut reports = Vec::new();
    for &seed in &seeds {
        let mut cfg = run.clone();
        cfg.model.seed = seed;
        let seed_dir = if args.seeds.is_some() {
            let d = dir.join(format!("seed-{seed}"));
            fs::create_dir_all(&d).map_err(|e| Error::io(&d, e))?;
            d
        } else {
            dir.clone()
        };
        let (model, report) = match task {
            Task::Node => {
                let (g, x, y) = bundle.node_task()?;
                train_node_classifier(g, &x, y, &cfg.model)?
            }
            Task::Graph => train_graph_classifier(&bundle.graph_samples()?, &cfg.model)?,
        };
        write_run(&seed_dir, &cfg, &model, &report)?;
        reports.push(report);
    }
    if args.seeds.is_some() {
        write_json(&dir.join("summary.json"), &MultiSeedSummary::from_reports(&reports))?;
    }
    Ok(())
}

fn write_run(dir: &Path, cfg: &RunConfig, model: &CacoseModel, report: &TrainReport) -> Result<()> {
    write_text(&dir.join("config.toml"), &cfg.to_toml()?)?;
    let rows: Vec<MetricsRow> = report
        .epochs
        .iter()
        .map(|e| MetricsRow {
            seed: report.seed,
            epoch: e.epoch,
            train_loss: e.train_loss,
            train_acc: e.train_acc,
            val_loss: e.val_loss,
            val_acc: e.val_acc,
        })
        .collect();
    write_csv(&dir.join("metrics.csv"), &rows)?;
    write_json(&dir.join("report.json"), report)?;
    write_json(&dir.join("model.json"), model)?;
    write_json(
        &dir.join("timing.json"),
        &Timing {
            wall_clock_secs: report.wall_clock_secs,
        },
    )
}

/// Reads a model written by a training run.
pub fn load_model(path: &Path) -> Result<CacoseModel> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut model: CacoseModel = serde_json::from_str(&text)?;
    model.after_load()?;
    Ok(model)
}

#[derive(Serialize)]
struct EvalReport {
    task: Task,
    seed: u64,
    train_acc: f64,
    val_acc: f64,
    test_acc: f64,
}

#[derive(Serialize)]
struct PredictionRow {
    index: usize,
    partition: Partition,
    label: usize,
    predicted: usize,
}

fn cmd_eval(model_path: &Path, config: Option<&Path>, data: &DataArgs, seed: Option<u64>, out: &OutArgs) -> Result<()> {
    let model = load_model(model_path)?;
    let mut paths = match config {
        Some(p) => RunConfig::load(p)?.data,
        None => DataPaths::default(),
    };
    apply_data_overrides(&mut paths, data);
    let bundle = load_dataset(&paths)?;
    let seed = seed.unwrap_or(model.config.seed);
    let dir = out_dir(out, None, "eval")?;

    let (task, logits, targets, split) = if paths.manifest.is_some() {
        let samples = bundle.graph_samples()?;
        let prepared = prepare_graphs(&samples, &model.config)?;
        let split = make_split(samples.len(), model.config.split, seed)?;
        let targets: Vec<usize> = samples.iter().map(|s| s.label).collect();
        let logits = graph_logit_matrix(&model, &prepared)?;
        (Task::Graph, logits, targets, split)
    } else {
        let (g, x, y) = bundle.node_task()?;
        let prepared = PreparedGraph::from_graph(g, &x, &model.config)?;
        let split = make_split(g.num_nodes(), model.config.split, seed)?;
        let logits = model.node_logits(&prepared)?;
        (Task::Node, logits, y.as_slice().to_vec(), split)
    };
    let acc = |p: Partition| accuracy(&logits, split.part(p), &targets);
    let report = EvalReport {
        task,
        seed,
        train_acc: acc(Partition::Train),
        val_acc: acc(Partition::Val),
        test_acc: acc(Partition::Test),
    };
    let rows: Vec<PredictionRow> = split
        .assignment()
        .into_iter()
        .enumerate()
        .map(|(i, partition)| PredictionRow {
            index: i,
            partition,
            label: targets[i],
            predicted: logits.argmax_row(i),
        })
        .collect();
    write_csv(&dir.join("predictions.csv"), &rows)?;
    write_json(&dir.join("report.json"), &report)
}
