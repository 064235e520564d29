use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::format::{
    parse_labels, read_edge_list, read_features, read_labels, read_text, write_edge_list, write_features,
    write_labels,
};
use crate::graph::{Graph, NodeFeatures, NodeLabels};
use crate::model::train::GraphSample;

/// Degree cap of synthesized one-hot features when none is configured.
pub const DEFAULT_DEGREE_CAP: usize = 32;

/// Where a dataset lives. A node dataset names `edges` (and usually
/// `labels`); a graph dataset names a `manifest`. Relative paths are
/// resolved against the directory of the file that named them.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DataPaths {
    pub edges: Option<PathBuf>,
    pub labels: Option<PathBuf>,
    pub features: Option<PathBuf>,
    pub manifest: Option<PathBuf>,
    /// Labels must lie in `0..num_classes` when set.
    pub num_classes: Option<usize>,
    /// Cap of the degree one-hot features used when no feature file exists.
    pub degree_cap: Option<usize>,
}

impl DataPaths {
    pub fn node(edges: impl Into<PathBuf>, labels: Option<PathBuf>, features: Option<PathBuf>) -> Self {
        DataPaths {
            edges: Some(edges.into()),
            labels,
            features,
            ..Default::default()
        }
    }

    pub fn graphs(manifest: impl Into<PathBuf>) -> Self {
        DataPaths {
            manifest: Some(manifest.into()),
            ..Default::default()
        }
    }

    /// Joins every relative path onto `base`.
    pub fn resolved(&self, base: &Path) -> Self {
        let fix = |p: &Option<PathBuf>| p.as_ref().map(|p| base.join(p));
        DataPaths {
            edges: fix(&self.edges),
            labels: fix(&self.labels),
            features: fix(&self.features),
            manifest: fix(&self.manifest),
            ..self.clone()
        }
    }

    pub fn degree_cap(&self) -> usize {
        self.degree_cap.unwrap_or(DEFAULT_DEGREE_CAP)
    }
}

/// One graph of a bundle with whatever annotations were supplied.
#[derive(Debug, Clone, PartialEq)]
pub struct Member {
    pub id: String,
    pub graph: Graph,
    pub features: Option<NodeFeatures>,
    pub node_labels: Option<NodeLabels>,
    pub graph_label: Option<usize>,
}

impl Member {
    /// Supplied features, or degree one-hot features with cap `degree_cap`.
    pub fn features_or_default(&self, degree_cap: usize) -> NodeFeatures {
        self.features
            .clone()
            .unwrap_or_else(|| NodeFeatures::degree_one_hot(&self.graph, degree_cap))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetBundle {
    pub name: String,
    pub members: Vec<Member>,
    pub sources: Vec<PathBuf>,
    pub degree_cap: usize,
}

impl DatasetBundle {
    /// The single graph and its node labels of a node dataset.
    pub fn node_task(&self) -> Result<(&Graph, NodeFeatures, &NodeLabels)> {
        let [m] = self.members.as_slice() else {
            return Err(Error::InvalidInput(format!(
                "node task needs exactly one graph, dataset {:?} has {}",
                self.name,
                self.members.len()
            )));
        };
        let labels = m
            .node_labels
            .as_ref()
            .ok_or_else(|| Error::InvalidInput(format!("dataset {:?} has no node labels", self.name)))?;
        Ok((&m.graph, m.features_or_default(self.degree_cap), labels))
    }

    /// Labelled samples of a graph dataset; all feature widths must agree.
    pub fn graph_samples(&self) -> Result<Vec<GraphSample>> {
        let mut out = Vec::with_capacity(self.members.len());
        for m in &self.members {
            let label = m
                .graph_label
                .ok_or_else(|| Error::InvalidInput(format!("graph {:?} has no label", m.id)))?;
            out.push(GraphSample {
                id: m.id.clone(),
                graph: m.graph.clone(),
                features: m.features_or_default(self.degree_cap),
                label,
            });
        }
        if let Some(first) = out.first() {
            let d = first.features.dim();
            if let Some(bad) = out.iter().find(|s| s.features.dim() != d) {
                return Err(Error::InvalidInput(format!(
                    "graph {:?} has feature width {}, expected {d}",
                    bad.id,
                    bad.features.dim()
                )));
            }
        }
        Ok(out)
    }
}

fn check_label_range(labels: &[usize], num_classes: Option<usize>, path: &Path) -> Result<()> {
    if let Some(c) = num_classes {
        if let Some(i) = labels.iter().position(|&l| l >= c) {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line: data_line(&read_text(path)?, i),
                message: format!("label {} out of range for {c} classes", labels[i]),
            });
        }
    }
    Ok(())
}

/// 1-based file line of the `index`-th content line.
fn data_line(text: &str, index: usize) -> usize {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.split('#').next().unwrap_or("").trim().is_empty())
        .nth(index)
        .map_or(0, |(i, _)| i + 1)
}

fn load_member(
    id: String,
    edges: &Path,
    labels: Option<&Path>,
    features: Option<&Path>,
    num_classes: Option<usize>,
) -> Result<Member> {
    let node_labels = labels.map(read_labels).transpose()?;
    if let (Some(l), Some(p)) = (&node_labels, labels) {
        check_label_range(l.as_slice(), num_classes, p)?;
    }
    let x = features.map(read_features).transpose()?;
    let min_nodes = node_labels
        .as_ref()
        .map_or(0, NodeLabels::len)
        .max(x.as_ref().map_or(0, NodeFeatures::num_nodes));
    let graph = read_edge_list(edges, min_nodes)?;
    let n = graph.num_nodes();
    if let (Some(l), Some(p)) = (&node_labels, labels) {
        if l.len() != n {
            return Err(Error::InvalidInput(format!(
                "{}: {} labels for {n} nodes",
                p.display(),
                l.len()
            )));
        }
    }
    if let (Some(x), Some(p)) = (&x, features) {
        if x.num_nodes() != n {
            return Err(Error::InvalidInput(format!(
                "{}: {} feature rows for {n} nodes",
                p.display(),
                x.num_nodes()
            )));
        }
    }
    let node_labels = match (node_labels, num_classes) {
        (Some(l), Some(c)) => Some(NodeLabels::with_classes(l.as_slice().to_vec(), c)?),
        (l, _) => l,
    };
    Ok(Member {
        id,
        graph,
        features: x,
        node_labels,
        graph_label: None,
    })
}

/// Reads and validates a dataset. Row counts of labels and features must
/// match the node count, which is the larger of the edge list's extent and
/// those row counts.
pub fn load_dataset(paths: &DataPaths) -> Result<DatasetBundle> {
    let degree_cap = paths.degree_cap();
    match (&paths.edges, &paths.manifest) {
        (Some(edges), None) => {
            let name = file_stem(edges);
            let member = load_member(
                name.clone(),
                edges,
                paths.labels.as_deref(),
                paths.features.as_deref(),
                paths.num_classes,
            )?;
            let sources = [Some(edges), paths.labels.as_ref(), paths.features.as_ref()]
                .into_iter()
                .flatten()
                .cloned()
                .collect();
            Ok(DatasetBundle {
                name,
                members: vec![member],
                sources,
                degree_cap,
            })
        }
        (None, Some(manifest)) => load_manifest(manifest, paths.num_classes, degree_cap),
        _ => Err(Error::InvalidConfig(
            "dataset needs exactly one of an edge list or a graph manifest".into(),
        )),
    }
}

/// Manifest lines are `<edge-file> <label> [<feature-file>]`, relative to
/// the manifest's directory.
fn load_manifest(manifest: &Path, num_classes: Option<usize>, degree_cap: usize) -> Result<DatasetBundle> {
    let text = read_text(manifest)?;
    let base = manifest.parent().unwrap_or(Path::new(""));
    let mut members = Vec::new();
    let mut sources = vec![manifest.to_path_buf()];
    for (i, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let err = |message: String| Error::Parse {
            path: manifest.to_path_buf(),
            line: i + 1,
            message,
        };
        let fields: Vec<&str> = body.split_whitespace().collect();
        if !(2..=3).contains(&fields.len()) {
            return Err(err("expected `<edge-file> <label> [<feature-file>]`".into()));
        }
        let label: usize = parse_labels(fields[1], manifest)
            .ok()
            .and_then(|v| v.first().copied())
            .ok_or_else(|| err(format!("invalid graph label {:?}", fields[1])))?;
        if num_classes.is_some_and(|c| label >= c) {
            return Err(err(format!("graph label {label} out of range")));
        }
        let edges = base.join(fields[0]);
        let features = fields.get(2).map(|f| base.join(f));
        let mut m = load_member(fields[0].to_string(), &edges, None, features.as_deref(), None)?;
        m.graph_label = Some(label);
        sources.push(edges);
        sources.extend(features);
        members.push(m);
    }
    if members.is_empty() {
        return Err(Error::InvalidInput(format!("{}: manifest lists no graphs", manifest.display())));
    }
    Ok(DatasetBundle {
        name: file_stem(manifest),
        members,
        sources,
        degree_cap,
    })
}

fn file_stem(p: &Path) -> String {
    p.file_stem().map_or_else(String::new, |s| s.to_string_lossy().into_owned())
}

/// Writes `bundle` under `dir` and returns the paths that reload it.
/// A single graph with node labels becomes `edges.txt`, `labels.txt` and
/// `features.txt`; anything else becomes `manifest.txt` with one directory
/// entry per graph.
pub fn save_dataset(bundle: &DatasetBundle, dir: &Path) -> Result<DataPaths> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let cap = Some(bundle.degree_cap);
    if let [m] = bundle.members.as_slice() {
        if m.graph_label.is_none() {
            let mut paths = DataPaths::node(dir.join("edges.txt"), None, None);
            write_edge_list(&dir.join("edges.txt"), &m.graph)?;
            if let Some(l) = &m.node_labels {
                write_labels(&dir.join("labels.txt"), l)?;
                paths.labels = Some(dir.join("labels.txt"));
            }
            if let Some(x) = &m.features {
                write_features(&dir.join("features.txt"), x)?;
                paths.features = Some(dir.join("features.txt"));
            }
            paths.degree_cap = cap;
            return Ok(paths);
        }
    }
    let mut manifest = String::new();
    for (i, m) in bundle.members.iter().enumerate() {
        let label = m
            .graph_label
            .ok_or_else(|| Error::InvalidInput(format!("graph {:?} has no label", m.id)))?;
        let edges = format!("g{i}.edges");
        write_edge_list(&dir.join(&edges), &m.graph)?;
        let _ = write!(manifest, "{edges} {label}");
        if let Some(x) = &m.features {
            let f = format!("g{i}.features");
            write_features(&dir.join(&f), x)?;
            let _ = write!(manifest, " {f}");
        }
        manifest.push('\n');
    }
    let path = dir.join("manifest.txt");
    fs::write(&path, manifest).map_err(|e| Error::io(&path, e))?;
    let mut paths = DataPaths::graphs(path);
    paths.degree_cap = cap;
    Ok(paths)
}
