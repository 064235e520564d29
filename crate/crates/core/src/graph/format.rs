//! Plain-text graph formats.
//!
//! * Edge list: one `u v` pair per line, 0-based, `#` starts a comment.
//! * Labels: one non-negative integer per line.
//! * Features: one whitespace-separated row of reals per node.
//!
//! Blank lines are skipped in all three.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::{Graph, NodeFeatures, NodeLabels};
use crate::autodiff::Matrix;
use crate::error::{Error, Result};

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let body = line.split('#').next().unwrap_or("").trim();
        (!body.is_empty()).then_some((i + 1, body))
    })
}

fn parse_error(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

pub(crate) fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

/// Parses edge-list text. `path` is used for diagnostics only.
pub fn parse_edge_list(text: &str, path: &Path) -> Result<Vec<(usize, usize)>> {
    let mut pairs = Vec::new();
    for (line, body) in content_lines(text) {
        let mut fields = body.split_whitespace();
        let mut next = |what: &str| -> Result<usize> {
            let tok = fields
                .next()
                .ok_or_else(|| parse_error(path, line, format!("missing {what} endpoint")))?;
            tok.parse()
                .map_err(|_| parse_error(path, line, format!("invalid node index {tok:?}")))
        };
        let u = next("first")?;
        let v = next("second")?;
        if fields.next().is_some() {
            return Err(parse_error(path, line, "expected exactly two fields"));
        }
        pairs.push((u, v));
    }
    Ok(pairs)
}

/// Reads an edge list; the node count is one past the largest index unless
/// `min_nodes` is larger.
pub fn read_edge_list(path: &Path, min_nodes: usize) -> Result<Graph> {
    let pairs = parse_edge_list(&read_text(path)?, path)?;
    let n = pairs
        .iter()
        .map(|&(u, v)| u.max(v) + 1)
        .max()
        .unwrap_or(0)
        .max(min_nodes);
    Graph::from_edges(n, pairs)
}

pub fn edge_list_text(g: &Graph) -> String {
    let mut out = String::new();
    for &(u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

pub fn write_edge_list(path: &Path, g: &Graph) -> Result<()> {
    fs::write(path, edge_list_text(g)).map_err(|e| Error::io(path, e))
}

pub fn parse_labels(text: &str, path: &Path) -> Result<Vec<usize>> {
    content_lines(text)
        .map(|(line, body)| {
            body.parse()
                .map_err(|_| parse_error(path, line, format!("invalid label {body:?}")))
        })
        .collect()
}

pub fn read_labels(path: &Path) -> Result<NodeLabels> {
    Ok(NodeLabels::new(parse_labels(&read_text(path)?, path)?))
}

pub fn write_labels(path: &Path, labels: &NodeLabels) -> Result<()> {
    let mut out = String::new();
    for l in labels.as_slice() {
        let _ = writeln!(out, "{l}");
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

pub fn parse_features(text: &str, path: &Path) -> Result<Matrix> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (line, body) in content_lines(text) {
        let row = body
            .split_whitespace()
            .map(|tok| match tok.parse::<f64>() {
                Ok(x) if x.is_finite() => Ok(x),
                _ => Err(parse_error(path, line, format!("invalid feature value {tok:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(parse_error(
                    path,
                    line,
                    format!("ragged feature row: {} values, expected {}", row.len(), first.len()),
                ));
            }
        }
        rows.push(row);
    }
    let cols = rows.first().map_or(0, Vec::len);
    Ok(Matrix::from_vec(rows.len(), cols, rows.concat()).expect("row lengths checked"))
}

pub fn read_features(path: &Path) -> Result<NodeFeatures> {
    NodeFeatures::new(parse_features(&read_text(path)?, path)?)
}

pub fn write_features(path: &Path, x: &NodeFeatures) -> Result<()> {
    let m = x.matrix();
    let mut out = String::new();
    for r in 0..m.rows() {
        let row: Vec<String> = m.row(r).iter().map(|v| format!("{v:?}")).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}
